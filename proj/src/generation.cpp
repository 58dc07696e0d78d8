#include "personamark/generation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "httplib.h"
#include "json.hpp"

namespace personamark {

namespace {

constexpr char kCtxSep = '\x1f';
constexpr int kShortSentenceBypass = 5;  // structural threshold for the bypass flag
constexpr double kUnseenLogprob = -20.0;

std::string join_context(const std::vector<std::string>& ctx, std::size_t from) {
  std::string key;
  for (std::size_t i = from; i < ctx.size(); ++i) {
    if (i > from) key += kCtxSep;
    key += ctx[i];
  }
  return key;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool is_delimiter_token(const std::string& tok, std::string_view delimiters) {
  return tok.size() == 1 && delimiters.find(tok[0]) != std::string_view::npos;
}

std::vector<std::string> lower_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.lower);
  return out;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (num_beams < 1 || num_beam_groups < 1 || num_beams % num_beam_groups != 0)
    throw std::invalid_argument("num_beams must be a positive multiple of num_beam_groups");
  if (top_p <= 0.0 || top_p > 1.0) throw std::invalid_argument("top_p must be in (0, 1]");
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  if (diversity_penalty < 0.0 || repetition_penalty <= 0.0 || length_penalty <= 0.0)
    throw std::invalid_argument("penalties must be positive");
  if (min_words < 1 || max_words < min_words)
    throw std::invalid_argument("bad word-count limits");
}

NGramModel NGramModel::build(const std::string& corpus_path, int order) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + corpus_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return build_from_text(buf.str(), order);
}

NGramModel NGramModel::build_from_text(std::string_view corpus, int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  std::vector<std::string> stream = lower_tokens(corpus);
  if (stream.size() < 10000) throw CorpusTooSmall(stream.size());

  NGramModel model;
  model.order_ = order;

  std::unordered_set<std::string> vocab(stream.begin(), stream.end());
  model.vocabulary_.assign(vocab.begin(), vocab.end());
  std::sort(model.vocabulary_.begin(), model.vocabulary_.end());

  // counts per context length 0 .. order-1
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint32_t>> counts;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    for (int len = 0; len < order; ++len) {
      if (i < static_cast<std::size_t>(len)) break;
      std::string key = std::to_string(len);
      key += kCtxSep;
      for (int k = len; k >= 1; --k) {
        key += stream[i - k];
        if (k > 1) key += kCtxSep;
      }
      ++counts[key][stream[i]];
    }
  }
  for (auto& [key, succ] : counts) {
    double total = 0;
    for (const auto& [tok, c] : succ) total += c;
    const double denom = total + static_cast<double>(succ.size());
    std::vector<Successor> list;
    list.reserve(succ.size());
    for (const auto& [tok, c] : succ)
      list.push_back({tok, std::log((c + 1.0) / denom)});
    std::sort(list.begin(), list.end(), [](const Successor& a, const Successor& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      return a.token < b.token;
    });
    model.transitions_.emplace(key, std::move(list));
  }
  return model;
}

const std::vector<NGramModel::Successor>& NGramModel::successors(
    const std::vector<std::string>& context) const {
  const std::size_t maxlen =
      std::min<std::size_t>(context.size(), static_cast<std::size_t>(order_ - 1));
  for (std::size_t len = maxlen; len + 1 > 0; --len) {
    std::string key = std::to_string(len);
    key += kCtxSep;
    key += join_context(context, context.size() - len);
    auto it = transitions_.find(key);
    if (it != transitions_.end()) return it->second;
    if (len == 0) break;
  }
  throw DeadEnd();
}

double NGramModel::sentence_logprob(const std::vector<std::string>& tokens,
                                    const std::vector<std::string>& context) const {
  std::vector<std::string> ctx = context;
  double total = 0.0;
  for (const std::string& tok : tokens) {
    double lp = kUnseenLogprob;
    try {
      for (const Successor& s : successors(ctx)) {
        if (s.token == tok) {
          lp = s.logprob;
          break;
        }
      }
    } catch (const DeadEnd&) {
    }
    total += lp;
    ctx.push_back(tok);
  }
  return total;
}

std::vector<CandidateSentence> generate_candidates(const NGramModel& model,
                                                   const GenContext& ctx,
                                                   const GeneratorConfig& cfg,
                                                   double temperature,
                                                   std::uint64_t rng_seed) {
  cfg.validate();
  if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");

  std::mt19937_64 rng(rng_seed);
  const int beams_per_group = cfg.num_beams / cfg.num_beam_groups;
  const std::unordered_set<std::string> tail_set(ctx.tail_tokens.begin(),
                                                 ctx.tail_tokens.end());

  // per position: token -> number of earlier groups that chose it there
  std::vector<std::unordered_map<std::string, int>> group_choices;
  std::vector<CandidateSentence> out;
  out.reserve(cfg.num_beams);

  struct Adjusted {
    const NGramModel::Successor* succ;
    double score;
  };

  for (int group = 0; group < cfg.num_beam_groups; ++group) {
    std::vector<std::vector<std::string>> group_token_log;
    for (int beam = 0; beam < beams_per_group; ++beam) {
      std::vector<std::string> context = ctx.tail_tokens;
      std::vector<std::string> words;
      std::unordered_set<std::string> used;
      double total_logprob = 0.0;
      char terminal = '.';

      for (int posn = 0; posn < cfg.max_words; ++posn) {
        const auto& succ = model.successors(context);
        std::vector<Adjusted> adjusted;
        adjusted.reserve(succ.size());
        for (const auto& s : succ) {
          if (posn == 0 && is_delimiter_token(s.token, cfg.delimiters))
            continue;  // never emit an empty sentence
          double score = s.logprob;
          if (tail_set.count(s.token) || used.count(s.token))
            score *= cfg.repetition_penalty;  // log-probs are negative
          if (posn < static_cast<int>(group_choices.size())) {
            auto it = group_choices[posn].find(s.token);
            if (it != group_choices[posn].end())
              score -= cfg.diversity_penalty * it->second;
          }
          adjusted.push_back({&s, score});
        }
        if (adjusted.empty()) throw DeadEnd();
        std::sort(adjusted.begin(), adjusted.end(), [](const Adjusted& a, const Adjusted& b) {
          if (a.score != b.score) return a.score > b.score;
          return a.succ->token < b.succ->token;
        });
        if (static_cast<int>(adjusted.size()) > cfg.top_k)
          adjusted.resize(cfg.top_k);

        // nucleus truncation at the given temperature
        const double max_score = adjusted.front().score;
        double norm = 0.0;
        std::vector<double> weights(adjusted.size());
        for (std::size_t i = 0; i < adjusted.size(); ++i) {
          weights[i] = std::exp((adjusted[i].score - max_score) / temperature);
          norm += weights[i];
        }
        double cum = 0.0;
        std::size_t keep = adjusted.size();
        for (std::size_t i = 0; i < adjusted.size(); ++i) {
          cum += weights[i] / norm;
          if (cum >= cfg.top_p) {
            keep = i + 1;
            break;
          }
        }
        double kept_norm = 0.0;
        for (std::size_t i = 0; i < keep; ++i) kept_norm += weights[i];
        double u = uniform01(rng) * kept_norm;
        std::size_t pick = keep - 1;
        for (std::size_t i = 0; i < keep; ++i) {
          u -= weights[i];
          if (u <= 0.0) {
            pick = i;
            break;
          }
        }

        const std::string& tok = adjusted[pick].succ->token;
        total_logprob += adjusted[pick].succ->logprob;
        if (static_cast<int>(group_token_log.size()) <= posn)
          group_token_log.emplace_back();
        group_token_log[posn].push_back(tok);
        context.push_back(tok);
        if (is_delimiter_token(tok, cfg.delimiters)) {
          terminal = tok[0];
          break;
        }
        words.push_back(tok);
        used.insert(tok);
      }

      if (words.empty()) continue;
      CandidateSentence cand;
      std::string text;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) text += ' ';
        text += words[i];
      }
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
      text += terminal;
      cand.text = std::move(text);
      cand.word_count = static_cast<int>(words.size());
      cand.score = total_logprob / std::pow(static_cast<double>(cand.word_count),
                                            cfg.length_penalty);
      cand.group = group;
      cand.short_sentence = cand.word_count <= kShortSentenceBypass;
      out.push_back(std::move(cand));
    }
    // expose this group's choices to later groups
    if (group_choices.size() < group_token_log.size())
      group_choices.resize(group_token_log.size());
    for (std::size_t posn = 0; posn < group_token_log.size(); ++posn)
      for (const std::string& tok : group_token_log[posn])
        ++group_choices[posn][tok];
  }
  if (out.empty()) throw DeadEnd();
  return out;
}

RuleChecker default_rule_checker(std::string_view delimiters) {
  std::string delims(delimiters);
  return [delims](const CandidateSentence& cand) {
    if (cand.text.empty()) return false;
    if (!std::isupper(static_cast<unsigned char>(cand.text.front()))) return false;
    return delims.find(cand.text.back()) != std::string::npos;
  };
}

std::vector<CandidateSentence> hypothesis_filter(const std::vector<CandidateSentence>& cands,
                                                 const GenContext& ctx,
                                                 const GeneratorConfig& cfg,
                                                 const RuleChecker& rule_checker) {
  // 3-grams already present in the context disqualify a candidate
  std::unordered_set<std::string> seen_trigrams;
  auto collect = [&](std::string_view text) {
    std::vector<std::string> words;
    for (const Token& t : tokenize(text))
      if (!t.is_punct()) words.push_back(t.lower);
    for (std::size_t i = 0; i + 2 < words.size(); ++i)
      seen_trigrams.insert(words[i] + ' ' + words[i + 1] + ' ' + words[i + 2]);
  };
  collect(ctx.prompt);
  for (const auto& s : ctx.emitted) collect(s);

  const RuleChecker& checker =
      rule_checker ? rule_checker : default_rule_checker(cfg.delimiters);

  std::vector<CandidateSentence> out;
  out.reserve(cands.size());
  for (const CandidateSentence& cand : cands) {
    const bool short_bypass = cand.word_count <= kShortSentenceBypass;
    if (!short_bypass &&
        (cand.word_count < cfg.min_words || cand.word_count > cfg.max_words))
      continue;
    std::vector<std::string> words;
    for (const Token& t : tokenize(cand.text))
      if (!t.is_punct()) words.push_back(t.lower);
    bool repeats = false;
    for (std::size_t i = 0; i + 2 < words.size() && !repeats; ++i)
      repeats = seen_trigrams.count(words[i] + ' ' + words[i + 1] + ' ' + words[i + 2]) > 0;
    if (repeats) continue;
    if (!checker(cand)) continue;
    CandidateSentence kept = cand;
    kept.short_sentence = short_bypass;
    out.push_back(std::move(kept));
  }
  return out;
}

std::vector<CandidateSentence> fuse_scores(const std::vector<CandidateSentence>& cands,
                                           const NGramModel& aux_model, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda must be in [0, 1]");
  std::vector<CandidateSentence> out = cands;
  for (CandidateSentence& cand : out) {
    std::vector<std::string> toks = lower_tokens(cand.text);
    if (toks.empty()) continue;
    const double aux =
        aux_model.sentence_logprob(toks, {}) / static_cast<double>(toks.size());
    cand.score = (1.0 - lambda) * cand.score + lambda * aux;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidateSentence& a, const CandidateSentence& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.text < b.text;
                   });
  return out;
}

std::vector<CandidateSentence> external_candidates(const EndpointConfig& endpoint,
                                                   const GenContext& ctx, int n) {
  httplib::Client client(endpoint.host, endpoint.port);
  client.set_connection_timeout(endpoint.timeout_seconds, 0);
  client.set_read_timeout(endpoint.timeout_seconds, 0);

  nlohmann::json request = {
      {"context", ctx.prompt},
      {"n", n},
      {"top_k", 50},
      {"top_p", 0.95},
      {"temperature", 1.0},
  };
  if (!ctx.emitted.empty()) {
    std::string full = ctx.prompt;
    for (const auto& s : ctx.emitted) {
      full += ' ';
      full += s;
    }
    request["context"] = full;
  }

  auto res = client.Post(endpoint.path, request.dump(), "application/json");
  if (!res)
    throw EndpointUnavailable("endpoint unreachable: " + endpoint.host + ":" +
                              std::to_string(endpoint.port));
  if (res->status != 200)
    throw EndpointUnavailable("endpoint returned HTTP " + std::to_string(res->status));

  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedResponse(std::string("bad JSON: ") + e.what());
  }
  if (!body.contains("candidates") || !body["candidates"].is_array())
    throw MalformedResponse("response missing candidates array");

  std::vector<CandidateSentence> out;
  for (const auto& item : body["candidates"]) {
    if (!item.contains("text") || !item["text"].is_string())
      throw MalformedResponse("candidate missing text field");
    std::string text = item["text"].get<std::string>();
    auto sentences = split_sentences(text, endpoint.delimiters);
    if (sentences.empty()) continue;
    const Sentence& first = sentences.front();
    CandidateSentence cand;
    cand.text = first.raw + first.terminal;
    cand.word_count = first.word_count;
    cand.short_sentence = first.word_count <= kShortSentenceBypass;
    cand.score = item.value("logprob", 0.0);
    out.push_back(std::move(cand));
  }
  return out;
}

GenContext make_context(std::string_view prompt, int model_order) {
  GenContext ctx;
  ctx.prompt = std::string(prompt);
  std::vector<std::string> toks = lower_tokens(prompt);
  const std::size_t k = static_cast<std::size_t>(std::max(0, model_order - 1));
  const std::size_t from = toks.size() > k ? toks.size() - k : 0;
  ctx.tail_tokens.assign(toks.begin() + from, toks.end());
  return ctx;
}

void advance_context(GenContext& ctx, const CandidateSentence& chosen, int model_order) {
  ctx.emitted.push_back(chosen.text);
  std::vector<std::string> toks = ctx.tail_tokens;
  for (const std::string& t : lower_tokens(chosen.text)) toks.push_back(t);
  const std::size_t k = static_cast<std::size_t>(std::max(0, model_order - 1));
  const std::size_t from = toks.size() > k ? toks.size() - k : 0;
  ctx.tail_tokens.assign(toks.begin() + from, toks.end());
}

}  // namespace personamark
