#include "personamark/injection.hpp"

#include <algorithm>

#include "json.hpp"

namespace personamark {

namespace {

// best score, ties broken by lexicographically smallest text
const CandidateSentence* best_of(const std::vector<CandidateSentence>& cands,
                                 auto&& eligible) {
  const CandidateSentence* best = nullptr;
  for (const CandidateSentence& c : cands) {
    if (!eligible(c)) continue;
    if (!best || c.score > best->score ||
        (c.score == best->score && c.text < best->text))
      best = &c;
  }
  return best;
}

}  // namespace

bool InjectionTrace::fallback_free() const {
  return std::none_of(steps.begin(), steps.end(),
                      [](const StepRecord& s) { return s.fallback; });
}

std::string InjectionTrace::to_jsonl() const {
  std::string out;
  for (const StepRecord& s : steps) {
    nlohmann::json j = {
        {"candidate_count", s.candidate_count}, {"bit1_count", s.bit1_count},
        {"retries_used", s.retries_used},       {"fallback", s.fallback},
        {"chosen_sentence", s.chosen_sentence}, {"chosen_bit", s.chosen_bit},
    };
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::uint64_t substream_seed(std::uint64_t seed, int step, int retry) {
  // splitmix64 over a mixed counter
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(step) * 64 +
                                                    static_cast<std::uint64_t>(retry) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

InjectionResult inject(const KeyRecord& record, const std::string& prompt,
                       const CandidateGenerator& generator,
                       const StructureExtractor& extractor, const InjectionConfig& cfg,
                       const GeneratorConfig& gen_cfg, std::uint64_t rng_seed) {
  if (cfg.sent_num < 1) throw std::invalid_argument("sent_num must be >= 1");

  GeneratorConfig step_cfg = gen_cfg;
  step_cfg.delimiters = cfg.delimiters;

  // order is only used for tail bookkeeping; 3 matches the default model
  constexpr int kTailOrder = 3;
  GenContext ctx = make_context(prompt, kTailOrder);

  InjectionResult result;
  for (int step = 0; step < cfg.sent_num; ++step) {
    StepRecord rec;
    CandidateSentence chosen;
    bool have_chosen = false;
    std::vector<CandidateSentence> last_filtered;

    for (int retry = 0; retry <= cfg.max_retries; ++retry) {
      const double temperature = retry == 0 ? 1.0 : step_cfg.fallback_temperature;
      std::vector<CandidateSentence> cands;
      try {
        cands = generator.generate(ctx, step_cfg, temperature,
                                   substream_seed(rng_seed, step, retry));
      } catch (const DeadEnd&) {
        continue;
      }
      std::vector<CandidateSentence> filtered = hypothesis_filter(cands, ctx, step_cfg);
      if (filtered.empty()) continue;

      rec.candidate_count = static_cast<int>(filtered.size());
      rec.retries_used = retry;
      rec.bit1_count = 0;

      std::vector<int> bits(filtered.size(), -1);
      for (std::size_t i = 0; i < filtered.size(); ++i) {
        if (filtered[i].word_count <= cfg.structural_threshold) continue;
        const StructureString s = extractor.extract_text(filtered[i].text);
        if (s.empty()) continue;
        bits[i] = structure_bit(record, s);
        rec.bit1_count += bits[i];
      }

      const CandidateSentence* pick = nullptr;
      for (std::size_t i = 0; i < filtered.size(); ++i) {
        if (bits[i] != 1) continue;
        if (!pick || filtered[i].score > pick->score ||
            (filtered[i].score == pick->score && filtered[i].text < pick->text))
          pick = &filtered[i];
      }
      if (pick) {
        chosen = *pick;
        have_chosen = true;
        rec.chosen_bit = 1;
        rec.fallback = false;
        break;
      }
      last_filtered = std::move(filtered);
    }

    if (!have_chosen) {
      // retries exhausted: emit the best surviving candidate regardless of
      // its bit and flag the step
      if (last_filtered.empty()) throw GenerationExhausted(step);
      chosen = *best_of(last_filtered, [](const CandidateSentence&) { return true; });
      rec.fallback = true;
      rec.retries_used = cfg.max_retries;
      if (chosen.word_count > cfg.structural_threshold) {
        const StructureString s = extractor.extract_text(chosen.text);
        rec.chosen_bit = s.empty() ? -1 : structure_bit(record, s);
      } else {
        rec.chosen_bit = -1;
      }
    }

    rec.chosen_sentence = chosen.text;
    if (!result.text.empty()) result.text += ' ';
    result.text += chosen.text;
    advance_context(ctx, chosen, kTailOrder);
    result.trace.steps.push_back(std::move(rec));
  }
  return result;
}

}  // namespace personamark
