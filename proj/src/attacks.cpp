#include "personamark/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>

namespace personamark {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Thesaurus Thesaurus::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open thesaurus: " + path);
  Thesaurus th;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw MalformedThesaurus(path, lineno, "expected word<TAB>POS<TAB>syn1,syn2,...");
    std::string word = line.substr(0, t1);
    auto pos = pos_from_name(line.substr(t1 + 1, t2 - t1 - 1));
    if (!pos)
      throw MalformedThesaurus(path, lineno, "unknown POS " + line.substr(t1 + 1, t2 - t1 - 1));
    std::vector<std::string> syns;
    std::string rest = line.substr(t2 + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      if (comma == std::string::npos) comma = rest.size();
      std::string syn = rest.substr(start, comma - start);
      if (!syn.empty()) {
        if (syn == word)
          throw MalformedThesaurus(path, lineno, "synonym list contains its headword");
        if (syn != to_lower(syn))
          throw MalformedThesaurus(path, lineno, "entries must be lowercase");
        syns.push_back(std::move(syn));
      }
      start = comma + 1;
    }
    if (word != to_lower(word))
      throw MalformedThesaurus(path, lineno, "entries must be lowercase");
    th.add(std::move(word), *pos, std::move(syns));
  }
  return th;
}

void Thesaurus::add(std::string word, Pos pos, std::vector<std::string> synonyms) {
  table_[{std::move(word), pos}] = std::move(synonyms);
}

const std::vector<std::string>* Thesaurus::lookup(std::string_view lower, Pos pos) const {
  auto it = table_.find({std::string(lower), pos});
  if (it == table_.end() || it->second.empty()) return nullptr;
  return &it->second;
}

AttackResult synonym_attack(std::string_view text, const Thesaurus& thesaurus,
                            const AttackConfig& cfg, const Tagger& tagger) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);

  AttackResult result;
  result.text.reserve(text.size());

  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      result.text += text[i];
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    std::string_view word = text.substr(i, j - i);
    i = j;

    // every word draws, so the replacement schedule is independent of the
    // thesaurus contents
    const double u = uniform01(rng);
    const std::uint64_t pick_raw = rng();

    Token tok;
    tok.surface = std::string(word);
    tok.lower = to_lower(word);
    const Pos pos = tagger.tag_word(tok);
    const std::vector<std::string>* syns =
        pos == Pos::Punct ? nullptr : thesaurus.lookup(tok.lower, pos);
    if (u >= cfg.rate || !syns) {
      result.text += word;
      continue;
    }
    std::string replacement = (*syns)[pick_raw % syns->size()];
    if (cfg.preserve_case && std::isupper(static_cast<unsigned char>(word[0])))
      replacement[0] =
          static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
    result.replacements.emplace_back(std::string(word), replacement);
    ++result.replaced_count;
    result.text += replacement;
  }
  return result;
}

}  // namespace personamark
