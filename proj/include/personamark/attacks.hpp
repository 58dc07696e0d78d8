#pragma once

// Synonym-substitution attack simulator. Replacement candidates are looked
// up by (word, POS-under-the-shipped-tagger); the replacement rate is hard
// capped at 40%.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "personamark/parsing.hpp"

namespace personamark {

class MalformedThesaurus : public std::runtime_error {
 public:
  MalformedThesaurus(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

class Thesaurus {
 public:
  static Thesaurus load(const std::string& path);

  void add(std::string word, Pos pos, std::vector<std::string> synonyms);
  const std::vector<std::string>* lookup(std::string_view lower, Pos pos) const;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<std::string, Pos>, std::vector<std::string>> table_;
};

inline constexpr double kMaxAttackRate = 0.4;

struct AttackConfig {
  double rate = 0.0;  // in [0, 0.4]
  std::uint64_t rng_seed = 0;
  bool preserve_case = true;

  void validate() const {
    if (rate < 0.0 || rate > kMaxAttackRate)
      throw std::invalid_argument("attack rate exceeds cap 0.4");
  }
};

struct AttackResult {
  std::string text;
  int replaced_count = 0;
  std::vector<std::pair<std::string, std::string>> replacements;
};

AttackResult synonym_attack(std::string_view text, const Thesaurus& thesaurus,
                            const AttackConfig& cfg, const Tagger& tagger);

}  // namespace personamark
