#pragma once

// Desk-scale metrics: Flesch reading ease with the shipped syllable
// heuristic, ROC-AUC / F1 for detector sweeps, and pooled bit balance.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "personamark/hashing.hpp"
#include "personamark/parsing.hpp"

namespace personamark {

inline constexpr std::string_view kSyllableHeuristicVersion = "pm-syllables-1";

class EmptyText : public std::runtime_error {
 public:
  EmptyText() : std::runtime_error("text has no words") {}
};

class OneClassOnly : public std::runtime_error {
 public:
  OneClassOnly() : std::runtime_error("need both positive and negative examples") {}
};

struct ReadabilityScore {
  double re = 0.0;  // 206.835 - 0.846*wl - 1.015*sl
  double wl = 0.0;  // syllables per 100 words
  double sl = 0.0;  // average words per sentence
};

struct ScoredExample {
  double score = 0.0;
  bool label = false;
};

int syllable_count(std::string_view word);

ReadabilityScore flesch(std::string_view text,
                        std::string_view delimiters = kDefaultDelimiters);

double roc_auc(const std::vector<ScoredExample>& examples);
double f1_at_threshold(const std::vector<ScoredExample>& examples, double threshold);

double bit_balance(const KeyRecord& record, const std::vector<std::string>& texts,
                   const StructureExtractor& extractor,
                   std::string_view delimiters = kDefaultDelimiters,
                   int structural_threshold = 5);

struct SweepRow {
  double threshold;
  int tp, fp, fn, tn;
  double f1;
};

std::vector<SweepRow> threshold_sweep(const std::vector<ScoredExample>& examples,
                                      const std::vector<double>& thresholds);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string roc_csv(const std::vector<ScoredExample>& examples);

}  // namespace personamark
