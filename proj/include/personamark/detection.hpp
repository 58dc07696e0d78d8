#pragma once

// Per-user bit extraction, the one-sided Z-test on the bit-1 proportion, and
// attribution over the whole key database. Structure extraction is done once
// per text; only the (cheap) per-user hashing runs inside the user loop.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "personamark/hashing.hpp"
#include "personamark/parsing.hpp"

namespace personamark {

class NoScorableSentences : public std::runtime_error {
 public:
  NoScorableSentences()
      : std::runtime_error("no sentence exceeds the structural threshold") {}
};

class DegenerateSample : public std::runtime_error {
 public:
  DegenerateSample() : std::runtime_error("z-score needs at least one sample") {}
};

struct DetectorConfig {
  double z_threshold = 4.0;
  double alpha = 3.1671241833119921e-5;  // one-sided tail at z = 4
  int min_sentences = 1;
  bool bonferroni = false;
  int structural_threshold = 5;  // must match the injector's
};

struct DetectionReport {
  std::string user;
  int n = 0;
  int ones = 0;
  double p_hat = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  bool detected = false;
  int skipped_short = 0;
};

struct AttributionResult {
  std::optional<std::string> best_user;
  double best_z = 0.0;
  bool ambiguous = false;
  std::vector<std::string> candidates;  // users with detected == true
  std::vector<DetectionReport> reports;
  double elapsed_seconds = 0.0;
};

struct EncodedBits {
  std::vector<int> bits;
  int skipped_short = 0;
};

// Structures of the scorable sentences, extracted once for reuse across keys.
struct TextStructures {
  std::vector<std::string> serialized;  // one per long sentence, in order
  int skipped_short = 0;
};

TextStructures extract_text_structures(std::string_view text,
                                       const StructureExtractor& extractor,
                                       std::string_view delimiters,
                                       int structural_threshold);

EncodedBits encode_text_bits(const KeyRecord& record, std::string_view text,
                             const StructureExtractor& extractor,
                             std::string_view delimiters, int structural_threshold);

double z_score(int ones, int n);
double p_value(double z);

// upper-tail standard normal quantile, used for the Bonferroni threshold
double normal_upper_quantile(double tail);

DetectionReport detect_single(const KeyRecord& record, std::string_view text,
                              const StructureExtractor& extractor,
                              const DetectorConfig& cfg,
                              std::string_view delimiters = kDefaultDelimiters);

DetectionReport detect_from_structures(const KeyRecord& record,
                                       const TextStructures& structures,
                                       const DetectorConfig& cfg,
                                       double threshold_override);

AttributionResult attribute(const KeyDatabase& db, std::string_view text,
                            const StructureExtractor& extractor,
                            const DetectorConfig& cfg,
                            std::string_view delimiters = kDefaultDelimiters);

}  // namespace personamark
