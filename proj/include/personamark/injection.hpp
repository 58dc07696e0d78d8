#pragma once

// Watermark embedding loop: generate candidates, keep the bit-1 survivors
// under the user's key, emit the best, repeat for sent_num sentences. When
// no bit-1 candidate survives, regeneration happens at the fallback
// temperature; after max_retries the best unfiltered candidate is emitted
// and flagged in the trace.

#include <cstdint>
#include <string>
#include <vector>

#include "personamark/generation.hpp"
#include "personamark/hashing.hpp"
#include "personamark/parsing.hpp"

namespace personamark {

struct InjectionConfig {
  int sent_num = 16;
  int structural_threshold = 5;  // words; at or below bypasses watermarking
  int max_retries = 4;
  std::string delimiters{kDefaultDelimiters};
};

struct StepRecord {
  int candidate_count = 0;
  int bit1_count = 0;
  int retries_used = 0;
  bool fallback = false;
  std::string chosen_sentence;
  int chosen_bit = -1;  // -1 for a short-sentence bypass
};

struct InjectionTrace {
  std::vector<StepRecord> steps;

  bool fallback_free() const;
  std::string to_jsonl() const;
};

struct InjectionResult {
  std::string text;
  InjectionTrace trace;
};

class GenerationExhausted : public std::runtime_error {
 public:
  explicit GenerationExhausted(int step)
      : std::runtime_error("no candidates survived at step " + std::to_string(step)) {}
};

// Deterministic seed substream for (step, retry) pairs; exposed so tests can
// pin the exact schedule.
std::uint64_t substream_seed(std::uint64_t seed, int step, int retry);

InjectionResult inject(const KeyRecord& record, const std::string& prompt,
                       const CandidateGenerator& generator,
                       const StructureExtractor& extractor, const InjectionConfig& cfg,
                       const GeneratorConfig& gen_cfg, std::uint64_t rng_seed);

}  // namespace personamark
