#pragma once

// Candidate-sentence generation with the control surface of grouped diverse
// beam search: group-wise diversity penalty, repetition penalty, top-k /
// nucleus truncation, temperature and length-normalized scoring. The default
// engine is a corpus-backed n-gram sampler; an HTTP adapter lets an external
// completion API stand in for it.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "personamark/parsing.hpp"

namespace personamark {

struct GenContext {
  std::string prompt;
  std::vector<std::string> emitted;
  std::vector<std::string> tail_tokens;  // last (order-1) lowercased tokens
};

struct CandidateSentence {
  std::string text;   // exactly one sentence, ends in a delimiter
  double score = 0.0;
  int group = 0;
  int word_count = 0;
  bool short_sentence = false;  // at or under the structural threshold
};

struct GeneratorConfig {
  int num_beams = 24;
  int num_beam_groups = 12;
  double diversity_penalty = 1.5;
  double repetition_penalty = 1.1;
  double length_penalty = 0.7;
  int top_k = 50;
  double top_p = 0.95;
  double fallback_temperature = 2.0;
  int min_words = 6;
  int max_words = 40;
  std::string delimiters{kDefaultDelimiters};

  void validate() const;
};

class CorpusTooSmall : public std::runtime_error {
 public:
  explicit CorpusTooSmall(std::size_t tokens)
      : std::runtime_error("corpus has " + std::to_string(tokens) +
                           " tokens, need at least 10000") {}
};

class DeadEnd : public std::runtime_error {
 public:
  DeadEnd() : std::runtime_error("no continuation exists for this context") {}
};

// Backoff n-gram model over lowercased corpus tokens (sentence delimiters are
// tokens too). Successor log-probabilities use add-one smoothing over the
// observed successor set; lists are stored in a fixed order so sampling is
// reproducible.
class NGramModel {
 public:
  static NGramModel build_from_text(std::string_view corpus, int order = 3);
  static NGramModel build(const std::string& corpus_path, int order = 3);

  int order() const { return order_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }

  struct Successor {
    std::string token;
    double logprob;
  };
  // longest-suffix backoff over context lengths order-1 .. 0
  const std::vector<Successor>& successors(const std::vector<std::string>& context) const;

  double sentence_logprob(const std::vector<std::string>& tokens,
                          const std::vector<std::string>& context) const;

 private:
  int order_ = 3;
  std::map<std::string, std::vector<Successor>> transitions_;  // key: joined context
  std::vector<std::string> vocabulary_;
};

std::vector<CandidateSentence> generate_candidates(const NGramModel& model,
                                                   const GenContext& ctx,
                                                   const GeneratorConfig& cfg,
                                                   double temperature,
                                                   std::uint64_t rng_seed);

using RuleChecker = std::function<bool(const CandidateSentence&)>;
RuleChecker default_rule_checker(std::string_view delimiters = kDefaultDelimiters);

std::vector<CandidateSentence> hypothesis_filter(const std::vector<CandidateSentence>& cands,
                                                 const GenContext& ctx,
                                                 const GeneratorConfig& cfg,
                                                 const RuleChecker& rule_checker = nullptr);

std::vector<CandidateSentence> fuse_scores(const std::vector<CandidateSentence>& cands,
                                           const NGramModel& aux_model, double lambda);

struct EndpointConfig {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string path = "/candidates";
  int timeout_seconds = 10;
  std::string delimiters{kDefaultDelimiters};
};

class EndpointUnavailable : public std::runtime_error {
 public:
  explicit EndpointUnavailable(const std::string& what) : std::runtime_error(what) {}
};

class MalformedResponse : public std::runtime_error {
 public:
  explicit MalformedResponse(const std::string& what) : std::runtime_error(what) {}
};

std::vector<CandidateSentence> external_candidates(const EndpointConfig& endpoint,
                                                   const GenContext& ctx, int n);

// Seam between the injector and whatever produces candidates.
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual std::vector<CandidateSentence> generate(const GenContext& ctx,
                                                  const GeneratorConfig& cfg,
                                                  double temperature,
                                                  std::uint64_t rng_seed) const = 0;
};

class NGramGenerator : public CandidateGenerator {
 public:
  explicit NGramGenerator(const NGramModel& model) : model_(&model) {}
  std::vector<CandidateSentence> generate(const GenContext& ctx, const GeneratorConfig& cfg,
                                          double temperature,
                                          std::uint64_t rng_seed) const override {
    return generate_candidates(*model_, ctx, cfg, temperature, rng_seed);
  }
  const NGramModel& model() const { return *model_; }

 private:
  const NGramModel* model_;
};

// Context bookkeeping shared by injection and plain sampling.
GenContext make_context(std::string_view prompt, int model_order);
void advance_context(GenContext& ctx, const CandidateSentence& chosen, int model_order);

}  // namespace personamark
