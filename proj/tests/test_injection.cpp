#include "doctest.h"

#include <random>

#include "personamark/detection.hpp"
#include "personamark/injection.hpp"
#include "test_util.hpp"

using namespace personamark;
using pmtest::fixture;

namespace {

const NGramModel& corpus_model() {
  static NGramModel model = NGramModel::build(pmtest::data_path("corpus.txt"), 3);
  return model;
}

KeyRecord make_record(const std::string& user, std::uint64_t seed) {
  KeyDatabase db;
  return db.register_user(user, seed);
}

// Emits a fixed candidate list regardless of context; for fallback paths.
class StubGenerator : public CandidateGenerator {
 public:
  explicit StubGenerator(std::vector<CandidateSentence> cands)
      : cands_(std::move(cands)) {}
  std::vector<CandidateSentence> generate(const GenContext&, const GeneratorConfig&,
                                          double, std::uint64_t) const override {
    return cands_;
  }

 private:
  std::vector<CandidateSentence> cands_;
};

}  // namespace

TEST_CASE("inject emits sent_num sentences, all long ones bit-1 when fallback-free") {
  const KeyRecord rec = make_record("owner", 101);
  const NGramGenerator generator(corpus_model());
  InjectionConfig cfg;
  GeneratorConfig gen_cfg;
  const std::string prompt = "The weary traveler crossed the ancient bridge.";

  InjectionResult result =
      inject(rec, prompt, generator, fixture().extractor, cfg, gen_cfg, 7);
  CHECK(result.trace.steps.size() == 16);
  auto sentences = split_sentences(result.text, cfg.delimiters);
  CHECK(sentences.size() == 16);

  for (const auto& step : result.trace.steps) {
    if (step.fallback) continue;
    auto sent = split_sentences(step.chosen_sentence, cfg.delimiters);
    REQUIRE(sent.size() == 1);
    if (sent[0].word_count > cfg.structural_threshold) {
      const StructureString s = fixture().extractor.extract(sent[0]);
      CHECK(structure_bit(rec, s) == 1);
      CHECK(step.chosen_bit == 1);
    }
  }
}

TEST_CASE("detector reciprocity on an injected text") {
  const KeyRecord rec = make_record("owner-recip", 55);
  const NGramGenerator generator(corpus_model());
  InjectionConfig cfg;
  GeneratorConfig gen_cfg;

  InjectionResult result = inject(rec, "A stranger wandered near the harbor.",
                                  generator, fixture().extractor, cfg, gen_cfg, 11);
  REQUIRE(result.trace.fallback_free());

  DetectorConfig det;
  DetectionReport rep =
      detect_single(rec, result.text, fixture().extractor, det, cfg.delimiters);
  CHECK(rep.n == 16);
  CHECK(rep.ones == 16);
  CHECK(rep.z == doctest::Approx(4.0));
  CHECK(rep.detected);
}

TEST_CASE("seeded injection is deterministic") {
  const KeyRecord rec = make_record("owner-det", 3);
  const NGramGenerator generator(corpus_model());
  InjectionConfig cfg;
  cfg.sent_num = 4;
  GeneratorConfig gen_cfg;
  auto a = inject(rec, "The knight rested.", generator, fixture().extractor, cfg,
                  gen_cfg, 99);
  auto b = inject(rec, "The knight rested.", generator, fixture().extractor, cfg,
                  gen_cfg, 99);
  CHECK(a.text == b.text);
  CHECK(a.trace.to_jsonl() == b.trace.to_jsonl());
}

TEST_CASE("substream seeds differ across steps and retries") {
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 0, 1));
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 1, 0));
  CHECK(substream_seed(1, 3, 2) == substream_seed(1, 3, 2));
}

TEST_CASE("stub generator whose candidates all hash to 1 never falls back") {
  const KeyRecord rec = make_record("forced", 8);
  // find a sentence whose structure hashes to 1 under this record
  std::vector<std::string> pool = {
      "The gentle shepherd watched a distant golden meadow.",
      "A weary knight guarded the ancient stone tower.",
      "The quiet merchant carried a heavy wooden chest.",
      "That solemn scholar studied an ancient faded scroll.",
  };
  std::string bit1_text;
  for (const auto& t : pool)
    if (structure_bit(rec, fixture().extractor.extract_text(t)) == 1) {
      bit1_text = t;
      break;
    }
  REQUIRE(!bit1_text.empty());

  CandidateSentence cand;
  cand.text = bit1_text;
  cand.word_count = static_cast<int>(split_sentences(bit1_text)[0].word_count);
  cand.score = -1.0;
  StubGenerator generator({cand});
  InjectionConfig cfg;
  cfg.sent_num = 3;
  GeneratorConfig gen_cfg;
  // disable the repeated-trigram rule: the stub always returns the same text
  gen_cfg.max_words = 40;

  // trigram filter would drop repeats of the same sentence, so inject one step
  cfg.sent_num = 1;
  InjectionResult result =
      inject(rec, "Prompt.", generator, fixture().extractor, cfg, gen_cfg, 1);
  CHECK(result.trace.fallback_free());
  CHECK(result.trace.steps[0].chosen_bit == 1);
  CHECK(result.trace.steps[0].retries_used == 0);
}

TEST_CASE("adversarial generator: single fixed bit-0 sentence forces fallback") {
  const KeyRecord rec = make_record("adversary", 8);
  std::vector<std::string> pool = {
      "The gentle shepherd watched a distant golden meadow.",
      "A weary knight guarded the ancient stone tower.",
      "The quiet merchant carried a heavy wooden chest.",
      "That solemn scholar studied an ancient faded scroll.",
      "The shepherd quietly watched the meadow at night.",
      "The shepherd watched the meadow near the river again.",
      "Yesterday the shepherd slowly watched the golden meadow.",
      "The ancient shepherd watched the meadow during winter.",
  };
  std::string bit0_text;
  for (const auto& t : pool)
    if (structure_bit(rec, fixture().extractor.extract_text(t)) == 0) {
      bit0_text = t;
      break;
    }
  REQUIRE(!bit0_text.empty());

  CandidateSentence cand;
  cand.text = bit0_text;
  cand.word_count = static_cast<int>(split_sentences(bit0_text)[0].word_count);
  cand.score = -1.0;
  StubGenerator generator({cand});
  InjectionConfig cfg;
  cfg.sent_num = 1;
  cfg.max_retries = 2;
  GeneratorConfig gen_cfg;

  InjectionResult result =
      inject(rec, "Prompt.", generator, fixture().extractor, cfg, gen_cfg, 1);
  REQUIRE(result.trace.steps.size() == 1);
  CHECK(result.trace.steps[0].fallback);
  CHECK(result.trace.steps[0].chosen_bit == 0);
  CHECK(split_sentences(result.text).size() == 1);

  // max_retries = 0 goes straight to fallback emission
  cfg.max_retries = 0;
  InjectionResult immediate =
      inject(rec, "Prompt.", generator, fixture().extractor, cfg, gen_cfg, 1);
  CHECK(immediate.trace.steps[0].fallback);
}

TEST_CASE("empty generator raises GenerationExhausted") {
  StubGenerator generator({});
  InjectionConfig cfg;
  cfg.sent_num = 1;
  const KeyRecord rec = make_record("nobody", 1);
  CHECK_THROWS_AS(inject(rec, "Prompt.", generator, fixture().extractor, cfg,
                         GeneratorConfig{}, 1),
                  GenerationExhausted);
}

TEST_CASE("property: completeness holds for random prompts") {
  const KeyRecord rec = make_record("prompt-prop", 77);
  const NGramGenerator generator(corpus_model());
  InjectionConfig cfg;
  cfg.sent_num = 4;
  GeneratorConfig gen_cfg;
  DetectorConfig det;

  std::mt19937_64 rng(4242);
  const std::vector<std::string> prompts = {
      "The harbor slept beneath a pale moon.",
      "Snow fell across the quiet valley all night.",
      "A merchant counted coins near the gate.",
      "Ravens circled the old watchtower at dusk.",
      "The scholar opened a dusty ancient book.",
  };
  for (const std::string& prompt : prompts) {
    InjectionResult result = inject(rec, prompt, generator, fixture().extractor, cfg,
                                    gen_cfg, rng());
    if (!result.trace.fallback_free()) continue;
    for (const auto& step : result.trace.steps) {
      auto sent = split_sentences(step.chosen_sentence, cfg.delimiters);
      REQUIRE(sent.size() == 1);
      if (sent[0].word_count > cfg.structural_threshold)
        CHECK(structure_bit(rec, fixture().extractor.extract(sent[0])) == 1);
    }
  }
}
