#include "personamark/detection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace personamark {

TextStructures extract_text_structures(std::string_view text,
                                       const StructureExtractor& extractor,
                                       std::string_view delimiters,
                                       int structural_threshold) {
  TextStructures out;
  for (const Sentence& s : split_sentences(text, delimiters)) {
    if (s.word_count <= structural_threshold) {
      ++out.skipped_short;
      continue;
    }
    StructureString structure = extractor.extract(s);
    if (structure.empty()) {
      ++out.skipped_short;
      continue;
    }
    out.serialized.push_back(structure.serialize());
  }
  return out;
}

EncodedBits encode_text_bits(const KeyRecord& record, std::string_view text,
                             const StructureExtractor& extractor,
                             std::string_view delimiters, int structural_threshold) {
  const TextStructures structures =
      extract_text_structures(text, extractor, delimiters, structural_threshold);
  if (structures.serialized.empty()) throw NoScorableSentences();
  EncodedBits out;
  out.skipped_short = structures.skipped_short;
  out.bits.reserve(structures.serialized.size());
  for (const std::string& s : structures.serialized)
    out.bits.push_back(structure_bit(record, s));
  return out;
}

double z_score(int ones, int n) {
  if (n < 1) throw DegenerateSample();
  const double p_hat = static_cast<double>(ones) / n;
  return (p_hat - 0.5) / std::sqrt(0.25 / n);
}

double p_value(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("z must be finite");
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double normal_upper_quantile(double tail) {
  if (tail <= 0.0 || tail >= 1.0)
    throw std::invalid_argument("tail must be in (0, 1)");
  // bisection on the monotone tail function; plenty accurate for thresholds
  double lo = -10.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (p_value(mid) > tail)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DetectionReport detect_from_structures(const KeyRecord& record,
                                       const TextStructures& structures,
                                       const DetectorConfig& cfg,
                                       double threshold_override) {
  if (structures.serialized.empty()) throw NoScorableSentences();
  if (static_cast<int>(structures.serialized.size()) < cfg.min_sentences)
    throw NoScorableSentences();
  DetectionReport rep;
  rep.user = record.user;
  rep.n = static_cast<int>(structures.serialized.size());
  rep.skipped_short = structures.skipped_short;
  for (const std::string& s : structures.serialized)
    rep.ones += structure_bit(record, s);
  rep.p_hat = static_cast<double>(rep.ones) / rep.n;
  rep.z = z_score(rep.ones, rep.n);
  rep.p_value = p_value(rep.z);
  rep.detected = rep.z >= threshold_override;
  return rep;
}

DetectionReport detect_single(const KeyRecord& record, std::string_view text,
                              const StructureExtractor& extractor,
                              const DetectorConfig& cfg, std::string_view delimiters) {
  const TextStructures structures =
      extract_text_structures(text, extractor, delimiters, cfg.structural_threshold);
  return detect_from_structures(record, structures, cfg, cfg.z_threshold);
}

AttributionResult attribute(const KeyDatabase& db, std::string_view text,
                            const StructureExtractor& extractor,
                            const DetectorConfig& cfg, std::string_view delimiters) {
  if (db.size() == 0) throw std::invalid_argument("key database is empty");
  const auto t0 = std::chrono::steady_clock::now();

  const TextStructures structures =
      extract_text_structures(text, extractor, delimiters, cfg.structural_threshold);
  if (structures.serialized.empty()) throw NoScorableSentences();

  double threshold = cfg.z_threshold;
  if (cfg.bonferroni)
    threshold = normal_upper_quantile(cfg.alpha / static_cast<double>(db.size()));

  AttributionResult result;
  result.reports.reserve(db.size());
  for (const auto& [user, record] : db.records()) {
    DetectionReport rep = detect_from_structures(record, structures, cfg, threshold);
    if (rep.detected) {
      result.candidates.push_back(user);
      if (!result.best_user || rep.z > result.best_z) {
        result.best_user = user;
        result.best_z = rep.z;
        result.ambiguous = false;
      } else if (rep.z == result.best_z) {
        result.ambiguous = true;  // ties keep the lexicographically smallest
      }
    }
    result.reports.push_back(std::move(rep));
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace personamark
