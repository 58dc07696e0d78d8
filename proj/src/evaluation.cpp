#include "personamark/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "personamark/detection.hpp"

namespace personamark {

int syllable_count(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("word must be non-empty");
  auto is_vowel = [](char c) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // trailing silent 'e' ("fire", "stone") unless that would leave zero
  const char last =
      static_cast<char>(std::tolower(static_cast<unsigned char>(word.back())));
  if (last == 'e' && groups > 1) --groups;
  return std::max(groups, 1);
}

ReadabilityScore flesch(std::string_view text, std::string_view delimiters) {
  const std::vector<Sentence> sentences = split_sentences(text, delimiters);
  long words = 0, syllables = 0;
  for (const Sentence& s : sentences) {
    for (const Token& t : s.tokens) {
      if (t.is_punct()) continue;
      ++words;
      syllables += syllable_count(t.lower);
    }
  }
  if (sentences.empty() || words == 0) throw EmptyText();
  ReadabilityScore score;
  score.wl = 100.0 * static_cast<double>(syllables) / static_cast<double>(words);
  score.sl = static_cast<double>(words) / static_cast<double>(sentences.size());
  score.re = 206.835 - 0.846 * score.wl - 1.015 * score.sl;
  return score;
}

double roc_auc(const std::vector<ScoredExample>& examples) {
  std::size_t pos = 0, neg = 0;
  for (const auto& e : examples) (e.label ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw OneClassOnly();

  // Mann-Whitney rank statistic with midranks for ties
  std::vector<const ScoredExample*> sorted;
  sorted.reserve(examples.size());
  for (const auto& e : examples) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredExample* a, const ScoredExample* b) {
              return a->score < b->score;
            });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j]->score == sorted[i]->score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (sorted[k]->label) rank_sum_pos += midrank;
    i = j;
  }
  const double u = rank_sum_pos - static_cast<double>(pos) * (pos + 1) / 2.0;
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double f1_at_threshold(const std::vector<ScoredExample>& examples, double threshold) {
  std::size_t pos = 0, neg = 0;
  for (const auto& e : examples) (e.label ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw OneClassOnly();
  long tp = 0, fp = 0, fn = 0;
  for (const auto& e : examples) {
    const bool predicted = e.score >= threshold;
    if (predicted && e.label) ++tp;
    else if (predicted && !e.label) ++fp;
    else if (!predicted && e.label) ++fn;
  }
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

double bit_balance(const KeyRecord& record, const std::vector<std::string>& texts,
                   const StructureExtractor& extractor, std::string_view delimiters,
                   int structural_threshold) {
  long ones = 0, n = 0;
  for (const std::string& text : texts) {
    const TextStructures structures =
        extract_text_structures(text, extractor, delimiters, structural_threshold);
    for (const std::string& s : structures.serialized) {
      ones += structure_bit(record, s);
      ++n;
    }
  }
  if (n == 0) throw NoScorableSentences();
  return static_cast<double>(ones) / static_cast<double>(n);
}

std::vector<SweepRow> threshold_sweep(const std::vector<ScoredExample>& examples,
                                      const std::vector<double>& thresholds) {
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (double t : thresholds) {
    SweepRow row{t, 0, 0, 0, 0, 0.0};
    for (const auto& e : examples) {
      const bool predicted = e.score >= t;
      if (predicted && e.label) ++row.tp;
      else if (predicted && !e.label) ++row.fp;
      else if (!predicted && e.label) ++row.fn;
      else ++row.tn;
    }
    row.f1 = row.tp == 0 ? 0.0 : 2.0 * row.tp / (2.0 * row.tp + row.fp + row.fn);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "threshold,tp,fp,fn,tn,f1\n";
  for (const SweepRow& r : rows)
    out << r.threshold << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << r.tn
        << ',' << r.f1 << '\n';
  return out.str();
}

std::string roc_csv(const std::vector<ScoredExample>& examples) {
  std::size_t pos = 0, neg = 0;
  for (const auto& e : examples) (e.label ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw OneClassOnly();

  std::vector<ScoredExample> sorted = examples;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredExample& a, const ScoredExample& b) {
              return a.score > b.score;
            });
  std::ostringstream out;
  out << "fpr,tpr\n0,0\n";
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) ++j;
    for (std::size_t k = i; k < j; ++k) (sorted[k].label ? tp : fp) += 1;
    out << static_cast<double>(fp) / neg << ',' << static_cast<double>(tp) / pos << '\n';
    i = j;
  }
  return out.str();
}

}  // namespace personamark
