#pragma once

// Deterministic sentence segmentation, tokenization, POS tagging and
// dependency-label assignment. Every function here is pure; the extractor
// maps a sentence to its structure string, the carrier medium for the
// watermark bit.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace personamark {

inline constexpr std::string_view kDefaultDelimiters = ".!?:;";
inline constexpr std::string_view kExtractorVersion = "pm-extractor-1";

enum class Pos {
  Noun,
  Verb,
  Adj,
  Adv,
  Det,
  Pron,
  Adp,
  Conj,
  Num,
  Part,
  Intj,
  Punct,
  Other,
};

std::string_view pos_name(Pos p);
std::optional<Pos> pos_from_name(std::string_view name);

struct Token {
  std::string surface;
  std::string lower;
  int index = 0;

  bool is_punct() const;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string raw;       // original text without the terminal
  char terminal = '.';
  bool had_terminal = true;
  int word_count = 0;    // non-punctuation tokens
};

// Ordered dependency-label sequence for one sentence, punctuation excluded.
// The serialized form (labels joined by single spaces) is the hash input.
struct StructureString {
  std::vector<std::string> labels;

  std::string serialize() const;
  bool empty() const { return labels.empty(); }
  bool operator==(const StructureString&) const = default;
};

class LabelInventory;
StructureString parse_structure(std::string_view serialized, const LabelInventory& inv);

class MalformedDataFile : public std::runtime_error {
 public:
  MalformedDataFile(const std::string& path, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Versioned closed inventory of dependency labels (one per line, header
// "#inventory-v1"). Size is checked at load time.
class LabelInventory {
 public:
  static LabelInventory load(const std::string& path);

  bool contains(std::string_view label) const;
  std::size_t size() const { return labels_.size(); }
  const std::string& version() const { return version_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_set<std::string> set_;
  std::string version_;
};

// Word -> POS table, UTF-8 TSV with header "#lexicon-v1".
class Lexicon {
 public:
  static Lexicon load(const std::string& path);

  std::optional<Pos> lookup(std::string_view lower) const;
  std::size_t size() const { return table_.size(); }
  const std::string& version() const { return version_; }

 private:
  std::unordered_map<std::string, Pos> table_;
  std::string version_;
};

// Lexicon lookup, then suffix rules, then NOUN. Context-free per token, so
// tagging a word gives the same answer in any sentence.
class Tagger {
 public:
  explicit Tagger(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  Pos tag_word(const Token& token) const;
  std::vector<Pos> tag(const std::vector<Token>& tokens) const;
  const Lexicon& lexicon() const { return lexicon_; }

 private:
  Lexicon lexicon_;
};

// e(.): sentence -> structure string. Labels are a pure function of the POS
// tag sequence, which gives exact invariance under same-POS word swaps.
class StructureExtractor {
 public:
  StructureExtractor(const Tagger& tagger, const LabelInventory& inventory);

  StructureString extract(const Sentence& sentence) const;
  StructureString extract_text(std::string_view sentence_text) const;

  const Tagger& tagger() const { return *tagger_; }
  const LabelInventory& inventory() const { return *inventory_; }

 private:
  const Tagger* tagger_;
  const LabelInventory* inventory_;
};

std::vector<Sentence> split_sentences(std::string_view text,
                                      std::string_view delimiters = kDefaultDelimiters);
std::vector<Token> tokenize(std::string_view sentence_text);

// Dependency labels from the tag sequence alone (punctuation positions get
// no label). Exposed for tests.
std::vector<std::string> assign_labels(const std::vector<Pos>& tags);

}  // namespace personamark
