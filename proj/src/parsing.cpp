#include "personamark/parsing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace personamark {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Clitic suffixes split off during tokenization; longest match wins.
constexpr std::array<std::string_view, 7> kContractions = {
    "n't", "'re", "'ll", "'ve", "'s", "'d", "'m"};

}  // namespace

std::string_view pos_name(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Det: return "DET";
    case Pos::Pron: return "PRON";
    case Pos::Adp: return "ADP";
    case Pos::Conj: return "CONJ";
    case Pos::Num: return "NUM";
    case Pos::Part: return "PART";
    case Pos::Intj: return "INTJ";
    case Pos::Punct: return "PUNCT";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> pos_from_name(std::string_view name) {
  static const std::unordered_map<std::string_view, Pos> kMap = {
      {"NOUN", Pos::Noun}, {"VERB", Pos::Verb}, {"ADJ", Pos::Adj},
      {"ADV", Pos::Adv},   {"DET", Pos::Det},   {"PRON", Pos::Pron},
      {"ADP", Pos::Adp},   {"CONJ", Pos::Conj}, {"NUM", Pos::Num},
      {"PART", Pos::Part}, {"INTJ", Pos::Intj}, {"PUNCT", Pos::Punct},
      {"OTHER", Pos::Other}};
  auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

bool Token::is_punct() const {
  return !surface.empty() &&
         std::none_of(surface.begin(), surface.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c));
         });
}

std::string StructureString::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ' ';
    out += labels[i];
  }
  return out;
}

StructureString parse_structure(std::string_view serialized, const LabelInventory& inv) {
  StructureString out;
  std::size_t pos = 0;
  while (pos < serialized.size()) {
    std::size_t next = serialized.find(' ', pos);
    if (next == std::string_view::npos) next = serialized.size();
    std::string label(serialized.substr(pos, next - pos));
    if (!label.empty()) {
      if (!inv.contains(label))
        throw std::invalid_argument("unknown dependency label: " + label);
      out.labels.push_back(std::move(label));
    }
    pos = next + 1;
  }
  return out;
}

MalformedDataFile::MalformedDataFile(const std::string& path, int line,
                                     const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

LabelInventory LabelInventory::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label inventory: " + path);
  LabelInventory inv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line.rfind("#inventory-", 0) != 0)
        throw MalformedDataFile(path, lineno, "missing #inventory header");
      inv.version_ = line.substr(1);
      continue;
    }
    if (!inv.set_.insert(line).second)
      throw MalformedDataFile(path, lineno, "duplicate label " + line);
    inv.labels_.push_back(line);
  }
  if (inv.labels_.size() < 40)
    throw MalformedDataFile(path, lineno, "inventory smaller than 40 labels");
  return inv;
}

bool LabelInventory::contains(std::string_view label) const {
  return set_.count(std::string(label)) > 0;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  Lexicon lex;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line[0] == '#') {
      lex.version_ = line.substr(1);
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw MalformedDataFile(path, lineno, "expected word<TAB>POS");
    auto pos = pos_from_name(line.substr(tab + 1));
    if (!pos) throw MalformedDataFile(path, lineno, "unknown POS " + line.substr(tab + 1));
    lex.table_[line.substr(0, tab)] = *pos;
  }
  return lex;
}

std::optional<Pos> Lexicon::lookup(std::string_view lower) const {
  auto it = table_.find(std::string(lower));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

Pos Tagger::tag_word(const Token& token) const {
  if (token.is_punct()) return Pos::Punct;
  if (auto hit = lexicon_.lookup(token.lower)) return *hit;
  const std::string& w = token.lower;
  if (std::all_of(w.begin(), w.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '-' || c == '.';
      }))
    return Pos::Num;
  auto ends = [&](std::string_view suf) {
    return w.size() > suf.size() + 1 && w.compare(w.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends("ly")) return Pos::Adv;
  if (ends("ing") || ends("ed") || ends("ize") || ends("ise") || ends("ify") ||
      ends("eth"))
    return Pos::Verb;
  if (ends("tion") || ends("sion") || ends("ness") || ends("ment") ||
      ends("ship") || ends("ism"))
    return Pos::Noun;
  if (ends("ful") || ends("ous") || ends("ive") || ends("able") ||
      ends("ible") || ends("ish") || ends("less"))
    return Pos::Adj;
  return Pos::Noun;
}

std::vector<Pos> Tagger::tag(const std::vector<Token>& tokens) const {
  std::vector<Pos> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(tag_word(t));
  return tags;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto push = [&](std::string_view surface) {
    if (surface.empty()) return;
    Token t;
    t.surface = std::string(surface);
    t.lower = to_lower(surface);
    t.index = static_cast<int>(tokens.size());
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (!is_word_char(text[i])) {
      push(text.substr(i, 1));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    std::string_view chunk = text.substr(i, j - i);
    // strip leading/trailing apostrophes or hyphens that are not word-internal
    while (!chunk.empty() && (chunk.front() == '\'' || chunk.front() == '-')) {
      push(chunk.substr(0, 1));
      chunk.remove_prefix(1);
    }
    std::size_t trailing = 0;
    while (chunk.size() > trailing &&
           (chunk[chunk.size() - 1 - trailing] == '\'' ||
            chunk[chunk.size() - 1 - trailing] == '-'))
      ++trailing;
    std::string_view tail = chunk.substr(chunk.size() - trailing);
    chunk.remove_suffix(trailing);
    if (!chunk.empty()) {
      std::string lower = to_lower(chunk);
      bool split = false;
      for (std::string_view suf : kContractions) {
        if (lower.size() > suf.size() &&
            lower.compare(lower.size() - suf.size(), suf.size(), suf) == 0) {
          push(chunk.substr(0, chunk.size() - suf.size()));
          push(chunk.substr(chunk.size() - suf.size()));
          split = true;
          break;
        }
      }
      if (!split) push(chunk);
    }
    for (std::size_t k = 0; k < tail.size(); ++k) push(tail.substr(k, 1));
    i = j;
  }
  return tokens;
}

std::vector<Sentence> split_sentences(std::string_view text, std::string_view delimiters) {
  std::vector<Sentence> out;
  auto flush = [&](std::string_view raw, char terminal, bool had_terminal) {
    std::size_t b = 0, e = raw.size();
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;
    raw = raw.substr(b, e - b);
    if (raw.empty()) return;
    Sentence s;
    s.raw = std::string(raw);
    s.terminal = terminal;
    s.had_terminal = had_terminal;
    s.tokens = tokenize(raw);
    s.word_count = static_cast<int>(std::count_if(
        s.tokens.begin(), s.tokens.end(), [](const Token& t) { return !t.is_punct(); }));
    if (s.word_count == 0 && s.tokens.empty()) return;
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (delimiters.find(text[i]) != std::string_view::npos) {
      flush(text.substr(start, i - start), text[i], true);
      start = i + 1;
    }
  }
  if (start < text.size()) flush(text.substr(start), '.', false);
  return out;
}

std::vector<std::string> assign_labels(const std::vector<Pos>& tags) {
  const int n = static_cast<int>(tags.size());
  // root: first finite VERB, else first NOUN, else first non-punct token
  int root = -1;
  for (int i = 0; i < n && root < 0; ++i)
    if (tags[i] == Pos::Verb) root = i;
  for (int i = 0; i < n && root < 0; ++i)
    if (tags[i] == Pos::Noun) root = i;
  for (int i = 0; i < n && root < 0; ++i)
    if (tags[i] != Pos::Punct) root = i;

  int subj = -1;  // nearest NOUN/PRON before root
  for (int i = 0; i < root; ++i)
    if (tags[i] == Pos::Noun || tags[i] == Pos::Pron) subj = i;
  int obj = -1;  // first NOUN/PRON after root
  for (int i = root + 1; i < n && obj < 0; ++i)
    if (tags[i] == Pos::Noun || tags[i] == Pos::Pron) obj = i;

  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (tags[i] == Pos::Punct) continue;
    if (i == root) {
      labels.emplace_back("root");
      continue;
    }
    switch (tags[i]) {
      case Pos::Det: labels.emplace_back("det"); break;
      case Pos::Adp: labels.emplace_back("case"); break;
      case Pos::Adv: labels.emplace_back("advmod"); break;
      case Pos::Adj: labels.emplace_back("amod"); break;
      case Pos::Num: labels.emplace_back("nummod"); break;
      case Pos::Conj: labels.emplace_back("cc"); break;
      case Pos::Part: labels.emplace_back("mark"); break;
      case Pos::Intj: labels.emplace_back("discourse"); break;
      case Pos::Verb:
        labels.emplace_back(i < root ? "aux" : "xcomp");
        break;
      case Pos::Noun:
      case Pos::Pron:
        if (i == subj)
          labels.emplace_back("nsubj");
        else if (i == obj)
          labels.emplace_back("obj");
        else
          labels.emplace_back(i > root ? "obl" : "nmod");
        break;
      default: labels.emplace_back("dep"); break;
    }
  }
  return labels;
}

StructureExtractor::StructureExtractor(const Tagger& tagger, const LabelInventory& inventory)
    : tagger_(&tagger), inventory_(&inventory) {
  // the label assigner only ever emits labels from the shipped inventory
  for (const char* l : {"root", "det", "case", "advmod", "amod", "nummod", "cc",
                        "mark", "discourse", "aux", "xcomp", "nsubj", "obj",
                        "obl", "nmod", "dep"}) {
    if (!inventory_->contains(l))
      throw std::runtime_error(std::string("inventory missing label ") + l);
  }
}

StructureString StructureExtractor::extract(const Sentence& sentence) const {
  StructureString out;
  out.labels = assign_labels(tagger_->tag(sentence.tokens));
  return out;
}

StructureString StructureExtractor::extract_text(std::string_view text) const {
  Sentence s;
  s.tokens = tokenize(text);
  return extract(s);
}

}  // namespace personamark
