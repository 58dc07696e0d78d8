#pragma once

#include <string>

#include "personamark/parsing.hpp"

namespace pmtest {

inline std::string data_path(const std::string& name) {
  return std::string(PM_DATA_DIR) + "/" + name;
}

// One toolchain for the whole test binary; loading is read-only.
struct Fixture {
  personamark::Lexicon lexicon =
      personamark::Lexicon::load(data_path("lexicon.tsv"));
  personamark::LabelInventory inventory =
      personamark::LabelInventory::load(data_path("dep_labels.txt"));
  personamark::Tagger tagger{lexicon};
  personamark::StructureExtractor extractor{tagger, inventory};
};

inline const Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace pmtest
