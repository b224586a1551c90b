#pragma once

#include <optional>
#include <string>
#include <vector>

#include "udgec/conllu.hpp"
#include "udgec/edits.hpp"

namespace udgec {

/// Aligned triple of M2 edits, source parses, and corrected parses, one entry
/// per sentence, optionally tagged with a proficiency level.
struct CorpusBundle {
  std::vector<EditedSentence> m2;
  std::vector<ParsedSentence> source_parses;
  std::vector<ParsedSentence> corrected_parses;
  std::optional<std::string> level_tag;
};

/// Loads the three files of a bundle.  Throws std::runtime_error when the
/// sentence counts differ; per-sentence form mismatches are reported later,
/// during classification.
CorpusBundle load_bundle(const std::string& m2_path, const std::string& source_conllu_path,
                         const std::string& corrected_conllu_path,
                         std::optional<std::string> level_tag = std::nullopt);

}  // namespace udgec
