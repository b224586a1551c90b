#include "udgec/corpus.hpp"

#include <stdexcept>

namespace udgec {

CorpusBundle load_bundle(const std::string& m2_path, const std::string& source_conllu_path,
                         const std::string& corrected_conllu_path,
                         std::optional<std::string> level_tag) {
  CorpusBundle bundle;
  bundle.m2 = read_m2_file(m2_path);
  bundle.source_parses = read_conllu_file(source_conllu_path);
  bundle.corrected_parses = read_conllu_file(corrected_conllu_path);
  bundle.level_tag = std::move(level_tag);
  if (bundle.source_parses.size() != bundle.m2.size() ||
      bundle.corrected_parses.size() != bundle.m2.size())
    throw std::runtime_error(
        "bundle sentence counts differ: " + std::to_string(bundle.m2.size()) + " M2 blocks, " +
        std::to_string(bundle.source_parses.size()) + " source parses, " +
        std::to_string(bundle.corrected_parses.size()) + " corrected parses");
  return bundle;
}

}  // namespace udgec
