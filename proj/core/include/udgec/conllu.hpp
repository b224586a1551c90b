#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace udgec {

// Morphological feature names are ordered case-insensitively ("Case" sorts
// before "gender" before "Number"), falling back to a byte comparison so the
// ordering is total.
struct FeatureNameLess {
  bool operator()(const std::string& a, const std::string& b) const;
};

using FeatureMap = std::map<std::string, std::string, FeatureNameLess>;

/// One syntactic word of a CoNLL-U sentence.  Multiword-token range lines and
/// empty nodes are not represented; the reader skips them.
struct Token {
  int id = 0;  // 1-based position within the sentence
  std::string form;
  std::string lemma;
  std::string upos;  // uppercased on read
  std::string xpos;
  FeatureMap feats;  // empty when the FEATS column is "_"
  int head = 0;      // 0 = attached to the virtual root
  std::string deprel;
  std::string deps;
  std::string misc;
};

struct ParsedSentence {
  std::vector<Token> tokens;  // ids are exactly 1..n in order
  std::vector<std::string> comments;

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int id) const { return tokens.at(static_cast<size_t>(id) - 1); }
  std::vector<std::string> forms() const;
};

/// A data line that is not 10 TAB-separated columns, or whose ID/HEAD is not
/// a valid integer.
struct MalformedLine : std::runtime_error {
  int line;
  MalformedLine(int line, const std::string& detail);
};

/// Following HEAD pointers from a token did not reach the root within
/// |sentence| hops.
struct CycleDetected : std::runtime_error {
  int token_id;
  explicit CycleDetected(int token_id);
};

/// Reads a CoNLL-U stream.  Sentences are separated by blank lines, "#" lines
/// are kept as comments, multiword-token ranges ("1-2") and empty nodes
/// ("3.1") are skipped.  Throws MalformedLine; empty sentences are skipped.
std::vector<ParsedSentence> read_conllu(std::istream& in);
std::vector<ParsedSentence> read_conllu_file(const std::string& path);

/// The 10-column TAB-separated data line for a token (no trailing newline).
/// FEATS serialize as "Name=Value" pairs joined by "|", sorted
/// case-insensitively by name, or "_" when empty.
std::string serialize(const Token& token);

void write_conllu(std::ostream& out, const ParsedSentence& sentence);
void write_conllu(std::ostream& out, const std::vector<ParsedSentence>& sentences);

/// Number of HEAD hops from token `id` to the virtual root.  The root token
/// (head = 0) has depth 1, so every real token has positive depth.  Throws
/// CycleDetected when the walk exceeds the sentence length.
int depth(const ParsedSentence& sentence, int id);

enum class ViolationKind { MultipleRoots, NoRoot, DanglingHead, Cycle };

struct TreeViolation {
  ViolationKind kind;
  std::vector<int> ids;
};

/// Structural checks on the head relation: exactly one root, heads reference
/// existing ids, no cycles.  The sentence is valid iff the result is empty.
std::vector<TreeViolation> validate_tree(const ParsedSentence& sentence);

}  // namespace udgec
