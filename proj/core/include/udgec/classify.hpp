#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "udgec/conllu.hpp"
#include "udgec/corpus.hpp"
#include "udgec/edits.hpp"

namespace udgec {

enum class SchemeKind { Upos, Deprel, Feature };

/// A labeling scheme: universal POS tags, dependency relations (subtypes kept
/// verbatim), or one morphological feature, optionally restricted to tokens
/// of a given UPOS.
class Scheme {
 public:
  Scheme() = default;

  static Scheme upos() { return Scheme(SchemeKind::Upos, "", std::nullopt); }
  static Scheme deprel() { return Scheme(SchemeKind::Deprel, "", std::nullopt); }
  static Scheme feature(std::string name, std::optional<std::string> pos_filter = std::nullopt);

  /// Parses "upos", "deprel", or "feature:<Name>[:<UPOS>]" (kind is
  /// case-insensitive).  Throws std::invalid_argument.
  static Scheme parse(const std::string& text);

  SchemeKind kind() const { return kind_; }
  const std::string& feature_name() const { return feature_; }
  const std::optional<std::string>& pos_filter() const { return pos_filter_; }

  std::string to_string() const;  // "UPOS", "DEPREL", "FEATURE:Case[:NOUN]"

  bool operator==(const Scheme&) const = default;

 private:
  Scheme(SchemeKind kind, std::string feature, std::optional<std::string> pos_filter)
      : kind_(kind), feature_(std::move(feature)), pos_filter_(std::move(pos_filter)) {}

  SchemeKind kind_ = SchemeKind::Upos;
  std::string feature_;
  std::optional<std::string> pos_filter_;
};

enum class EditKind { Addition, Deletion, Replacement };

const char* to_string(EditKind kind);
std::optional<EditKind> edit_kind_from_string(const std::string& text);

/// The ordered label pair of an edit under a scheme; absent labels (empty
/// spans, missing features) act as a distinct "None" label.
struct SEType {
  std::optional<std::string> source_label;
  std::optional<std::string> target_label;
  EditKind kind = EditKind::Replacement;

  bool is_syntactic_error() const { return source_label != target_label; }
};

struct ClassifiedEdit {
  int sentence_index = 0;
  int edit_index = 0;  // index into the merged edits of the sentence
  SEType type;
  std::optional<int> source_rep;  // token id inside the source span
  std::optional<int> target_rep;  // token id inside the target span
  std::optional<std::string> external_type;
  Scheme scheme;
  // Feature schemes apply only when both representatives exist, pass the
  // POS filter, and agree on UPOS; inapplicable edits never reach matrices.
  bool scheme_applicable = true;
  bool source_tie = false;  // several span tokens shared the minimal depth
  bool target_tie = false;
  std::pair<int, int> source_span{0, 0};  // 0-based token offsets, [start, end)
  std::pair<int, int> target_span{0, 0};
};

/// Token offsets [start, end) into a sentence.
struct Span {
  int start = 0;
  int end = 0;
};

/// The span token closest to the sentence root (minimal depth in the full
/// tree), leftmost on ties; nullopt for an empty span.
std::optional<int> representative(Span span, const ParsedSentence& sentence);

struct RepresentativeChoice {
  std::optional<int> id;
  bool tie = false;
};
RepresentativeChoice representative_info(Span span, const ParsedSentence& sentence);

/// The token's label under the scheme: its UPOS, its deprel (verbatim), or
/// its value for the scheme's feature (nullopt when the feature is missing
/// or the token fails the POS filter).
std::optional<std::string> label_of(const Token& token, const Scheme& scheme);

/// Target span forms disagree with the edit's replacement, i.e. the corrected
/// parse does not line up with the applied edits.
struct FormMismatch : std::runtime_error {
  explicit FormMismatch(const std::string& detail);
};

ClassifiedEdit classify(const Edit& edit, const ParsedSentence& source,
                        const ParsedSentence& target, Span target_span, const Scheme& scheme);

struct AlignmentFailure {
  int sentence_index = 0;
  std::string message;
};

struct CorpusClassification {
  std::vector<ClassifiedEdit> edits;
  std::vector<AlignmentFailure> failures;  // skipped sentences
  long long spans_with_tie = 0;            // over non-empty spans, a convention
  long long nonempty_spans = 0;
};

/// Classifies every sentence of the bundle: select the annotator, merge
/// overlapping edits, apply them, verify the corrected parse forms, classify
/// each merged edit.  Misaligned or cyclic sentences are recorded as failures
/// and skipped; the rest of the corpus is still processed.
CorpusClassification classify_corpus(const CorpusBundle& bundle, const Scheme& scheme,
                                     int annotator = 0);

}  // namespace udgec
