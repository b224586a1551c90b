#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace udgec {

/// One correction: replace source tokens [start, end) with `replacement`.
/// start == end denotes a pure insertion before offset `start`; an empty
/// replacement with start < end is a deletion.
struct Edit {
  int start = 0;  // 0-based source token offset, inclusive
  int end = 0;    // 0-based source token offset, exclusive
  std::vector<std::string> replacement;
  std::optional<std::string> external_type;  // the M2 type field, when present
  int annotator = 0;
};

struct EditedSentence {
  std::vector<std::string> source_tokens;
  std::vector<Edit> edits;  // all annotators
};

/// Per-edit spans into the corrected token sequence, parallel to the edit
/// list that produced them; span length equals the replacement length.
using SpanMap = std::vector<std::pair<int, int>>;

struct MalformedAnnotation : std::runtime_error {
  int line;
  MalformedAnnotation(int line, const std::string& detail);
};

struct SpanOutOfBounds : std::runtime_error {
  int sentence_index;
  Edit edit;
  SpanOutOfBounds(int sentence_index, Edit edit);
};

/// Reads an M2 stream: "S <tokens>" lines followed by "A <start> <end>|||
/// <type>|||<correction>|||..." lines, blocks separated by blank lines.
/// Edits with type "noop" or span "-1 -1" are dropped, as are degenerate
/// empty insertions; "-NONE-" and empty corrections mean deletion.
/// Tolerates CRLF line endings and trailing blank lines.
std::vector<EditedSentence> read_m2(std::istream& in);
std::vector<EditedSentence> read_m2_file(const std::string& path);

/// Keeps only the edits with the given annotator id.
EditedSentence select_annotator(const EditedSentence& sentence, int annotator);

/// Merges overlapping edits of one sentence/annotator into a non-overlapping,
/// sorted set.  Two replacement spans overlap when they share a token offset;
/// an insertion at offset p collides with a span [s,e) when s <= p <= e; two
/// insertions collide only at the same offset.  A merged edit covers the
/// union interval; its replacement splices constituent replacements (in
/// source order, input order on ties) with any unclaimed source tokens, and
/// it takes the external type of the widest constituent (leftmost on ties).
std::vector<Edit> merge_overlapping(std::span<const std::string> source_tokens,
                                    std::vector<Edit> edits);

struct AppliedEdits {
  std::vector<std::string> tokens;  // the corrected token sequence
  SpanMap spans;                    // where each edit's replacement landed
};

/// Applies non-overlapping, sorted edits to the source tokens.  The output
/// length is |source| - sum(end-start) + sum(|replacement|).
AppliedEdits apply_edits(std::span<const std::string> source_tokens,
                         const std::vector<Edit>& edits);

}  // namespace udgec
