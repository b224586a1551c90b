#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udgec/classify.hpp"
#include "udgec/corpus.hpp"

namespace udgec {

struct MixedSchemes : std::runtime_error {
  MixedSchemes() : std::runtime_error("matrices or edits use different schemes") {}
};

struct DegenerateTable : std::runtime_error {
  DegenerateTable() : std::runtime_error("contingency table needs >= 2 nonzero rows and columns") {}
};

struct ZeroVariance : std::runtime_error {
  ZeroVariance() : std::runtime_error("frequency vector has zero variance") {}
};

struct MissingLevelTag : std::runtime_error {
  MissingLevelTag() : std::runtime_error("levels input without a level tag") {}
};

/// Counts of (source label, target label) pairs.  Absent labels are stored
/// under the literal "None"; with a fixed universe, labels outside it fold
/// into the trailing "Other" bucket.
class ConfusionMatrix {
 public:
  static constexpr const char* kNone = "None";
  static constexpr const char* kOther = "Other";

  /// ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM
  /// VERB X.
  static const std::vector<std::string>& canonical_upos();

  /// Open universe (labels collected from the data, ordered lexicographically
  /// on output) and no scheme.
  ConfusionMatrix() = default;

  /// Universe chosen by scheme: UPOS gets the fixed canonical order with an
  /// Other bucket, other schemes stay open.
  explicit ConfusionMatrix(Scheme scheme);

  /// Fixed universe in the given order, e.g. from a matrix file.  "Other" is
  /// appended when missing and kept last.
  ConfusionMatrix(std::optional<Scheme> scheme, std::vector<std::string> universe);

  void add(const std::optional<std::string>& source, const std::optional<std::string>& target,
           long long count = 1);

  long long at(const std::string& source, const std::string& target) const;
  long long total() const { return total_; }
  long long row_sum(const std::string& label) const;
  long long col_sum(const std::string& label) const;

  const std::optional<Scheme>& scheme() const { return scheme_; }
  bool fixed_universe() const { return fixed_; }

  /// Full row/column order: the fixed universe, or "None" + sorted labels +
  /// "Other" for open matrices (None/Other only when present in the data).
  std::vector<std::string> ordered_labels() const;

  /// Ordered labels restricted to those with a nonzero row or column.
  std::vector<std::string> nonzero_labels() const;

  const std::map<std::pair<std::string, std::string>, long long>& cells() const {
    return counts_;
  }

  bool same_shape(const ConfusionMatrix& other) const;

 private:
  std::optional<Scheme> scheme_;
  bool fixed_ = false;
  std::vector<std::string> universe_;   // fixed mode only
  std::set<std::string> seen_;          // open mode only
  std::map<std::pair<std::string, std::string>, long long> counts_;
  long long total_ = 0;
};

/// Cellwise sum; requires the same scheme and label universe.
ConfusionMatrix merge(const ConfusionMatrix& a, const ConfusionMatrix& b);

/// One increment per classified edit of a selected kind whose labels are not
/// excluded.  Additions land on the "None" row, deletions on the "None"
/// column.  Scheme-inapplicable edits are skipped.
ConfusionMatrix build_matrix(std::span<const ClassifiedEdit> edits,
                             const std::set<EditKind>& kinds,
                             const std::set<std::string>& exclude_labels = {});

/// Replacement counts plus one diagonal increment per source token not
/// covered by any merged edit span ("levels mode").  Alignment failures go to
/// `failures` when given and the affected sentences are skipped.
ConfusionMatrix build_levels_matrix(const CorpusBundle& bundle, const Scheme& scheme,
                                    int annotator = 0,
                                    const std::set<std::string>& exclude_labels = {},
                                    std::vector<AlignmentFailure>* failures = nullptr);

/// Per label: diagonal count / row sum.  Labels with a zero row sum are
/// omitted; the "None" row is never reported.
std::map<std::string, double> unchanged_fraction(const ConfusionMatrix& matrix);

/// Per-source-label syntactic-error counts (off-diagonal row sums, which
/// include the deletion column) of a system output divided by the gold
/// counts.  Ratios may exceed 1 and are reported raw.
struct RecallBound {
  std::map<std::string, long long> system_counts;  // labels with nonzero gold
  std::map<std::string, long long> gold_counts;
  std::map<std::string, double> per_label;
  long long system_total = 0;
  long long gold_total = 0;
  double overall = 0.0;
};
RecallBound recall_bound(const ConfusionMatrix& system, const ConfusionMatrix& gold,
                         const std::set<std::string>& exclude_labels = {});

/// sqrt(chi^2 / (n * (min(r, c) - 1))) over the nonzero rows and columns.
/// Throws DegenerateTable with fewer than 2 of either.
double cramers_v(const ConfusionMatrix& matrix);

/// Pearson correlation of two aligned frequency vectors, plus their mean
/// absolute difference both over the values as given and after normalizing
/// each vector to proportions.
struct DistributionComparison {
  double pearson_r = 0.0;
  double mean_abs_diff = 0.0;
  double mean_abs_diff_proportions = 0.0;
};
DistributionComparison pearson(const std::map<std::string, double>& a,
                               const std::map<std::string, double>& b);

/// Shannon entropy in nats of a count distribution and exp(H), the effective
/// number of types.
struct EntropyResult {
  double entropy_nats = 0.0;
  double effective_types = 1.0;
};
EntropyResult entropy_effective(const std::map<std::string, long long>& counts);

/// Matrix cells keyed "source->target", e.g. for entropy over SE types.
std::map<std::string, long long> cell_counts(const ConfusionMatrix& matrix);

/// How concentrated each SE type is inside an external taxonomy: fraction of
/// instances in the largest external category and in the top three (count
/// ties broken by label).  Rows with fewer than min_count instances are
/// omitted, matching the reported tables; the corpus means are unweighted
/// over the remaining rows.
struct OverlapRow {
  std::string se_type;  // "source->target"
  long long total = 0;
  std::string argmax_external;
  double max_frac = 0.0;
  double top3_frac = 0.0;
};
struct TaxonomyOverlap {
  std::vector<OverlapRow> rows;  // sorted by se_type
  long long rows_considered = 0;
  double mean_max_frac = 0.0;
  double mean_top3_frac = 0.0;
};
TaxonomyOverlap taxonomy_overlap(
    const std::map<std::pair<std::string, std::string>, long long>& joint_counts,
    long long min_count = 30);

/// Unchanged fractions per label (rows) and level (columns).  Rows are sorted
/// by ascending mean over the learner levels (every tag except N/Native);
/// ties fall back to the label.
struct LevelsTable {
  std::vector<std::string> levels;  // column order as given
  std::vector<std::string> labels;  // row order
  std::map<std::pair<std::string, std::string>, double> fractions;  // (label, level)
};
LevelsTable levels_table(const std::vector<std::pair<std::string, ConfusionMatrix>>& tagged);

}  // namespace udgec
