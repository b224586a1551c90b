#include "udgec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace udgec {

namespace {

const std::string kNoneLabel = ConfusionMatrix::kNone;
const std::string kOtherLabel = ConfusionMatrix::kOther;

std::string label_or_none(const std::optional<std::string>& label) {
  return label ? *label : kNoneLabel;
}

bool is_native_tag(const std::string& tag) {
  return tag == "N" || tag == "n" || tag == "Native" || tag == "native" || tag == "NATIVE";
}

}  // namespace

const std::vector<std::string>& ConfusionMatrix::canonical_upos() {
  static const std::vector<std::string> tags = {
      "ADJ", "ADP",  "ADV",   "AUX",   "CCONJ", "DET", "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

ConfusionMatrix::ConfusionMatrix(Scheme scheme) : scheme_(std::move(scheme)) {
  if (scheme_->kind() == SchemeKind::Upos) {
    fixed_ = true;
    universe_.push_back(kNoneLabel);
    universe_.insert(universe_.end(), canonical_upos().begin(), canonical_upos().end());
    universe_.push_back(kOtherLabel);
  }
}

ConfusionMatrix::ConfusionMatrix(std::optional<Scheme> scheme, std::vector<std::string> universe)
    : scheme_(std::move(scheme)), fixed_(true), universe_(std::move(universe)) {
  auto other = std::find(universe_.begin(), universe_.end(), kOtherLabel);
  if (other == universe_.end())
    universe_.push_back(kOtherLabel);
  else if (other != universe_.end() - 1)
    std::rotate(other, other + 1, universe_.end());
}

void ConfusionMatrix::add(const std::optional<std::string>& source,
                          const std::optional<std::string>& target, long long count) {
  std::string s = label_or_none(source);
  std::string t = label_or_none(target);
  if (fixed_) {
    if (std::find(universe_.begin(), universe_.end(), s) == universe_.end()) s = kOtherLabel;
    if (std::find(universe_.begin(), universe_.end(), t) == universe_.end()) t = kOtherLabel;
  } else {
    seen_.insert(s);
    seen_.insert(t);
  }
  counts_[{std::move(s), std::move(t)}] += count;
  total_ += count;
}

long long ConfusionMatrix::at(const std::string& source, const std::string& target) const {
  const auto it = counts_.find({source, target});
  return it == counts_.end() ? 0 : it->second;
}

long long ConfusionMatrix::row_sum(const std::string& label) const {
  long long sum = 0;
  for (auto it = counts_.lower_bound({label, std::string()});
       it != counts_.end() && it->first.first == label; ++it)
    sum += it->second;
  return sum;
}

long long ConfusionMatrix::col_sum(const std::string& label) const {
  long long sum = 0;
  for (const auto& [key, count] : counts_)
    if (key.second == label) sum += count;
  return sum;
}

std::vector<std::string> ConfusionMatrix::ordered_labels() const {
  if (fixed_) return universe_;
  std::vector<std::string> out;
  if (seen_.count(kNoneLabel)) out.push_back(kNoneLabel);
  for (const std::string& label : seen_)
    if (label != kNoneLabel && label != kOtherLabel) out.push_back(label);
  if (seen_.count(kOtherLabel)) out.push_back(kOtherLabel);
  return out;
}

std::vector<std::string> ConfusionMatrix::nonzero_labels() const {
  std::vector<std::string> out;
  for (const std::string& label : ordered_labels())
    if (row_sum(label) > 0 || col_sum(label) > 0) out.push_back(label);
  return out;
}

bool ConfusionMatrix::same_shape(const ConfusionMatrix& other) const {
  if (scheme_.has_value() != other.scheme_.has_value()) return false;
  if (scheme_ && !(*scheme_ == *other.scheme_)) return false;
  if (fixed_ != other.fixed_) return false;
  if (fixed_ && universe_ != other.universe_) return false;
  return true;
}

ConfusionMatrix merge(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  if (!a.same_shape(b)) throw MixedSchemes();
  ConfusionMatrix out = a;
  for (const auto& [key, count] : b.cells()) out.add(key.first, key.second, count);
  return out;
}

ConfusionMatrix build_matrix(std::span<const ClassifiedEdit> edits,
                             const std::set<EditKind>& kinds,
                             const std::set<std::string>& exclude_labels) {
  ConfusionMatrix matrix;
  bool first = true;
  for (const ClassifiedEdit& edit : edits) {
    if (first) {
      matrix = ConfusionMatrix(edit.scheme);
      first = false;
    } else if (!(edit.scheme == *matrix.scheme())) {
      throw MixedSchemes();
    }
    if (!edit.scheme_applicable) continue;
    if (!kinds.count(edit.type.kind)) continue;
    if (edit.type.source_label && exclude_labels.count(*edit.type.source_label)) continue;
    if (edit.type.target_label && exclude_labels.count(*edit.type.target_label)) continue;
    matrix.add(edit.type.source_label, edit.type.target_label);
  }
  return matrix;
}

ConfusionMatrix build_levels_matrix(const CorpusBundle& bundle, const Scheme& scheme,
                                    int annotator, const std::set<std::string>& exclude_labels,
                                    std::vector<AlignmentFailure>* failures) {
  const CorpusClassification classification = classify_corpus(bundle, scheme, annotator);
  if (failures)
    failures->insert(failures->end(), classification.failures.begin(),
                     classification.failures.end());

  ConfusionMatrix matrix =
      build_matrix(classification.edits, {EditKind::Replacement}, exclude_labels);
  if (classification.edits.empty()) matrix = ConfusionMatrix(scheme);

  std::set<int> skipped;
  for (const AlignmentFailure& f : classification.failures) skipped.insert(f.sentence_index);

  // Source tokens outside every merged edit span count as unchanged.
  size_t next_edit = 0;
  for (size_t i = 0; i < bundle.source_parses.size(); ++i) {
    const ParsedSentence& sentence = bundle.source_parses[i];
    std::vector<char> covered(static_cast<size_t>(sentence.size()), 0);
    while (next_edit < classification.edits.size() &&
           classification.edits[next_edit].sentence_index == static_cast<int>(i)) {
      const auto [start, end] = classification.edits[next_edit].source_span;
      for (int offset = start; offset < end; ++offset) covered[static_cast<size_t>(offset)] = 1;
      ++next_edit;
    }
    if (skipped.count(static_cast<int>(i))) continue;
    for (const Token& token : sentence.tokens) {
      if (covered[static_cast<size_t>(token.id - 1)]) continue;
      const std::optional<std::string> label = label_of(token, scheme);
      if (!label || exclude_labels.count(*label)) continue;
      matrix.add(label, label);
    }
  }
  return matrix;
}

std::map<std::string, double> unchanged_fraction(const ConfusionMatrix& matrix) {
  std::map<std::string, double> out;
  for (const std::string& label : matrix.ordered_labels()) {
    if (label == kNoneLabel) continue;
    const long long row = matrix.row_sum(label);
    if (row <= 0) continue;
    out[label] = static_cast<double>(matrix.at(label, label)) / static_cast<double>(row);
  }
  return out;
}

namespace {

// Per-source-label syntactic-error counts: everything in the row except the
// diagonal, which covers label changes and deletions alike.
std::map<std::string, long long> se_counts(const ConfusionMatrix& matrix) {
  std::map<std::string, long long> out;
  for (const auto& [key, count] : matrix.cells()) {
    const auto& [source, target] = key;
    if (source == kNoneLabel) continue;  // additions have no source label
    if (source == target) continue;
    out[source] += count;
  }
  return out;
}

}  // namespace

RecallBound recall_bound(const ConfusionMatrix& system, const ConfusionMatrix& gold,
                         const std::set<std::string>& exclude_labels) {
  if (system.scheme() && gold.scheme() && !(*system.scheme() == *gold.scheme()))
    throw MixedSchemes();

  const std::map<std::string, long long> system_se = se_counts(system);
  const std::map<std::string, long long> gold_se = se_counts(gold);

  RecallBound out;
  for (const auto& [label, gold_count] : gold_se) {
    if (gold_count <= 0 || exclude_labels.count(label)) continue;
    const auto it = system_se.find(label);
    const long long system_count = it == system_se.end() ? 0 : it->second;
    out.gold_counts[label] = gold_count;
    out.system_counts[label] = system_count;
    out.per_label[label] = static_cast<double>(system_count) / static_cast<double>(gold_count);
    out.gold_total += gold_count;
    out.system_total += system_count;
  }
  out.overall = out.gold_total > 0
                    ? static_cast<double>(out.system_total) / static_cast<double>(out.gold_total)
                    : 0.0;
  return out;
}

double cramers_v(const ConfusionMatrix& matrix) {
  std::map<std::string, long long> row_sums;
  std::map<std::string, long long> col_sums;
  for (const auto& [key, count] : matrix.cells()) {
    if (count == 0) continue;
    row_sums[key.first] += count;
    col_sums[key.second] += count;
  }
  // Zero-sum rows can appear when cells exist but hold zero counts.
  std::erase_if(row_sums, [](const auto& kv) { return kv.second <= 0; });
  std::erase_if(col_sums, [](const auto& kv) { return kv.second <= 0; });

  const size_t r = row_sums.size();
  const size_t c = col_sums.size();
  if (r < 2 || c < 2) throw DegenerateTable();

  const double n = static_cast<double>(matrix.total());
  double chi2 = 0.0;
  for (const auto& [row, row_sum] : row_sums) {
    for (const auto& [col, col_sum] : col_sums) {
      const double expected =
          static_cast<double>(row_sum) * static_cast<double>(col_sum) / n;
      const double observed = static_cast<double>(matrix.at(row, col));
      const double diff = observed - expected;
      chi2 += diff * diff / expected;
    }
  }
  const double k = static_cast<double>(std::min(r, c)) - 1.0;
  const double v2 = chi2 / (n * k);
  return std::sqrt(std::max(0.0, std::min(1.0, v2)));
}

DistributionComparison pearson(const std::map<std::string, double>& a,
                               const std::map<std::string, double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("frequency maps must share a universe of >= 2 labels");
  std::vector<double> x, y;
  x.reserve(a.size());
  y.reserve(a.size());
  auto ita = a.begin();
  auto itb = b.begin();
  for (; ita != a.end(); ++ita, ++itb) {
    if (ita->first != itb->first)
      throw std::invalid_argument("frequency maps must share a universe of >= 2 labels");
    x.push_back(ita->second);
    y.push_back(itb->second);
  }

  const size_t n = x.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();

  DistributionComparison out;
  out.pearson_r = sxy / std::sqrt(sxx * syy);

  double abs_diff = 0.0;
  for (size_t i = 0; i < n; ++i) abs_diff += std::abs(x[i] - y[i]);
  out.mean_abs_diff = abs_diff / static_cast<double>(n);

  double sum_x = mean_x * static_cast<double>(n);
  double sum_y = mean_y * static_cast<double>(n);
  if (sum_x != 0.0 && sum_y != 0.0) {
    double abs_diff_prop = 0.0;
    for (size_t i = 0; i < n; ++i) abs_diff_prop += std::abs(x[i] / sum_x - y[i] / sum_y);
    out.mean_abs_diff_proportions = abs_diff_prop / static_cast<double>(n);
  }
  return out;
}

EntropyResult entropy_effective(const std::map<std::string, long long>& counts) {
  long long total = 0;
  for (const auto& [type, count] : counts) {
    if (count < 0) throw std::invalid_argument("negative count for type " + type);
    total += count;
  }
  if (total < 1) throw std::invalid_argument("entropy needs a nonzero total");

  double entropy = 0.0;
  for (const auto& [type, count] : counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    entropy -= p * std::log(p);
  }
  entropy = std::max(0.0, entropy);
  return {entropy, std::exp(entropy)};
}

std::map<std::string, long long> cell_counts(const ConfusionMatrix& matrix) {
  std::map<std::string, long long> out;
  for (const auto& [key, count] : matrix.cells())
    if (count > 0) out[key.first + "->" + key.second] += count;
  return out;
}

TaxonomyOverlap taxonomy_overlap(
    const std::map<std::pair<std::string, std::string>, long long>& joint_counts,
    long long min_count) {
  std::map<std::string, std::vector<std::pair<std::string, long long>>> by_type;
  for (const auto& [key, count] : joint_counts)
    if (count > 0) by_type[key.first].emplace_back(key.second, count);

  TaxonomyOverlap out;
  double sum_max = 0.0;
  double sum_top3 = 0.0;
  for (auto& [se_type, externals] : by_type) {
    long long total = 0;
    for (const auto& [label, count] : externals) total += count;
    if (total < min_count) continue;

    std::sort(externals.begin(), externals.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    long long top3 = 0;
    for (size_t i = 0; i < externals.size() && i < 3; ++i) top3 += externals[i].second;

    OverlapRow row;
    row.se_type = se_type;
    row.total = total;
    row.argmax_external = externals.front().first;
    row.max_frac = static_cast<double>(externals.front().second) / static_cast<double>(total);
    row.top3_frac = static_cast<double>(top3) / static_cast<double>(total);
    sum_max += row.max_frac;
    sum_top3 += row.top3_frac;
    out.rows.push_back(std::move(row));
  }
  out.rows_considered = static_cast<long long>(out.rows.size());
  if (!out.rows.empty()) {
    out.mean_max_frac = sum_max / static_cast<double>(out.rows.size());
    out.mean_top3_frac = sum_top3 / static_cast<double>(out.rows.size());
  }
  return out;
}

LevelsTable levels_table(const std::vector<std::pair<std::string, ConfusionMatrix>>& tagged) {
  LevelsTable table;
  std::map<std::string, std::map<std::string, double>> by_label;  // label -> level -> fraction
  for (const auto& [tag, matrix] : tagged) {
    if (tag.empty()) throw MissingLevelTag();
    table.levels.push_back(tag);
    for (const auto& [label, fraction] : unchanged_fraction(matrix)) {
      by_label[label][tag] = fraction;
      table.fractions[{label, tag}] = fraction;
    }
  }

  std::vector<std::string> learner_levels;
  for (const std::string& tag : table.levels)
    if (!is_native_tag(tag)) learner_levels.push_back(tag);
  if (learner_levels.empty()) learner_levels = table.levels;

  std::vector<std::pair<double, std::string>> keyed;
  for (const auto& [label, per_level] : by_label) {
    double sum = 0.0;
    int n = 0;
    for (const std::string& tag : learner_levels) {
      const auto it = per_level.find(tag);
      if (it != per_level.end()) {
        sum += it->second;
        ++n;
      }
    }
    double key;
    if (n > 0) {
      key = sum / n;
    } else {
      // Only native data for this label; sort by what is there.
      double all = 0.0;
      for (const auto& [tag, fraction] : per_level) all += fraction;
      key = per_level.empty() ? 0.0 : all / static_cast<double>(per_level.size());
    }
    keyed.emplace_back(key, label);
  }
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [key, label] : keyed) table.labels.push_back(label);
  return table;
}

}  // namespace udgec
