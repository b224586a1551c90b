// Command-line front end: classify GEC edits by Universal Dependencies labels
// and compute corpus statistics over the results.  Data goes to stdout,
// diagnostics to stderr; exit code 2 flags alignment failures (partial output
// is still produced), exit code 1 malformed input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "udgec/classify.hpp"
#include "udgec/corpus.hpp"
#include "udgec/matrix_io.hpp"
#include "udgec/report.hpp"
#include "udgec/stats.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fmt10(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::set<std::string> parse_exclude(const std::string& text) {
  const auto labels = split_commas(text);
  return {labels.begin(), labels.end()};
}

std::set<udgec::EditKind> parse_kinds(const std::string& text) {
  std::set<udgec::EditKind> kinds;
  for (const std::string& item : split_commas(text)) {
    const auto kind = udgec::edit_kind_from_string(item);
    if (!kind) throw CLI::ValidationError("--kinds", "unknown edit kind \"" + item + "\"");
    kinds.insert(*kind);
  }
  if (kinds.empty())
    throw CLI::ValidationError("--kinds", "expected a comma-separated subset of add,del,rep");
  return kinds;
}

json json_or_null(const std::optional<std::string>& value) {
  return value ? json(*value) : json(nullptr);
}

struct CommonOptions {
  std::string scheme_text = "upos";
  int annotator = 0;
  std::string format = "tsv";
  std::string exclude_text;
  std::string kinds_text = "add,del,rep";

  udgec::Scheme scheme() const { return udgec::Scheme::parse(scheme_text); }
  std::set<std::string> exclude() const { return parse_exclude(exclude_text); }
  std::set<udgec::EditKind> kinds() const { return parse_kinds(kinds_text); }
  bool json_output() const { return format == "json"; }
};

void add_format_flag(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
}

void report_failures(const std::vector<udgec::AlignmentFailure>& failures) {
  for (const auto& failure : failures)
    std::cerr << "udgec: sentence " << failure.sentence_index << ": " << failure.message << '\n';
}

json matrix_to_json(const udgec::ConfusionMatrix& matrix) {
  const auto labels = matrix.nonzero_labels();
  json grid = json::array();
  for (const auto& source : labels) {
    json row = json::array();
    for (const auto& target : labels) row.push_back(matrix.at(source, target));
    grid.push_back(std::move(row));
  }
  return json{{"labels", labels}, {"counts", grid}};
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const CommonOptions& opts, const std::string& m2_path,
                 const std::string& src_path, const std::string& cor_path) {
  const udgec::CorpusBundle bundle = udgec::load_bundle(m2_path, src_path, cor_path);
  const udgec::CorpusClassification result =
      udgec::classify_corpus(bundle, opts.scheme(), opts.annotator);

  if (opts.json_output()) {
    json lines = json::array();
    for (const udgec::ClassifiedEdit& edit : result.edits) {
      lines.push_back(json{
          {"sentence_index", edit.sentence_index},
          {"edit_index", edit.edit_index},
          {"kind", udgec::to_string(edit.type.kind)},
          {"scheme", edit.scheme.to_string()},
          {"source_label",
           edit.scheme_applicable ? json_or_null(edit.type.source_label) : json(nullptr)},
          {"target_label",
           edit.scheme_applicable ? json_or_null(edit.type.target_label) : json(nullptr)},
          {"scheme_applicable", edit.scheme_applicable},
          {"src_rep_id", edit.source_rep ? json(*edit.source_rep) : json(nullptr)},
          {"tgt_rep_id", edit.target_rep ? json(*edit.target_rep) : json(nullptr)},
          {"external_type", json_or_null(edit.external_type)},
      });
    }
    std::cout << lines.dump(2) << '\n';
  } else {
    udgec::write_report(std::cout, result.edits);
  }

  report_failures(result.failures);
  if (result.nonempty_spans > 0)
    std::cerr << "udgec: representative ties in " << result.spans_with_tie << " of "
              << result.nonempty_spans << " non-empty spans\n";
  return result.failures.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// matrix

void write_matrix_stats(const std::string& path, const udgec::ConfusionMatrix& matrix,
                        bool as_json) {
  long long nonzero_rows = 0;
  long long nonzero_cols = 0;
  for (const std::string& label : matrix.ordered_labels()) {
    if (matrix.row_sum(label) > 0) ++nonzero_rows;
    if (matrix.col_sum(label) > 0) ++nonzero_cols;
  }
  std::optional<double> v;
  try {
    v = udgec::cramers_v(matrix);
  } catch (const udgec::DegenerateTable&) {
  }
  std::optional<udgec::EntropyResult> entropy;
  if (matrix.total() > 0) entropy = udgec::entropy_effective(udgec::cell_counts(matrix));

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (as_json) {
    json stats{{"total", matrix.total()},
               {"nonzero_rows", nonzero_rows},
               {"nonzero_cols", nonzero_cols},
               {"cramers_v", v ? json(*v) : json(nullptr)},
               {"entropy_nats", entropy ? json(entropy->entropy_nats) : json(nullptr)},
               {"effective_types", entropy ? json(entropy->effective_types) : json(nullptr)}};
    out << stats.dump(2) << '\n';
  } else {
    out << "total\t" << matrix.total() << '\n';
    out << "nonzero_rows\t" << nonzero_rows << '\n';
    out << "nonzero_cols\t" << nonzero_cols << '\n';
    out << "cramers_v\t" << (v ? fmt10(*v) : "NA") << '\n';
    out << "entropy_nats\t" << (entropy ? fmt10(entropy->entropy_nats) : "NA") << '\n';
    out << "effective_types\t" << (entropy ? fmt10(entropy->effective_types) : "NA") << '\n';
  }
}

int cmd_matrix(const CommonOptions& opts, const std::string& m2_path,
               const std::string& src_path, const std::string& cor_path,
               const std::string& stats_path) {
  const udgec::CorpusBundle bundle = udgec::load_bundle(m2_path, src_path, cor_path);
  const udgec::Scheme scheme = opts.scheme();
  const udgec::CorpusClassification result =
      udgec::classify_corpus(bundle, scheme, opts.annotator);

  udgec::ConfusionMatrix matrix =
      result.edits.empty()
          ? udgec::ConfusionMatrix(scheme)
          : udgec::build_matrix(result.edits, opts.kinds(), opts.exclude());

  if (opts.json_output())
    std::cout << matrix_to_json(matrix).dump(2) << '\n';
  else
    udgec::write_matrix_tsv(std::cout, matrix);

  if (!stats_path.empty()) write_matrix_stats(stats_path, matrix, opts.json_output());

  report_failures(result.failures);
  return result.failures.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// levels

int cmd_levels(const CommonOptions& opts, const std::vector<std::string>& matrix_paths,
               const std::vector<std::string>& m2_paths,
               const std::vector<std::string>& src_paths,
               const std::vector<std::string>& cor_paths,
               const std::vector<std::string>& level_tags) {
  std::vector<std::pair<std::string, udgec::ConfusionMatrix>> tagged;
  std::vector<udgec::AlignmentFailure> failures;

  for (size_t i = 0; i < level_tags.size(); ++i)
    for (size_t j = i + 1; j < level_tags.size(); ++j)
      if (level_tags[i] == level_tags[j])
        throw CLI::ValidationError("levels", "duplicate --level tag \"" + level_tags[i] + "\"");

  if (!matrix_paths.empty()) {
    if (!m2_paths.empty())
      throw CLI::ValidationError("levels", "give either --matrix files or bundle inputs");
    if (level_tags.size() != matrix_paths.size()) throw udgec::MissingLevelTag();
    for (size_t i = 0; i < matrix_paths.size(); ++i)
      tagged.emplace_back(level_tags[i], udgec::read_matrix_file(matrix_paths[i]));
  } else {
    if (m2_paths.empty())
      throw CLI::ValidationError("levels", "needs --matrix files or bundle inputs");
    if (m2_paths.size() != src_paths.size() || m2_paths.size() != cor_paths.size())
      throw CLI::ValidationError("levels", "unbalanced --m2/--src-conllu/--cor-conllu lists");
    if (level_tags.size() != m2_paths.size()) throw udgec::MissingLevelTag();
    for (size_t i = 0; i < m2_paths.size(); ++i) {
      const udgec::CorpusBundle bundle =
          udgec::load_bundle(m2_paths[i], src_paths[i], cor_paths[i], level_tags[i]);
      tagged.emplace_back(level_tags[i],
                          udgec::build_levels_matrix(bundle, opts.scheme(), opts.annotator,
                                                     opts.exclude(), &failures));
    }
  }

  const udgec::LevelsTable table = udgec::levels_table(tagged);

  if (opts.json_output()) {
    json rows = json::array();
    for (const std::string& label : table.labels) {
      json fractions = json::object();
      for (const std::string& level : table.levels) {
        const auto it = table.fractions.find({label, level});
        if (it != table.fractions.end()) fractions[level] = it->second;
      }
      rows.push_back(json{{"label", label}, {"fractions", std::move(fractions)}});
    }
    std::cout << json{{"levels", table.levels}, {"rows", std::move(rows)}}.dump(2) << '\n';
  } else {
    std::cout << "label";
    for (const std::string& level : table.levels) std::cout << '\t' << level;
    std::cout << '\n';
    for (const std::string& label : table.labels) {
      std::cout << label;
      for (const std::string& level : table.levels) {
        const auto it = table.fractions.find({label, level});
        std::cout << '\t' << (it != table.fractions.end() ? fmt3(it->second) : "NA");
      }
      std::cout << '\n';
    }
  }

  report_failures(failures);
  return failures.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// recall

int cmd_recall(const CommonOptions& opts, const std::vector<std::string>& matrix_paths,
               const std::vector<std::string>& names) {
  if (matrix_paths.size() < 2)
    throw CLI::ValidationError("recall",
                               "needs a gold --matrix followed by at least one system --matrix");
  if (!names.empty() && names.size() != matrix_paths.size())
    throw CLI::ValidationError("recall", "--level names must match the --matrix count");

  const udgec::ConfusionMatrix gold = udgec::read_matrix_file(matrix_paths.front());
  const std::set<std::string> exclude = opts.exclude();

  struct SystemResult {
    std::string name;
    udgec::RecallBound bound;
  };
  std::vector<SystemResult> systems;
  for (size_t i = 1; i < matrix_paths.size(); ++i) {
    const udgec::ConfusionMatrix system = udgec::read_matrix_file(matrix_paths[i]);
    std::string name = !names.empty() ? names[i] : "system" + std::to_string(i);
    systems.push_back({std::move(name), udgec::recall_bound(system, gold, exclude)});
  }

  // Labels in the gold matrix order keep the output stable across systems.
  std::vector<std::string> label_order;
  for (const std::string& label : gold.ordered_labels())
    if (!systems.empty() && systems.front().bound.per_label.count(label))
      label_order.push_back(label);

  if (opts.json_output()) {
    json out = json::array();
    for (const SystemResult& sys : systems) {
      json rows = json::array();
      for (const std::string& label : label_order)
        rows.push_back(json{{"label", label},
                            {"system_ses", sys.bound.system_counts.at(label)},
                            {"gold_ses", sys.bound.gold_counts.at(label)},
                            {"ratio", sys.bound.per_label.at(label)}});
      out.push_back(json{{"system", sys.name},
                         {"per_label", std::move(rows)},
                         {"overall",
                          json{{"system_ses", sys.bound.system_total},
                               {"gold_ses", sys.bound.gold_total},
                               {"ratio", sys.bound.overall}}}});
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "system\tlabel\tsystem_ses\tgold_ses\tratio\n";
    for (const SystemResult& sys : systems) {
      for (const std::string& label : label_order)
        std::cout << sys.name << '\t' << label << '\t' << sys.bound.system_counts.at(label)
                  << '\t' << sys.bound.gold_counts.at(label) << '\t'
                  << fmt3(sys.bound.per_label.at(label)) << '\n';
      std::cout << sys.name << "\tOverall\t" << sys.bound.system_total << '\t'
                << sys.bound.gold_total << '\t' << fmt3(sys.bound.overall) << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const CommonOptions& opts, const std::string& report_path, long long min_count) {
  std::vector<udgec::ReportLine> lines;
  if (report_path == "-") {
    lines = udgec::read_report(std::cin);
  } else {
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("cannot open " + report_path);
    lines = udgec::read_report(in);
  }

  const udgec::TaxonomyOverlap overlap =
      udgec::taxonomy_overlap(udgec::joint_counts(lines), min_count);

  if (opts.json_output()) {
    json rows = json::array();
    for (const udgec::OverlapRow& row : overlap.rows)
      rows.push_back(json{{"se_type", row.se_type},
                          {"total", row.total},
                          {"top_external", row.argmax_external},
                          {"max_frac", row.max_frac},
                          {"top3_frac", row.top3_frac}});
    std::cout << json{{"rows", std::move(rows)},
                      {"overall",
                       json{{"rows_considered", overlap.rows_considered},
                            {"mean_max_frac", overlap.mean_max_frac},
                            {"mean_top3_frac", overlap.mean_top3_frac}}}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "se_type\ttotal\ttop_external\tmax_frac\ttop3_frac\n";
    for (const udgec::OverlapRow& row : overlap.rows)
      std::cout << row.se_type << '\t' << row.total << '\t' << row.argmax_external << '\t'
                << fmt10(row.max_frac) << '\t' << fmt10(row.top3_frac) << '\n';
    std::cout << "Overall\t" << overlap.rows_considered << "\t-\t"
              << fmt10(overlap.mean_max_frac) << '\t' << fmt10(overlap.mean_top3_frac) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify grammatical-error-correction edits by their Universal Dependencies "
               "labels and compute corpus statistics"};
  app.set_version_flag("--version", "udgec 1.0.0");
  app.require_subcommand(1);

  CommonOptions opts;
  std::string m2_path, src_path, cor_path;
  std::string stats_path;
  std::string report_path = "-";
  long long min_count = 30;
  std::vector<std::string> matrix_paths, level_tags;
  std::vector<std::string> m2_paths, src_paths, cor_paths;

  CLI::App* classify = app.add_subcommand(
      "classify", "Per-edit TSV report: sentence_index, edit_index, kind, scheme, "
                  "source_label, target_label, src_rep_id, tgt_rep_id, external_type");
  classify->add_option("--m2", m2_path, "M2 edit file")->required();
  classify->add_option("--src-conllu", src_path, "CoNLL-U parses of the source")->required();
  classify->add_option("--cor-conllu", cor_path, "CoNLL-U parses of the corrections")
      ->required();
  classify->add_option("--scheme", opts.scheme_text, "upos | deprel | feature:<Name>[:<UPOS>]")
      ->capture_default_str();
  classify->add_option("--annotator", opts.annotator, "M2 annotator id")->capture_default_str();
  add_format_flag(classify, opts);

  CLI::App* matrix = app.add_subcommand("matrix", "Confusion matrix over classified edits");
  matrix->add_option("--m2", m2_path, "M2 edit file")->required();
  matrix->add_option("--src-conllu", src_path, "CoNLL-U parses of the source")->required();
  matrix->add_option("--cor-conllu", cor_path, "CoNLL-U parses of the corrections")->required();
  matrix->add_option("--scheme", opts.scheme_text, "upos | deprel | feature:<Name>[:<UPOS>]")
      ->capture_default_str();
  matrix->add_option("--annotator", opts.annotator, "M2 annotator id")->capture_default_str();
  matrix->add_option("--kinds", opts.kinds_text, "Edit kinds to count (add,del,rep)")
      ->capture_default_str();
  matrix->add_option("--exclude-labels", opts.exclude_text,
                     "Comma-separated labels to drop, e.g. PUNCT,SYM,X,INTJ");
  matrix->add_option("--stats", stats_path,
                     "Also write total/Cramer's V/entropy statistics to this file");
  add_format_flag(matrix, opts);

  CLI::App* levels = app.add_subcommand(
      "levels", "Unchanged-label fractions per proficiency level (rows sorted by learner mean)");
  levels->add_option("--matrix", matrix_paths, "Prebuilt matrix file, one per level");
  levels->add_option("--level", level_tags, "Level tag per input, e.g. A B C N");
  levels->add_option("--m2", m2_paths, "M2 edit file, one per level");
  levels->add_option("--src-conllu", src_paths, "Source parses, one per level");
  levels->add_option("--cor-conllu", cor_paths, "Corrected parses, one per level");
  levels->add_option("--scheme", opts.scheme_text, "upos | deprel | feature:<Name>[:<UPOS>]")
      ->capture_default_str();
  levels->add_option("--annotator", opts.annotator, "M2 annotator id")->capture_default_str();
  levels->add_option("--exclude-labels", opts.exclude_text, "Comma-separated labels to drop");
  add_format_flag(levels, opts);

  CLI::App* recall = app.add_subcommand(
      "recall", "Upper bound on recall: per-label SE counts of each system over the gold "
                "counts (first --matrix is the gold standard)");
  recall->add_option("--matrix", matrix_paths, "Gold matrix first, then system matrices")
      ->required();
  recall->add_option("--level", level_tags, "Names for the matrices, gold first");
  recall->add_option("--exclude-labels", opts.exclude_text, "Comma-separated labels to drop");
  add_format_flag(recall, opts);

  CLI::App* compare = app.add_subcommand(
      "compare", "External-taxonomy overlap per SE type from a classify report");
  compare->add_option("--report", report_path, "Per-edit report file, or - for stdin")
      ->capture_default_str();
  compare->add_option("--min-count", min_count, "Omit SE types with fewer instances")
      ->capture_default_str();
  add_format_flag(compare, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(opts, m2_path, src_path, cor_path);
    if (matrix->parsed()) return cmd_matrix(opts, m2_path, src_path, cor_path, stats_path);
    if (levels->parsed())
      return cmd_levels(opts, matrix_paths, m2_paths, src_paths, cor_paths, level_tags);
    if (recall->parsed()) return cmd_recall(opts, matrix_paths, level_tags);
    if (compare->parsed()) return cmd_compare(opts, report_path, min_count);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "udgec: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
