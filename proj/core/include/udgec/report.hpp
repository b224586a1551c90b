#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udgec/classify.hpp"

namespace udgec {

/// Per-edit report line, TAB-separated, no header:
///   sentence_index  edit_index  kind  scheme  source_label  target_label
///   src_rep_id  tgt_rep_id  external_type
/// Labels print as "None" when absent and "-" when the scheme does not apply
/// to the edit; absent representative ids and external types print as "-".
std::string report_line(const ClassifiedEdit& edit);
void write_report(std::ostream& out, std::span<const ClassifiedEdit> edits);

struct MalformedReport : std::runtime_error {
  int line;
  MalformedReport(int line, const std::string& detail);
};

struct ReportLine {
  int sentence_index = 0;
  int edit_index = 0;
  EditKind kind = EditKind::Replacement;
  std::string scheme;
  std::optional<std::string> source_label;  // nullopt = "None"
  std::optional<std::string> target_label;
  std::optional<int> source_rep;
  std::optional<int> target_rep;
  std::optional<std::string> external_type;
  bool scheme_applicable = true;
};

std::vector<ReportLine> read_report(std::istream& in);

/// (se_type "source->target", external_type) counts for the taxonomy-overlap
/// statistics.  Lines without an external type or with an inapplicable
/// scheme are skipped.
std::map<std::pair<std::string, std::string>, long long> joint_counts(
    std::span<const ReportLine> lines);

}  // namespace udgec
