#include "udgec/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace udgec {

namespace {

constexpr const char* kAbsent = "-";
constexpr const char* kNone = "None";

std::string label_cell(const std::optional<std::string>& label, bool applicable) {
  if (!applicable) return kAbsent;
  return label ? *label : kNone;
}

std::string id_cell(const std::optional<int>& id) {
  return id ? std::to_string(*id) : kAbsent;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string report_line(const ClassifiedEdit& edit) {
  std::string out = std::to_string(edit.sentence_index);
  out += '\t';
  out += std::to_string(edit.edit_index);
  out += '\t';
  out += to_string(edit.type.kind);
  out += '\t';
  out += edit.scheme.to_string();
  out += '\t';
  out += label_cell(edit.type.source_label, edit.scheme_applicable);
  out += '\t';
  out += label_cell(edit.type.target_label, edit.scheme_applicable);
  out += '\t';
  out += id_cell(edit.source_rep);
  out += '\t';
  out += id_cell(edit.target_rep);
  out += '\t';
  out += edit.external_type ? *edit.external_type : kAbsent;
  return out;
}

void write_report(std::ostream& out, std::span<const ClassifiedEdit> edits) {
  for (const ClassifiedEdit& edit : edits) out << report_line(edit) << '\n';
}

MalformedReport::MalformedReport(int line, const std::string& detail)
    : std::runtime_error("malformed report line " + std::to_string(line) + ": " + detail),
      line(line) {}

std::vector<ReportLine> read_report(std::istream& in) {
  std::vector<ReportLine> out;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const std::vector<std::string> cells = split_tabs(raw);
    if (cells.size() != 9)
      throw MalformedReport(lineno, "expected 9 TAB-separated cells, got " +
                                        std::to_string(cells.size()));
    ReportLine line;
    if (!parse_int(cells[0], line.sentence_index) || !parse_int(cells[1], line.edit_index))
      throw MalformedReport(lineno, "non-integer sentence or edit index");
    const std::optional<EditKind> kind = edit_kind_from_string(cells[2]);
    if (!kind) throw MalformedReport(lineno, "unknown edit kind \"" + cells[2] + "\"");
    line.kind = *kind;
    line.scheme = cells[3];

    line.scheme_applicable = cells[4] != kAbsent && cells[5] != kAbsent;
    if (line.scheme_applicable) {
      if (cells[4] != kNone) line.source_label = cells[4];
      if (cells[5] != kNone) line.target_label = cells[5];
    }
    for (int i : {6, 7}) {
      if (cells[static_cast<size_t>(i)] == kAbsent) continue;
      int id = 0;
      if (!parse_int(cells[static_cast<size_t>(i)], id))
        throw MalformedReport(lineno, "non-integer representative id");
      (i == 6 ? line.source_rep : line.target_rep) = id;
    }
    if (cells[8] != kAbsent) line.external_type = cells[8];
    out.push_back(std::move(line));
  }
  return out;
}

std::map<std::pair<std::string, std::string>, long long> joint_counts(
    std::span<const ReportLine> lines) {
  std::map<std::pair<std::string, std::string>, long long> out;
  for (const ReportLine& line : lines) {
    if (!line.scheme_applicable || !line.external_type) continue;
    const std::string source = line.source_label ? *line.source_label : kNone;
    const std::string target = line.target_label ? *line.target_label : kNone;
    ++out[{source + "->" + target, *line.external_type}];
  }
  return out;
}

}  // namespace udgec
