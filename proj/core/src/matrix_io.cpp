#include "udgec/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace udgec {

namespace {

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

bool parse_count(const std::string& s, long long& out) {
  if (s.empty()) return false;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

MalformedMatrix::MalformedMatrix(int line, const std::string& detail)
    : std::runtime_error("malformed matrix file at line " + std::to_string(line) + ": " + detail),
      line(line) {}

void write_matrix_tsv(std::ostream& out, const ConfusionMatrix& matrix) {
  const std::vector<std::string> labels = matrix.nonzero_labels();
  for (const std::string& label : labels) out << '\t' << label;
  out << '\n';
  for (const std::string& source : labels) {
    out << source;
    for (const std::string& target : labels) out << '\t' << matrix.at(source, target);
    out << '\n';
  }
}

ConfusionMatrix read_matrix_tsv(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::vector<long long>>> rows;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_tabs(line);
    if (columns.empty()) {
      if (cells.size() < 2) throw MalformedMatrix(lineno, "header row needs target labels");
      columns.assign(cells.begin() + 1, cells.end());  // corner cell ignored
      continue;
    }
    if (cells.size() != columns.size() + 1)
      throw MalformedMatrix(lineno, "expected " + std::to_string(columns.size() + 1) +
                                        " cells, got " + std::to_string(cells.size()));
    std::vector<long long> counts(columns.size());
    for (size_t i = 0; i < columns.size(); ++i)
      if (!parse_count(cells[i + 1], counts[i]))
        throw MalformedMatrix(lineno, "non-integer count \"" + cells[i + 1] + "\"");
    rows.emplace_back(cells[0], std::move(counts));
  }
  if (columns.empty()) throw MalformedMatrix(lineno, "empty matrix file");

  std::vector<std::string> universe = columns;
  for (const auto& [label, counts] : rows)
    if (std::find(universe.begin(), universe.end(), label) == universe.end())
      universe.push_back(label);

  ConfusionMatrix matrix(std::nullopt, std::move(universe));
  for (const auto& [label, counts] : rows)
    for (size_t i = 0; i < columns.size(); ++i)
      if (counts[i] != 0) matrix.add(label, columns[i], counts[i]);
  return matrix;
}

ConfusionMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix_tsv(in);
}

}  // namespace udgec
