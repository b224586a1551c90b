#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "udgec/stats.hpp"

namespace udgec {

struct MalformedMatrix : std::runtime_error {
  int line;
  MalformedMatrix(int line, const std::string& detail);
};

/// TAB-separated counts: header row of target labels (empty corner cell),
/// one row per source label.  "None" is the literal for the absent label and
/// "Other" comes last.  Labels whose row and column are both zero are
/// omitted, so the printed table is square over the nonzero labels.
void write_matrix_tsv(std::ostream& out, const ConfusionMatrix& matrix);

/// Reads a matrix written by write_matrix_tsv, or any TSV with the same
/// layout (row and column label sets may differ).  The resulting universe is
/// the file's column order followed by any row-only labels, with "Other"
/// kept last.
ConfusionMatrix read_matrix_tsv(std::istream& in);
ConfusionMatrix read_matrix_file(const std::string& path);

}  // namespace udgec
