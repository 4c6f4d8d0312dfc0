#pragma once

// MPS reading and writing.
//
// Fixed format keeps names to 8 characters: when every row and column name
// already fits they are written as is, otherwise rows become R0000000.. and
// columns C0000000.. in index order. The mapping is returned as a NameTable
// and can be stored next to the MPS file. Free format always writes the
// original names and shortest round-trip numbers, so parse(write(lp)) == lp
// exactly. Fixed format numbers are limited to 12 characters and are exact
// only when a 12-character rendering exists.

#include <string>
#include <string_view>
#include <vector>

#include "sinkplan/lp.hpp"

namespace sinkplan {

enum class MpsFormat { fixed, free };

struct NameTable {
  std::vector<std::string> rows;  // name used in the file, per row index
  std::vector<std::string> cols;  // per column index
  bool identity = true;           // file names equal the original names

  friend bool operator==(const NameTable&, const NameTable&) = default;
};

/// Names used for `lp` in the given format. Throws Error when names are
/// duplicated, empty, or contain whitespace.
NameTable mps_names(const LinearProgram& lp, MpsFormat format);

std::string write_mps(const LinearProgram& lp, MpsFormat format = MpsFormat::fixed);

/// Reads fixed or free MPS (fields are whitespace separated, so names with
/// embedded blanks are not accepted). `source` labels error messages.
/// Throws ParseError with the line number on malformed input.
LinearProgram parse_mps(std::string_view text, const std::string& source = "<mps>");

/// "ROW <file name> <original>" and "COL <file name> <original>" lines.
std::string write_name_table(const LinearProgram& lp, const NameTable& names);

/// Renames rows and columns of `lp` (as parsed from a file) back to the
/// original names recorded in `table_text`. Every name must be covered.
void apply_name_table(LinearProgram& lp, std::string_view table_text, const std::string& source = "<names>");

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace sinkplan
