#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sinkplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Sparse linear program: minimize objective . x subject to rows and column bounds.
/// Triplets are kept sorted by (row, col) with no duplicates.
struct LinearProgram {
  std::string name = "SINKPLAN";
  std::vector<double> objective;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<std::string> col_names;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<std::string> row_names;
  std::vector<Triplet> matrix;

  std::size_t n_cols() const { return objective.size(); }
  std::size_t n_rows() const { return rhs.size(); }

  std::size_t add_col(std::string col_name, double cost = 0.0, double lower = 0.0, double upper = kInf);

  /// Appends a row; entries are merged by column and exact zeros dropped.
  /// Returns the row index, or npos when every coefficient cancels (the row is
  /// then skipped; a trivially violated empty row throws).
  std::size_t add_row(std::string row_name, RowSense sense, double rhs_value,
                      std::vector<std::pair<std::size_t, double>> entries);

  /// Throws Error if any structural invariant is broken (non-finite data,
  /// unsorted or duplicate triplets, empty rows, out-of-range indices).
  void check() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const LinearProgram&, const LinearProgram&) = default;
};

/// Column-major copy of the constraint matrix.
struct CscMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> start;  // cols + 1 entries
  std::vector<std::size_t> index;
  std::vector<double> value;

  static CscMatrix from(const LinearProgram& lp);
};

/// Row activities A x.
std::vector<double> row_activity(const LinearProgram& lp, std::span<const double> x);

std::string_view to_string(RowSense sense);

}  // namespace sinkplan
