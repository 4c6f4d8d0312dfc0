#include "sinkplan/lp.hpp"

#include <algorithm>
#include <cmath>

#include "sinkplan/error.hpp"

namespace sinkplan {

std::size_t LinearProgram::add_col(std::string col_name, double cost, double lower, double upper) {
  objective.push_back(cost);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  col_names.push_back(std::move(col_name));
  return objective.size() - 1;
}

std::size_t LinearProgram::add_row(std::string row_name, RowSense sense, double rhs_value,
                                    std::vector<std::pair<std::size_t, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::size_t, double>> merged;
  merged.reserve(entries.size());
  for (const auto& [col, v] : entries) {
    if (!merged.empty() && merged.back().first == col)
      merged.back().second += v;
    else
      merged.emplace_back(col, v);
  }
  std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });

  if (merged.empty()) {
    const bool ok = (sense == RowSense::le && rhs_value >= 0) || (sense == RowSense::ge && rhs_value <= 0) ||
                    (sense == RowSense::eq && rhs_value == 0);
    if (!ok) throw Error("row '" + row_name + "' has no coefficients and is infeasible");
    return npos;
  }
  const std::size_t row = rhs.size();
  for (const auto& [col, v] : merged) matrix.push_back({row, col, v});
  senses.push_back(sense);
  rhs.push_back(rhs_value);
  row_names.push_back(std::move(row_name));
  return row;
}

void LinearProgram::check() const {
  const std::size_t n = n_cols();
  const std::size_t m = n_rows();
  if (col_lower.size() != n || col_upper.size() != n || col_names.size() != n)
    throw Error("lp: column arrays disagree in length");
  if (senses.size() != m || row_names.size() != m) throw Error("lp: row arrays disagree in length");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw Error("lp: non-finite objective at column " + col_names[j]);
    if (std::isnan(col_lower[j]) || std::isnan(col_upper[j]) || col_lower[j] == kInf || col_upper[j] == -kInf)
      throw Error("lp: invalid bounds at column " + col_names[j]);
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!std::isfinite(rhs[i])) throw Error("lp: non-finite rhs at row " + row_names[i]);
  std::vector<bool> used(m, false);
  for (std::size_t k = 0; k < matrix.size(); ++k) {
    const auto& t = matrix[k];
    if (t.row >= m || t.col >= n) throw Error("lp: triplet index out of range");
    if (!std::isfinite(t.value)) throw Error("lp: non-finite coefficient in row " + row_names[t.row]);
    if (k > 0) {
      const auto& p = matrix[k - 1];
      if (p.row > t.row || (p.row == t.row && p.col >= t.col))
        throw Error("lp: triplets unsorted or duplicated at row " + row_names[t.row]);
    }
    used[t.row] = true;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!used[i]) throw Error("lp: row " + row_names[i] + " has no coefficients");
}

CscMatrix CscMatrix::from(const LinearProgram& lp) {
  CscMatrix a;
  a.rows = lp.n_rows();
  a.cols = lp.n_cols();
  a.start.assign(a.cols + 1, 0);
  for (const auto& t : lp.matrix) ++a.start[t.col + 1];
  for (std::size_t j = 0; j < a.cols; ++j) a.start[j + 1] += a.start[j];
  a.index.resize(lp.matrix.size());
  a.value.resize(lp.matrix.size());
  std::vector<std::size_t> next(a.start.begin(), a.start.end() - 1);
  for (const auto& t : lp.matrix) {
    const std::size_t k = next[t.col]++;
    a.index[k] = t.row;
    a.value[k] = t.value;
  }
  return a;
}

std::vector<double> row_activity(const LinearProgram& lp, std::span<const double> x) {
  std::vector<double> act(lp.n_rows(), 0.0);
  for (const auto& t : lp.matrix) act[t.row] += t.value * x[t.col];
  return act;
}

std::string_view to_string(RowSense sense) {
  switch (sense) {
    case RowSense::le: return "<=";
    case RowSense::eq: return "=";
    case RowSense::ge: return ">=";
  }
  return "?";
}

}  // namespace sinkplan
