#pragma once

// Independent checking of LP solutions and the plain-text solution exchange
// format used with external solvers:
//
//   STATUS <status> OBJ <value>
//   COL <name> <value>
//   ROW <name> <dual>

#include <string>
#include <string_view>
#include <vector>

#include "sinkplan/lp.hpp"
#include "sinkplan/mps.hpp"
#include "sinkplan/simplex.hpp"

namespace sinkplan {

struct ResidualReport {
  // Row violation divided by max(1, largest |coefficient| in the row).
  double max_row_residual = 0.0;
  double max_bound_violation = 0.0;
  // |c.x - dual objective| / max(1, |c.x|).
  double duality_gap = 0.0;
  // Largest |dual * slack| over rows and |reduced cost * distance to the
  // bound it prices| over columns, divided by max(1, |c.x|).
  double max_complementarity = 0.0;
  // Wrong-signed duals and reduced costs, relative to the size of the terms
  // they are computed from.
  double max_dual_infeasibility = 0.0;
  std::string worst_row_name;
  std::string worst_column_name;

  /// Feasibility, gap and complementarity all within `tolerance`.
  bool passes(double tolerance = 1e-6) const;
  std::string summary() const;
};

/// Residuals of (primal, duals) for `lp`. Reduced costs are recomputed from
/// the duals; the ones stored in `solution` are not trusted.
ResidualReport certify(const LinearProgram& lp, const Solution& solution);

/// Exchange text keyed by `names` (defaults to the LP's own names).
std::string write_solution(const LinearProgram& lp, const Solution& solution, const NameTable* names = nullptr);

/// Reads an exchange file produced for `lp` (keyed by `names` when given)
/// and certifies it if the status is optimal. Throws Error naming missing
/// or unknown entries, or listing the residuals above `tolerance`.
Solution read_external_solution(const LinearProgram& lp, std::string_view text, const NameTable* names = nullptr,
                                double tolerance = 1e-6, const std::string& source = "<solution>");

}  // namespace sinkplan
