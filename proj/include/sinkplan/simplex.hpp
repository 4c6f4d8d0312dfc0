#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sinkplan/lp.hpp"

namespace sinkplan {

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(SolveStatus status);
std::optional<SolveStatus> parse_solve_status(std::string_view text);

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  std::vector<double> primal;         // per column
  std::vector<double> duals;          // per row, d objective / d rhs
  std::vector<double> reduced_costs;  // per column, c - A^T y
  std::size_t iterations = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SolveOptions {
  double feasibility_tolerance = 1e-9;  // on the scaled problem
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  std::size_t max_iterations = 0;  // 0 picks a limit from the problem size
  std::size_t refactor_interval = 64;
  bool scale = true;
};

/// Bounded-variable revised dual simplex with a primal cleanup pass. Throws
/// Error on malformed input (including NaN or infinite data); every other
/// outcome is a status.
Solution solve(const LinearProgram& lp, const SolveOptions& options = {});

}  // namespace sinkplan
