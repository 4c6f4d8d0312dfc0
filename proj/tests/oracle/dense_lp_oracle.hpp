#pragma once

// Test-only reference LP solver. Converts the problem to equality standard form
// with non-negative variables, then runs a dense two-phase tableau simplex in
// long double. Slow and simple on purpose; it shares no code with the
// production solver.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "sinkplan/lp.hpp"

namespace oracle {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  long double objective = 0;
  std::vector<double> x;  // original columns
};

namespace detail {

using Real = long double;

struct Substitution {
  // original x_j = offset + sign * z[plus] - (has_minus ? z[minus] : 0)
  Real offset = 0;
  Real sign = 1;
  long plus = -1;
  long minus = -1;
};

}  // namespace detail

inline Result solve(const sinkplan::LinearProgram& lp) {
  using detail::Real;
  const Real eps = 1e-11L;
  const Real pivot_tol = 1e-9L;
  const std::size_t n = lp.n_cols();

  std::vector<detail::Substitution> sub(n);
  std::size_t nz = 0;
  struct ExtraRow {
    long var;
    Real bound;
  };
  std::vector<ExtraRow> box_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.col_lower[j], up = lp.col_upper[j];
    auto& s = sub[j];
    if (std::isfinite(lo)) {
      s.offset = lo;
      s.plus = static_cast<long>(nz++);
      if (std::isfinite(up)) box_rows.push_back({s.plus, static_cast<Real>(up) - lo});
    } else if (std::isfinite(up)) {
      s.offset = up;
      s.sign = -1;
      s.plus = static_cast<long>(nz++);
    } else {
      s.plus = static_cast<long>(nz++);
      s.minus = static_cast<long>(nz++);
    }
  }

  // Dense rows over z plus one slack per inequality.
  struct DenseRow {
    std::vector<Real> a;
    Real b;
    int kind;  // -1 <=, 0 =, +1 >=
  };
  std::vector<DenseRow> rows;
  rows.reserve(lp.n_rows() + box_rows.size());
  for (std::size_t i = 0; i < lp.n_rows(); ++i) {
    int kind = lp.senses[i] == sinkplan::RowSense::le ? -1 : lp.senses[i] == sinkplan::RowSense::eq ? 0 : 1;
    rows.push_back({std::vector<Real>(nz, 0), static_cast<Real>(lp.rhs[i]), kind});
  }
  for (const auto& t : lp.matrix) {
    auto& r = rows[t.row];
    const auto& s = sub[t.col];
    r.b -= static_cast<Real>(t.value) * s.offset;
    r.a[s.plus] += s.sign * static_cast<Real>(t.value);
    if (s.minus >= 0) r.a[s.minus] -= static_cast<Real>(t.value);
  }
  for (const auto& br : box_rows) {
    DenseRow r{std::vector<Real>(nz, 0), br.bound, -1};
    r.a[br.var] = 1;
    rows.push_back(std::move(r));
  }

  std::vector<Real> cost(nz, 0);
  Real cost_offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = sub[j];
    const Real c = lp.objective[j];
    cost_offset += c * s.offset;
    cost[s.plus] += s.sign * c;
    if (s.minus >= 0) cost[s.minus] -= c;
  }

  const std::size_t m = rows.size();
  std::size_t n_slack = 0;
  for (const auto& r : rows)
    if (r.kind != 0) ++n_slack;
  const std::size_t n_struct = nz + n_slack;
  const std::size_t n_total = n_struct + m;  // artificials last
  const std::size_t width = n_total + 1;     // rhs column

  std::vector<Real> tab((m + 1) * width, 0);
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return tab[i * width + j]; };
  std::vector<std::size_t> basis(m);
  std::size_t slack = nz;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = rows[i];
    for (std::size_t j = 0; j < nz; ++j) at(i, j) = r.a[j];
    if (r.kind != 0) at(i, slack++) = r.kind < 0 ? 1 : -1;
    at(i, n_total) = r.b;
    if (r.b < 0)
      for (std::size_t j = 0; j <= n_total; ++j) at(i, j) = -at(i, j);
    at(i, n_struct + i) = 1;
    basis[i] = n_struct + i;
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const Real p = at(pr, pc);
    for (std::size_t j = 0; j <= n_total; ++j) at(pr, j) /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const Real f = at(i, pc);
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n_total; ++j) at(i, j) -= f * at(pr, j);
    }
    basis[pr] = pc;
  };

  // Objective row holds reduced costs; rhs cell holds -objective.
  // Dantzig pricing; after a run of degenerate pivots, Bland's rule until
  // the objective moves again, which rules out cycling.
  auto run = [&](std::size_t allowed_cols) -> bool {
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate > 50;
      std::size_t enter = allowed_cols;
      Real most = -eps;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (at(m, j) < most) {
          enter = j;
          if (bland) break;
          most = at(m, j);
        }
      if (enter == allowed_cols) return true;
      std::size_t leave = m;
      Real best = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const Real a = at(i, enter);
        // A basic artificial is fixed at zero, so it blocks in either direction.
        const bool fixed = basis[i] >= n_struct && allowed_cols == n_struct;
        if (a > pivot_tol || (fixed && a < -pivot_tol)) {
          const Real ratio = fixed ? Real(0) : std::max(Real(0), at(i, n_total)) / a;
          const bool tie = leave != m && std::fabs(ratio - best) <= eps;
          const bool better_tie =
              tie && (bland ? basis[i] < basis[leave] : std::fabs(a) > std::fabs(at(leave, enter)));
          if (leave == m || ratio < best - eps || better_tie) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == m) return false;
      degenerate = best <= eps ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  };

  // Phase 1: minimize the sum of artificials.
  for (std::size_t j = 0; j <= n_total; ++j) at(m, j) = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n_total; ++j)
      if (j < n_struct || j == n_total) at(m, j) -= at(i, j);
  run(n_total);
  Result res;
  const Real infeas = -at(m, n_total);
  Real scale = 1;
  for (const auto& r : rows) scale = std::max(scale, std::fabs(r.b));
  if (infeas > 1e-9L * scale) {
    res.status = Status::infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n_struct) continue;
    std::size_t best = n_struct;
    for (std::size_t j = 0; j < n_struct; ++j)
      if (std::fabs(at(i, j)) > 1e-9L && (best == n_struct || std::fabs(at(i, j)) > std::fabs(at(i, best)))) best = j;
    if (best < n_struct) pivot(i, best);
  }

  // Phase 2.
  for (std::size_t j = 0; j <= n_total; ++j) at(m, j) = 0;
  for (std::size_t j = 0; j < nz; ++j) at(m, j) = cost[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = basis[i];
    const Real cb = b < nz ? cost[b] : 0;
    if (cb == 0) continue;
    for (std::size_t j = 0; j <= n_total; ++j) at(m, j) -= cb * at(i, j);
  }
  // Artificials stuck in the basis sit at zero; keep them out of the entering set.
  if (!run(n_struct)) {
    res.status = Status::unbounded;
    return res;
  }

  std::vector<Real> z(n_total, 0);
  for (std::size_t i = 0; i < m; ++i) z[basis[i]] = at(i, n_total);
  res.status = Status::optimal;
  res.x.resize(n);
  Real obj = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = sub[j];
    Real v = s.offset + s.sign * z[s.plus];
    if (s.minus >= 0) v -= z[s.minus];
    res.x[j] = static_cast<double>(v);
    obj += static_cast<Real>(lp.objective[j]) * v;
  }
  (void)cost_offset;
  res.objective = obj;
  return res;
}

}  // namespace oracle
