#include "sinkplan/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "basis_factor.hpp"
#include "sinkplan/error.hpp"

namespace sinkplan {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

std::optional<SolveStatus> parse_solve_status(std::string_view text) {
  for (auto s : {SolveStatus::optimal, SolveStatus::infeasible, SolveStatus::unbounded, SolveStatus::iteration_limit})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

namespace {

using detail::BasisFactor;
using detail::SparseColumns;

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

enum class Place : std::uint8_t { basic, lower, upper, zero };

double round_pow2(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

// Geometric-mean row and column scale factors, rounded to powers of two so
// that scaling and unscaling are exact.
void compute_scaling(const CscMatrix& a, std::vector<double>& row, std::vector<double>& col) {
  row.assign(a.rows, 1.0);
  col.assign(a.cols, 1.0);
  std::vector<double> lo(a.rows), hi(a.rows);
  for (int pass = 0; pass < 6; ++pass) {
    std::fill(lo.begin(), lo.end(), kInf);
    std::fill(hi.begin(), hi.end(), 0.0);
    for (std::size_t j = 0; j < a.cols; ++j)
      for (std::size_t p = a.start[j]; p < a.start[j + 1]; ++p) {
        const double v = std::fabs(a.value[p]) * col[j];
        lo[a.index[p]] = std::min(lo[a.index[p]], v);
        hi[a.index[p]] = std::max(hi[a.index[p]], v);
      }
    for (std::size_t i = 0; i < a.rows; ++i)
      if (hi[i] > 0.0) row[i] = 1.0 / std::sqrt(lo[i] * hi[i]);
    for (std::size_t j = 0; j < a.cols; ++j) {
      double cl = kInf, ch = 0.0;
      for (std::size_t p = a.start[j]; p < a.start[j + 1]; ++p) {
        const double v = std::fabs(a.value[p]) * row[a.index[p]];
        cl = std::min(cl, v);
        ch = std::max(ch, v);
      }
      if (ch > 0.0) col[j] = 1.0 / std::sqrt(cl * ch);
    }
  }
  for (auto& r : row) r = round_pow2(r);
  for (auto& c : col) c = round_pow2(c);
}

// Works on the scaled problem  min c'x  s.t.  A x - s = 0,  lo <= (x, s) <= up.
// Variables 0..n-1 are structural, n..n+m-1 the row logicals (column -e_i).
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolveOptions& opt) : opt_(opt) {
    a_ = CscMatrix::from(lp);
    m_ = lp.n_rows();
    n_ = lp.n_cols();
    const std::size_t total = n_ + m_;
    if (opt.scale) {
      compute_scaling(a_, row_scale_, col_scale_);
    } else {
      row_scale_.assign(m_, 1.0);
      col_scale_.assign(n_, 1.0);
    }
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t p = a_.start[j]; p < a_.start[j + 1]; ++p) a_.value[p] *= row_scale_[a_.index[p]] * col_scale_[j];
    build_rows();

    cost_.assign(total, 0.0);
    lo_.assign(total, 0.0);
    up_.assign(total, 0.0);
    double biggest = 0.0;
    for (std::size_t j = 0; j < n_; ++j) biggest = std::max(biggest, std::fabs(lp.objective[j] * col_scale_[j]));
    cost_scale_ = opt.scale && biggest > 0.0 ? round_pow2(1.0 / biggest) : 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      cost_[j] = lp.objective[j] * col_scale_[j] * cost_scale_;
      lo_[j] = lp.col_lower[j] / col_scale_[j];
      up_[j] = lp.col_upper[j] / col_scale_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const double b = lp.rhs[i] * row_scale_[i];
      lo_[n_ + i] = lp.senses[i] == RowSense::le ? -kInf : b;
      up_[n_ + i] = lp.senses[i] == RowSense::ge ? kInf : b;
    }
    place_.assign(total, Place::lower);
    x_.assign(total, 0.0);
    head_.resize(m_);
    for (std::size_t j = 0; j < n_; ++j) set_nonbasic_near(j, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      place_[n_ + i] = Place::basic;
    }
    y_.assign(m_, 0.0);
    alpha_.assign(m_, 0.0);
    d_.assign(total, 0.0);
    weight_.assign(m_, 1.0);
    limit_ = opt.max_iterations ? opt.max_iterations : 50 * (m_ + n_) + 10000;
  }

  Solution run(const LinearProgram& lp) {
    refactor();
    SolveStatus status = SolveStatus::iteration_limit;
    bool try_primal = true;
    if (make_dual_feasible(false)) {
      status = run_dual();
      // A verified dual optimum needs no primal pass; anything else is
      // settled (or confirmed) by the primal method from the current basis.
      try_primal = status != SolveStatus::optimal && status != SolveStatus::iteration_limit;
      if (shifted_) {
        cost_ = original_cost_;
        try_primal = status != SolveStatus::iteration_limit;
      }
    }
    if (try_primal) status = run_primal();
    return finish(lp, status);
  }

 private:
  struct Step {
    enum Kind { none, flip, pivot } kind = none;
    double theta = 0.0;
    std::size_t row = kNone;  // leaving basis position
    double bound = 0.0;       // value the leaving variable lands on
  };

  const SolveOptions& opt_;
  CscMatrix a_;
  // Row-wise copy of the scaled matrix for pivot-row computation.
  std::vector<std::size_t> row_start_, row_col_;
  std::vector<double> row_val_;
  std::size_t m_ = 0, n_ = 0;
  std::vector<double> row_scale_, col_scale_;
  double cost_scale_ = 1.0;
  std::vector<double> cost_, lo_, up_, x_;
  std::vector<Place> place_;
  std::vector<std::size_t> head_;
  std::vector<double> phase_cost_;
  std::vector<double> y_, alpha_, d_, weight_;
  BasisFactor factor_;
  std::size_t iterations_ = 0;
  std::size_t limit_ = 0;
  bool phase1_ = false;
  bool shifted_ = false;
  std::vector<double> original_cost_;
  static constexpr double kShiftLimit = 1e-6;

  void build_rows() {
    row_start_.assign(m_ + 1, 0);
    for (std::size_t p = 0; p < a_.index.size(); ++p) ++row_start_[a_.index[p] + 1];
    for (std::size_t i = 0; i < m_; ++i) row_start_[i + 1] += row_start_[i];
    row_col_.resize(a_.index.size());
    row_val_.resize(a_.index.size());
    std::vector<std::size_t> next(row_start_.begin(), row_start_.end() - 1);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t p = a_.start[j]; p < a_.start[j + 1]; ++p) {
        const std::size_t k = next[a_.index[p]]++;
        row_col_[k] = j;
        row_val_[k] = a_.value[p];
      }
  }

  bool boxed(std::size_t j) const { return std::isfinite(lo_[j]) && std::isfinite(up_[j]); }

  void set_nonbasic_near(std::size_t j, double value) {
    const bool has_lo = std::isfinite(lo_[j]), has_up = std::isfinite(up_[j]);
    if (has_lo && (!has_up || std::fabs(value - lo_[j]) <= std::fabs(up_[j] - value))) {
      place_[j] = Place::lower;
      x_[j] = lo_[j];
    } else if (has_up) {
      place_[j] = Place::upper;
      x_[j] = up_[j];
    } else {
      place_[j] = Place::zero;
      x_[j] = 0.0;
    }
  }

  // Dense copy of column j of [A -I] into v.
  void column(std::size_t j, std::vector<double>& v) const {
    std::fill(v.begin(), v.end(), 0.0);
    add_column(j, 1.0, v);
  }

  void add_column(std::size_t j, double scale, std::vector<double>& v) const {
    if (j < n_) {
      for (std::size_t p = a_.start[j]; p < a_.start[j + 1]; ++p) v[a_.index[p]] += scale * a_.value[p];
    } else {
      v[j - n_] -= scale;
    }
  }

  double dot_column(std::size_t j, const std::vector<double>& y) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (std::size_t p = a_.start[j]; p < a_.start[j + 1]; ++p) s += a_.value[p] * y[a_.index[p]];
    return s;
  }

  void refactor() {
    SparseColumns b;
    b.start.reserve(m_ + 1);
    b.start.push_back(0);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t j = head_[k];
      if (j < n_) {
        for (std::size_t p = a_.start[j]; p < a_.start[j + 1]; ++p) {
          b.index.push_back(a_.index[p]);
          b.value.push_back(a_.value[p]);
        }
      } else {
        b.index.push_back(j - n_);
        b.value.push_back(-1.0);
      }
      b.start.push_back(b.index.size());
    }
    for (const auto& rep : factor_.factor(m_, b)) {
      const std::size_t out = head_[rep.position];
      set_nonbasic_near(out, x_[out]);
      const std::size_t in = n_ + rep.row;
      head_[rep.position] = in;
      place_[in] = Place::basic;
      weight_[rep.position] = 1.0;
    }
    compute_primal();
  }

  void compute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (place_[j] == Place::basic || x_[j] == 0.0) continue;
      add_column(j, -x_[j], rhs);
    }
    factor_.ftran(rhs);
    for (std::size_t k = 0; k < m_; ++k) x_[head_[k]] = rhs[k];
  }

  // Reduced costs of every variable under the true objective.
  void compute_duals() {
    for (std::size_t k = 0; k < m_; ++k) y_[k] = cost_[head_[k]];
    factor_.btran(y_);
    for (std::size_t j = 0; j < n_ + m_; ++j)
      d_[j] = place_[j] == Place::basic ? 0.0 : cost_[j] - dot_column(j, y_);
  }

  // Puts every nonbasic variable on the bound its reduced cost asks for.
  // Returns false if some reduced cost points at an infinite bound.
  // Small violations on unbounded sides are absorbed by shifting the cost
  // (undone before the final primal pass) when allow_shift is set.
  bool make_dual_feasible(bool allow_shift = true) {
    compute_duals();
    const double tol = opt_.optimality_tolerance;
    bool moved = false;
    auto absorb = [&](std::size_t j) {
      if (!allow_shift || std::fabs(d_[j]) > kShiftLimit) return false;
      if (!shifted_) original_cost_ = cost_;
      shifted_ = true;
      cost_[j] -= d_[j];
      d_[j] = 0.0;
      return true;
    };
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (place_[j] == Place::basic || lo_[j] == up_[j]) continue;
      if (d_[j] > tol && !std::isfinite(lo_[j])) {
        if (!absorb(j)) return false;
      } else if (d_[j] < -tol && !std::isfinite(up_[j])) {
        if (!absorb(j)) return false;
      } else if (d_[j] > tol) {
        if (place_[j] != Place::lower) {
          place_[j] = Place::lower;
          x_[j] = lo_[j];
          moved = true;
        }
      } else if (d_[j] < -tol) {
        if (place_[j] != Place::upper) {
          place_[j] = Place::upper;
          x_[j] = up_[j];
          moved = true;
        }
      }
    }
    if (moved) compute_primal();
    return true;
  }

  // ---- dual simplex -----------------------------------------------------

  // Returns optimal, iteration_limit, infeasible (dual ray found) or
  // unbounded, which here only means the method gave up and the primal
  // method should take over.
  SolveStatus run_dual() {
    const double ftol = opt_.feasibility_tolerance;
    const double piv = opt_.pivot_tolerance;
    std::vector<double> rho(m_), tau(m_), flip_delta(m_);
    std::vector<double> row_alpha(n_ + m_, 0.0);
    std::vector<std::size_t> touched;
    std::vector<char> is_touched(n_ + m_, 0);
    struct Candidate {
      std::size_t j;
      double ratio;
      double abs_alpha;
    };
    std::vector<Candidate> cands;
    std::vector<std::size_t> flips;
    bool fresh = true;

    while (iterations_ < limit_) {
      if (factor_.updates() >= opt_.refactor_interval) {
        refactor();
        if (!make_dual_feasible()) return SolveStatus::unbounded;
        fresh = true;
      }
      // Leaving row: largest squared infeasibility over steepest-edge weight.
      std::size_t r = kNone;
      double best = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        const std::size_t j = head_[k];
        double infeas = 0.0;
        if (x_[j] < lo_[j] - ftol)
          infeas = lo_[j] - x_[j];
        else if (x_[j] > up_[j] + ftol)
          infeas = x_[j] - up_[j];
        else
          continue;
        const double score = infeas * infeas / weight_[k];
        if (score > best) {
          best = score;
          r = k;
        }
      }
      if (r == kNone) {
        if (!fresh) {
          refactor();
          if (!make_dual_feasible()) return SolveStatus::unbounded;
          fresh = true;
          continue;
        }
        return SolveStatus::optimal;
      }
      const std::size_t out = head_[r];
      const bool to_lower = x_[out] < lo_[out];
      const double s = to_lower ? 1.0 : -1.0;
      const double target = to_lower ? lo_[out] : up_[out];

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      factor_.btran(rho);

      // Pivot row over nonbasic columns: row-wise when rho is sparse,
      // column-wise otherwise. Either way `touched` ends up ascending.
      for (std::size_t j : touched) {
        row_alpha[j] = 0.0;
        is_touched[j] = 0;
      }
      touched.clear();
      std::size_t rho_nnz = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (rho[i] != 0.0) ++rho_nnz;
      if (rho_nnz * 10 < m_) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double v = rho[i];
          if (v == 0.0) continue;
          for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            const std::size_t j = row_col_[p];
            if (!is_touched[j]) {
              is_touched[j] = 1;
              touched.push_back(j);
            }
            row_alpha[j] += v * row_val_[p];
          }
          const std::size_t lj = n_ + i;
          is_touched[lj] = 1;
          touched.push_back(lj);
          row_alpha[lj] -= v;
        }
        std::sort(touched.begin(), touched.end());
      } else {
        for (std::size_t j = 0; j < n_ + m_; ++j) {
          if (place_[j] == Place::basic) continue;
          const double v = dot_column(j, rho);
          if (v == 0.0) continue;
          row_alpha[j] = v;
          is_touched[j] = 1;
          touched.push_back(j);
        }
      }

      // Dual ratio test candidates: d_j + t * s * alpha_j must keep its sign.
      // `slack` is d_j measured in the feasible direction; it can be slightly
      // negative after Harris steps, and free columns are held at zero.
      cands.clear();
      for (std::size_t j : touched) {
        const Place pl = place_[j];
        if (pl == Place::basic || lo_[j] == up_[j]) continue;
        const double a = s * row_alpha[j];
        const bool eligible = (pl == Place::lower && a < -piv) || (pl == Place::upper && a > piv) ||
                              (pl == Place::zero && std::fabs(a) > piv);
        if (!eligible) continue;
        const double slack = pl == Place::lower ? d_[j] : pl == Place::upper ? -d_[j] : 0.0;
        cands.push_back({j, slack / std::fabs(a), std::fabs(a)});
      }
      if (cands.empty()) {
        if (!fresh) {
          refactor();
          if (!make_dual_feasible()) return SolveStatus::unbounded;
          fresh = true;
          continue;
        }
        return SolveStatus::infeasible;
      }
      // Harris pass with bound flipping: repeatedly take the group of
      // breakpoints within the relaxed minimum ratio; flip the whole group
      // while the leaving row's infeasibility still pays for it.
      const double dtol = opt_.optimality_tolerance;
      double slope = std::fabs(x_[out] - target);
      std::size_t chosen = kNone;
      flips.clear();
      std::size_t live = cands.size();
      for (;;) {
        double bound = kInf;
        for (std::size_t k = 0; k < live; ++k)
          bound = std::min(bound, cands[k].ratio + dtol / cands[k].abs_alpha);
        double drop = 0.0;
        std::size_t in_group = 0;
        for (std::size_t k = 0; k < live; ++k) {
          if (cands[k].ratio > bound) continue;
          ++in_group;
          const std::size_t j = cands[k].j;
          drop += boxed(j) ? cands[k].abs_alpha * (up_[j] - lo_[j]) : kInf;
        }
        if (slope - drop > 0.0 && in_group < live) {
          slope -= drop;
          std::size_t keep = 0;
          for (std::size_t k = 0; k < live; ++k) {
            if (cands[k].ratio <= bound)
              flips.push_back(cands[k].j);
            else
              cands[keep++] = cands[k];
          }
          live = keep;
          continue;
        }
        double big = -1.0;
        for (std::size_t k = 0; k < live; ++k) {
          if (cands[k].ratio > bound) continue;
          if (cands[k].abs_alpha > big || (cands[k].abs_alpha == big && cands[k].j < cands[chosen].j)) {
            big = cands[k].abs_alpha;
            chosen = k;
          }
        }
        break;
      }
      const std::size_t q = cands[chosen].j;
      const double t = std::max(cands[chosen].ratio, 0.0);
      if (cands[chosen].ratio <= 0.0 && d_[q] != 0.0) {
        // Entering with a slightly wrong-signed reduced cost: shift its cost
        // so the step is exactly degenerate.
        if (!shifted_) original_cost_ = cost_;
        shifted_ = true;
        cost_[q] -= d_[q];
        d_[q] = 0.0;
      }

      column(q, alpha_);
      factor_.ftran(alpha_);
      const double pivot = alpha_[r];
      if (std::fabs(pivot) <= piv || std::fabs(pivot - row_alpha[q]) > 1e-7 * (1.0 + std::fabs(pivot))) {
        if (!fresh) {
          refactor();
          if (!make_dual_feasible()) return SolveStatus::unbounded;
          fresh = true;
          continue;
        }
        if (std::fabs(pivot) <= piv) return SolveStatus::unbounded;
      }
      ++iterations_;

      // Dual update.
      for (std::size_t j : touched) {
        if (place_[j] == Place::basic) continue;
        d_[j] += t * s * row_alpha[j];
      }
      d_[q] = 0.0;
      d_[out] = s * t;

      // Bound flips pass through the primal basic values.
      if (!flips.empty()) {
        std::fill(flip_delta.begin(), flip_delta.end(), 0.0);
        for (std::size_t j : flips) {
          double delta;
          if (place_[j] == Place::lower) {
            place_[j] = Place::upper;
            delta = up_[j] - lo_[j];
            x_[j] = up_[j];
          } else {
            place_[j] = Place::lower;
            delta = lo_[j] - up_[j];
            x_[j] = lo_[j];
          }
          add_column(j, delta, flip_delta);
        }
        factor_.ftran(flip_delta);
        for (std::size_t k = 0; k < m_; ++k)
          if (flip_delta[k] != 0.0) x_[head_[k]] -= flip_delta[k];
      }

      // Dual steepest-edge weights, using tau = B^{-1} rho.
      double rho_norm = 0.0;
      for (std::size_t i = 0; i < m_; ++i) rho_norm += rho[i] * rho[i];
      tau = rho;
      factor_.ftran(tau);

      // Primal step.
      const double theta = (x_[out] - target) / pivot;
      for (std::size_t k = 0; k < m_; ++k)
        if (alpha_[k] != 0.0) x_[head_[k]] -= theta * alpha_[k];
      x_[q] += theta;
      x_[out] = target;

      for (std::size_t k = 0; k < m_; ++k) {
        if (k == r || alpha_[k] == 0.0) continue;
        const double ratio = alpha_[k] / pivot;
        weight_[k] = std::max(weight_[k] - 2.0 * ratio * tau[k] + ratio * ratio * rho_norm, 1e-8);
      }
      weight_[r] = std::max(rho_norm / (pivot * pivot), 1e-8);

      place_[out] = to_lower ? Place::lower : Place::upper;
      if (lo_[out] == up_[out]) place_[out] = Place::lower;
      place_[q] = Place::basic;
      head_[r] = q;
      factor_.update(r, alpha_);
      fresh = false;
    }
    return SolveStatus::iteration_limit;
  }

  // ---- primal simplex ---------------------------------------------------

  SolveStatus run_primal() {
    refactor();
    bool fresh = true;
    std::size_t degenerate_run = 0;
    bool bland = false;
    while (iterations_ < limit_) {
      if (factor_.updates() >= opt_.refactor_interval) {
        refactor();
        fresh = true;
      }
      const bool phase1 = set_phase_costs();
      price();
      const std::size_t q = choose_entering(bland);
      if (q == kNone) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return phase1 ? SolveStatus::infeasible : SolveStatus::optimal;
      }
      const double dir = d_[q] < 0.0 ? 1.0 : -1.0;
      column(q, alpha_);
      factor_.ftran(alpha_);
      const auto step = ratio_test(q, dir, phase1, bland);
      if (step.kind == Step::none) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return phase1 ? SolveStatus::infeasible : SolveStatus::unbounded;
      }
      ++iterations_;
      apply(q, dir, step);
      fresh = false;
      if (step.theta <= 1e-12) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
    return SolveStatus::iteration_limit;
  }

  // Costs of the basic variables for the current phase; true in phase 1.
  bool set_phase_costs() {
    const double tol = opt_.feasibility_tolerance;
    phase_cost_.assign(m_, 0.0);
    bool infeasible = false;
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t j = head_[k];
      if (x_[j] < lo_[j] - tol) {
        phase_cost_[k] = -1.0;
        infeasible = true;
      } else if (x_[j] > up_[j] + tol) {
        phase_cost_[k] = 1.0;
        infeasible = true;
      }
    }
    if (!infeasible)
      for (std::size_t k = 0; k < m_; ++k) phase_cost_[k] = cost_[head_[k]];
    phase1_ = infeasible;
    return infeasible;
  }

  void price() {
    y_ = phase_cost_;
    factor_.btran(y_);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (place_[j] == Place::basic) {
        d_[j] = 0.0;
        continue;
      }
      const double c = phase1_ ? 0.0 : cost_[j];
      d_[j] = c - dot_column(j, y_);
    }
  }

  std::size_t choose_entering(bool bland) const {
    const double tol = opt_.optimality_tolerance;
    std::size_t best = kNone;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      const Place pl = place_[j];
      if (pl == Place::basic || lo_[j] == up_[j]) continue;
      const double d = d_[j];
      const bool eligible = (pl == Place::lower && d < -tol) || (pl == Place::upper && d > tol) ||
                            (pl == Place::zero && std::fabs(d) > tol);
      if (!eligible) continue;
      if (bland) return j;
      if (std::fabs(d) > best_score) {
        best_score = std::fabs(d);
        best = j;
      }
    }
    return best;
  }

  Step ratio_test(std::size_t q, double dir, bool phase1, bool bland) const {
    const double tol = opt_.feasibility_tolerance;
    const double piv = opt_.pivot_tolerance;
    const double range = up_[q] - lo_[q];
    // Pass 1: largest step with every basic variable kept within tolerance.
    double theta_max = kInf;
    for (std::size_t k = 0; k < m_; ++k) {
      const double delta = -dir * alpha_[k];
      if (std::fabs(delta) <= piv) continue;
      const std::size_t j = head_[k];
      const double v = x_[j];
      double ratio = kInf;
      if (phase1 && v < lo_[j] - tol) {
        if (delta > 0) ratio = (lo_[j] - v + tol) / delta;
      } else if (phase1 && v > up_[j] + tol) {
        if (delta < 0) ratio = (v - up_[j] + tol) / -delta;
      } else if (delta < 0) {
        if (std::isfinite(lo_[j])) ratio = (v - lo_[j] + tol) / -delta;
      } else if (std::isfinite(up_[j])) {
        ratio = (up_[j] + tol - v) / delta;
      }
      theta_max = std::min(theta_max, ratio);
    }
    Step step;
    if (range <= theta_max && std::isfinite(range)) {
      step.kind = Step::flip;
      step.theta = range;
      return step;
    }
    if (!std::isfinite(theta_max)) return step;
    // Pass 2: among breakpoints within theta_max take the largest pivot.
    double best = 0.0;
    for (std::size_t k = 0; k < m_; ++k) {
      const double delta = -dir * alpha_[k];
      if (std::fabs(delta) <= piv) continue;
      const std::size_t j = head_[k];
      const double v = x_[j];
      double ratio = kInf, bound = 0.0;
      if (phase1 && v < lo_[j] - tol) {
        if (delta > 0) ratio = (lo_[j] - v) / delta, bound = lo_[j];
      } else if (phase1 && v > up_[j] + tol) {
        if (delta < 0) ratio = (v - up_[j]) / -delta, bound = up_[j];
      } else if (delta < 0) {
        if (std::isfinite(lo_[j])) ratio = (v - lo_[j]) / -delta, bound = lo_[j];
      } else if (std::isfinite(up_[j])) {
        ratio = (up_[j] - v) / delta, bound = up_[j];
      }
      if (ratio > theta_max) continue;
      const double score = bland ? -static_cast<double>(j) : std::fabs(delta);
      if (step.row == kNone || score > best) {
        best = score;
        step.row = k;
        step.bound = bound;
        step.theta = std::max(ratio, 0.0);
      }
    }
    if (step.row != kNone) step.kind = Step::pivot;
    return step;
  }

  void apply(std::size_t q, double dir, const Step& step) {
    const double theta = step.theta;
    if (theta != 0.0)
      for (std::size_t k = 0; k < m_; ++k)
        if (alpha_[k] != 0.0) x_[head_[k]] -= dir * theta * alpha_[k];
    if (step.kind == Step::flip) {
      if (place_[q] == Place::lower) {
        place_[q] = Place::upper;
        x_[q] = up_[q];
      } else {
        place_[q] = Place::lower;
        x_[q] = lo_[q];
      }
      return;
    }
    const std::size_t out = head_[step.row];
    x_[q] += dir * theta;
    x_[out] = step.bound;
    place_[out] = step.bound == lo_[out] ? Place::lower : Place::upper;
    place_[q] = Place::basic;
    head_[step.row] = q;
    factor_.update(step.row, alpha_);
  }

  Solution finish(const LinearProgram& lp, SolveStatus status) {
    Solution sol;
    sol.status = status;
    sol.iterations = iterations_;
    // Duals from the true costs of the final basis.
    std::vector<double> y(m_);
    for (std::size_t k = 0; k < m_; ++k) y[k] = cost_[head_[k]];
    factor_.btran(y);
    sol.primal.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j];
    sol.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = y[i] * row_scale_[i] / cost_scale_;
    sol.reduced_costs = lp.objective;
    for (const auto& t : lp.matrix) sol.reduced_costs[t.col] -= t.value * sol.duals[t.row];
    double obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) obj += lp.objective[j] * sol.primal[j];
    sol.objective = obj;
    return sol;
  }
};

}  // namespace

Solution solve(const LinearProgram& lp, const SolveOptions& options) {
  lp.check();
  Simplex simplex(lp, options);
  return simplex.run(lp);
}

}  // namespace sinkplan
