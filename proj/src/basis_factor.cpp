#include "basis_factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sinkplan::detail {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

std::vector<BasisFactor::Replacement> BasisFactor::factor(std::size_t m, const SparseColumns& basis) {
  m_ = m;
  pivot_row_.clear();
  position_.clear();
  l_start_.assign(1, 0);
  l_index_.clear();
  l_value_.clear();
  u_start_.assign(1, 0);
  u_index_.clear();
  u_value_.clear();
  u_diag_.clear();
  etas_.clear();
  eta_index_.clear();
  eta_value_.clear();
  work_.assign(m, 0.0);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto nnz = [&](std::size_t k) { return basis.start[k + 1] - basis.start[k]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nnz(a) < nnz(b); });

  std::vector<std::size_t> row_count(m, 0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t p = basis.start[k]; p < basis.start[k + 1]; ++p) ++row_count[basis.index[p]];

  std::vector<std::size_t> step_of_row(m, kNone);
  std::vector<double> x(m, 0.0);
  std::vector<std::size_t> mark(m, 0);
  std::size_t stamp = 0;
  std::vector<std::size_t> topo(m);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  std::vector<std::size_t> dependent;

  for (std::size_t k : order) {
    ++stamp;
    // Reach of the column's pattern in the graph of L, in topological order.
    std::size_t top = m;
    for (std::size_t p = basis.start[k]; p < basis.start[k + 1]; ++p) {
      const std::size_t root = basis.index[p];
      if (mark[root] == stamp) continue;
      mark[root] = stamp;
      stack.emplace_back(root, 0);
      while (!stack.empty()) {
        auto& [node, child] = stack.back();
        const std::size_t s = step_of_row[node];
        bool descended = false;
        if (s != kNone) {
          for (std::size_t q = l_start_[s] + child; q < l_start_[s + 1]; ++q) {
            ++child;
            const std::size_t next = l_index_[q];
            if (mark[next] != stamp) {
              mark[next] = stamp;
              stack.emplace_back(next, 0);
              descended = true;
              break;
            }
          }
        }
        if (!descended) {
          topo[--top] = node;
          stack.pop_back();
        }
      }
    }
    for (std::size_t p = basis.start[k]; p < basis.start[k + 1]; ++p) x[basis.index[p]] += basis.value[p];
    for (std::size_t t = top; t < m; ++t) {
      const std::size_t r = topo[t];
      const std::size_t s = step_of_row[r];
      if (s == kNone) continue;
      const double v = x[r];
      if (v == 0.0) continue;
      for (std::size_t q = l_start_[s]; q < l_start_[s + 1]; ++q) x[l_index_[q]] -= l_value_[q] * v;
    }

    double biggest = 0.0;
    for (std::size_t t = top; t < m; ++t)
      if (step_of_row[topo[t]] == kNone) biggest = std::max(biggest, std::fabs(x[topo[t]]));
    if (biggest < singular_tolerance) {
      for (std::size_t t = top; t < m; ++t) x[topo[t]] = 0.0;
      dependent.push_back(k);
      continue;
    }
    std::size_t pivot = kNone;
    for (std::size_t t = top; t < m; ++t) {
      const std::size_t r = topo[t];
      if (step_of_row[r] != kNone || std::fabs(x[r]) < threshold * biggest) continue;
      if (pivot == kNone || row_count[r] < row_count[pivot] || (row_count[r] == row_count[pivot] && r < pivot))
        pivot = r;
    }
    const double diag = x[pivot];
    const std::size_t step = pivot_row_.size();
    // Keep U and L entries in ascending index order so the solves are deterministic
    // regardless of traversal order.
    std::vector<std::pair<std::size_t, double>> ucol, lcol;
    for (std::size_t t = top; t < m; ++t) {
      const std::size_t r = topo[t];
      const double v = x[r];
      x[r] = 0.0;
      if (v == 0.0 || r == pivot) continue;
      if (step_of_row[r] != kNone)
        ucol.emplace_back(step_of_row[r], v);
      else
        lcol.emplace_back(r, v / diag);
    }
    std::sort(ucol.begin(), ucol.end());
    std::sort(lcol.begin(), lcol.end());
    for (const auto& [s, v] : ucol) {
      u_index_.push_back(s);
      u_value_.push_back(v);
    }
    for (const auto& [r, v] : lcol) {
      l_index_.push_back(r);
      l_value_.push_back(v);
    }
    u_start_.push_back(u_index_.size());
    l_start_.push_back(l_index_.size());
    u_diag_.push_back(diag);
    pivot_row_.push_back(pivot);
    position_.push_back(k);
    step_of_row[pivot] = step;
    for (std::size_t p = basis.start[k]; p < basis.start[k + 1]; ++p) --row_count[basis.index[p]];
  }

  std::vector<Replacement> replaced;
  if (!dependent.empty()) {
    std::sort(dependent.begin(), dependent.end());
    std::size_t next_row = 0;
    for (std::size_t k : dependent) {
      while (step_of_row[next_row] != kNone) ++next_row;
      const std::size_t step = pivot_row_.size();
      u_start_.push_back(u_index_.size());
      l_start_.push_back(l_index_.size());
      u_diag_.push_back(-1.0);
      pivot_row_.push_back(next_row);
      position_.push_back(k);
      step_of_row[next_row] = step;
      replaced.push_back({k, next_row});
    }
  }
  return replaced;
}

void BasisFactor::ftran(std::vector<double>& x) const {
  const std::size_t m = m_;
  for (std::size_t j = 0; j < m; ++j) {
    const double v = x[pivot_row_[j]];
    if (v == 0.0) continue;
    for (std::size_t q = l_start_[j]; q < l_start_[j + 1]; ++q) x[l_index_[q]] -= l_value_[q] * v;
  }
  auto& w = work_;
  for (std::size_t j = 0; j < m; ++j) w[j] = x[pivot_row_[j]];
  for (std::size_t k = m; k-- > 0;) {
    if (w[k] == 0.0) continue;
    const double v = w[k] / u_diag_[k];
    w[k] = v;
    for (std::size_t q = u_start_[k]; q < u_start_[k + 1]; ++q) w[u_index_[q]] -= u_value_[q] * v;
  }
  for (std::size_t k = 0; k < m; ++k) x[position_[k]] = w[k];
  for (const auto& e : etas_) {
    const double v = x[e.r] / e.pivot;
    x[e.r] = v;
    if (v == 0.0) continue;
    for (std::size_t q = e.begin; q < e.end; ++q) x[eta_index_[q]] -= eta_value_[q] * v;
  }
}

void BasisFactor::btran(std::vector<double>& y) const {
  const std::size_t m = m_;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double v = y[it->r];
    for (std::size_t q = it->begin; q < it->end; ++q) v -= eta_value_[q] * y[eta_index_[q]];
    y[it->r] = v / it->pivot;
  }
  auto& t = work_;
  for (std::size_t k = 0; k < m; ++k) {
    double v = y[position_[k]];
    for (std::size_t q = u_start_[k]; q < u_start_[k + 1]; ++q) v -= u_value_[q] * t[u_index_[q]];
    t[k] = v / u_diag_[k];
  }
  for (std::size_t j = m; j-- > 0;) {
    double v = t[j];
    for (std::size_t q = l_start_[j]; q < l_start_[j + 1]; ++q) v -= l_value_[q] * y[l_index_[q]];
    y[pivot_row_[j]] = v;
  }
}

void BasisFactor::update(std::size_t r, const std::vector<double>& alpha) {
  Eta e{r, alpha[r], eta_index_.size(), 0};
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    eta_index_.push_back(i);
    eta_value_.push_back(alpha[i]);
  }
  e.end = eta_index_.size();
  etas_.push_back(e);
}

}  // namespace sinkplan::detail
