#pragma once

// Sparse LU factorization of a simplex basis with product-form updates.
//
// The basis is given column by column (one column per basis position). The
// factor is computed left-looking with threshold partial pivoting; columns
// are processed in order of increasing nonzero count. Dense work vectors of
// length m are used for the solves.

#include <cstddef>
#include <utility>
#include <vector>

namespace sinkplan::detail {

struct SparseColumns {
  std::vector<std::size_t> start;  // size + 1 entries
  std::vector<std::size_t> index;
  std::vector<double> value;

  std::size_t size() const { return start.empty() ? 0 : start.size() - 1; }
};

class BasisFactor {
 public:
  struct Replacement {
    std::size_t position;  // basis position that was numerically dependent
    std::size_t row;       // row whose logical column now occupies it
  };

  /// Factorizes the m x m basis. Dependent columns are replaced by logical
  /// columns -e_row; the replacements are returned so the caller can update
  /// its basis bookkeeping.
  std::vector<Replacement> factor(std::size_t m, const SparseColumns& basis);

  /// x := B^{-1} x. Input indexed by row, output by basis position.
  void ftran(std::vector<double>& x) const;
  /// y := B^{-T} y. Input indexed by basis position, output by row.
  void btran(std::vector<double>& y) const;

  /// Replaces basis position r; alpha is the ftran'd entering column.
  void update(std::size_t r, const std::vector<double>& alpha);

  std::size_t updates() const { return etas_.size(); }
  std::size_t eta_nonzeros() const { return eta_index_.size(); }
  std::size_t factor_nonzeros() const { return l_index_.size() + u_index_.size() + m_; }

  double singular_tolerance = 1e-11;
  double threshold = 0.1;

 private:
  std::size_t m_ = 0;
  std::vector<std::size_t> pivot_row_;  // step -> row
  std::vector<std::size_t> position_;   // step -> basis position
  std::vector<std::size_t> l_start_, l_index_;
  std::vector<double> l_value_;
  std::vector<std::size_t> u_start_, u_index_;  // u_index_ holds step numbers
  std::vector<double> u_value_, u_diag_;

  struct Eta {
    std::size_t r;
    double pivot;
    std::size_t begin, end;
  };
  std::vector<Eta> etas_;
  std::vector<std::size_t> eta_index_;
  std::vector<double> eta_value_;

  mutable std::vector<double> work_;
};

}  // namespace sinkplan::detail
