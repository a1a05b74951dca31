// Copyright 2026 The mrlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Finite models of the mixed-norm sequence spaces X_p = (sum l_2^n)_{l_p},
// the block-sup spaces (sum l_q^n)_{l_inf} and the BV sequence norm.
//
// The blocks B_k = [(k-1)k/2 + 1, k(k+1)/2] partition the positive integers
// independently of any truncation, so block membership of an index is a pure
// function. A BlockLayout only fixes how many blocks a truncation keeps.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mrlab/errors.hpp"

namespace mrlab {

class BlockLayout {
 public:
  explicit BlockLayout(Index n_blocks);

  /// Smallest layout whose dimension reaches `max_index`.
  static BlockLayout covering(Index max_index);

  Index n_blocks() const { return n_blocks_; }
  Index dim() const { return n_blocks_ * (n_blocks_ + 1) / 2; }

  /// Block number of the 1-based index m.
  static Index block_of(Index m);
  /// First and last index of block k.
  static std::pair<Index, Index> bounds(Index k) {
    return {(k - 1) * k / 2 + 1, k * (k + 1) / 2};
  }

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

 private:
  Index n_blocks_;
};

/// Coefficients of x = sum a_m e_m in a truncated mixed-norm space.
template <typename Scalar>
class MixedVector {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit MixedVector(BlockLayout layout)
      : layout_(layout), coeffs_(Coeffs::Zero(layout.dim())) {}

  MixedVector(BlockLayout layout, Coeffs coeffs)
      : layout_(layout), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != layout_.dim()) {
      throw StructuralError("MixedVector: " + std::to_string(coeffs_.size()) +
                            " coefficients for layout of dimension " +
                            std::to_string(layout_.dim()));
    }
    if (!coeffs_.allFinite()) {
      throw ParameterError("MixedVector: non-finite coefficient");
    }
  }

  static MixedVector unit(BlockLayout layout, Index m) {
    MixedVector v(layout);
    v.coeff(m) = Scalar(1);
    return v;
  }

  const BlockLayout& layout() const { return layout_; }
  Index dim() const { return layout_.dim(); }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  /// 1-based access.
  Scalar& coeff(Index m) { return coeffs_(m - 1); }
  const Scalar& coeff(Index m) const { return coeffs_(m - 1); }

 private:
  BlockLayout layout_;
  Coeffs coeffs_;
};

using MixedVectorXcd = MixedVector<Complex>;
using SparseVectorXcd = Eigen::SparseVector<Complex>;

namespace detail {

void check_exponent(double p);

/// Combines per-block sums of squared moduli into the l_p-sum of block norms.
/// `block_sq` holds (block, |v|^2) pairs in any order.
double combine_blocks(std::vector<std::pair<Index, double>>& block_sq,
                      double p);

}  // namespace detail

/// X_p norm of a coefficient vector whose entry i (0-based) is a_{i+1}.
/// p = infinity gives the c_0 / l_inf model max_k ||v|B_k||_2.
template <typename Derived>
double norm_xp(const Eigen::MatrixBase<Derived>& coeffs, double p) {
  detail::check_exponent(p);
  const Index n = coeffs.size();
  const bool sup = std::isinf(p);
  double total = 0.0;
  for (Index k = 1;; ++k) {
    const auto [first, last] = BlockLayout::bounds(k);
    if (first > n) break;
    double sq = 0.0;
    for (Index m = first; m <= std::min(last, n); ++m) {
      sq += std::norm(coeffs(m - 1));
    }
    const double block = std::sqrt(sq);
    total = sup ? std::max(total, block) : total + std::pow(block, p);
  }
  return sup ? total : std::pow(total, 1.0 / p);
}

template <typename Scalar>
double norm_xp(const MixedVector<Scalar>& v, double p) {
  return norm_xp(v.coeffs(), p);
}

/// X_p norm of the vector with value values(i) at the 1-based index
/// indices[i] and zeros elsewhere. Indices must be distinct.
template <typename Derived>
double norm_xp_at(std::span<const Index> indices,
                  const Eigen::MatrixBase<Derived>& values, double p) {
  detail::check_exponent(p);
  if (static_cast<Index>(indices.size()) != values.size()) {
    throw StructuralError("norm_xp_at: index/value length mismatch");
  }
  std::vector<std::pair<Index, double>> block_sq;
  block_sq.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    block_sq.emplace_back(BlockLayout::block_of(indices[i]),
                          std::norm(values(static_cast<Index>(i))));
  }
  return detail::combine_blocks(block_sq, p);
}

/// X_p norm of a sparse vector (inner index i is the 1-based index i + 1).
double norm_xp(const SparseVectorXcd& v, double p);

/// sup_k (sum_{m in B_k} |c_m|^q)^{1/q} over the blocks the vector reaches.
template <typename Derived>
double norm_block_qsup(const Eigen::MatrixBase<Derived>& c, double q) {
  if (c.size() == 0) throw ParameterError("norm_block_qsup: empty sequence");
  if (!(q > 1.0) || std::isinf(q)) {
    throw ParameterError("norm_block_qsup: q must lie in (1, inf)");
  }
  const Index n = c.size();
  double best = 0.0;
  for (Index k = 1;; ++k) {
    const auto [first, last] = BlockLayout::bounds(k);
    if (first > n) break;
    double s = 0.0;
    for (Index m = first; m <= std::min(last, n); ++m) {
      s += std::pow(std::abs(c(m - 1)), q);
    }
    best = std::max(best, std::pow(s, 1.0 / q));
  }
  return best;
}

/// |s_1| + sum_m |s_{m+1} - s_m|.
template <typename Derived>
double bv_norm(const Eigen::MatrixBase<Derived>& s) {
  if (s.size() == 0) throw ParameterError("bv_norm: empty sequence");
  double total = std::abs(s(0));
  for (Index m = 1; m < s.size(); ++m) total += std::abs(s(m) - s(m - 1));
  return total;
}

/// Variation sum_m |s_{m+1} - s_m| without the leading |s_1| term.
template <typename Derived>
double tail_variation(const Eigen::MatrixBase<Derived>& s) {
  double total = 0.0;
  for (Index m = 1; m < s.size(); ++m) total += std::abs(s(m) - s(m - 1));
  return total;
}

/// The zero-insertion map phi: position k of the source goes to positions[k-1].
class SpreadMap {
 public:
  explicit SpreadMap(std::vector<Index> positions);

  /// phi(k) = stride * (k - 1) + 1 for k = 1..n.
  static SpreadMap strided(Index n, Index stride);

  const std::vector<Index>& positions() const { return positions_; }
  Index size() const { return static_cast<Index>(positions_.size()); }
  /// sup_k phi(k+1) - phi(k); 1 for a single position.
  Index gap() const { return gap_; }

 private:
  std::vector<Index> positions_;
  Index gap_ = 1;
};

/// Places v's entries at map.positions() inside `target`, zeros elsewhere.
MixedVectorXcd spread(const MixedVectorXcd& v, const SpreadMap& map,
                      const BlockLayout& target);
/// Left inverse of spread: reads the entries at map.positions().
MixedVectorXcd compress(const MixedVectorXcd& w, const SpreadMap& map,
                        const BlockLayout& source);

}  // namespace mrlab
