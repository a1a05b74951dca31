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

// The permutation pi of the even integers built from the first even numbers
// of the triangular blocks, and the perturbed bases
//
//   even twist: f_m = e_m (m odd),            f_m = e_{m-1} + e_{pi(m)} (m even)
//   odd twist:  f_m = e_m + e_{pi(m+1)} (m odd), f_m = e_{pi(m)}       (m even)
//
// A truncation keeps f_1, ..., f_N. Its span is invariant under every
// multiplier in the f-basis and equals the span of e_j over the e-support
// {odd m <= N} u pi({even m <= N}); that support is the coordinate set of
// all compressed vectors below.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "mrlab/blockspace.hpp"

namespace mrlab {

/// b_k, the first even number of block B_{k+2} (k = 0, 1, ...). B_1 = {1}
/// has no even element, so b_0 = 2 comes from B_2.
Index twist_b(Index k);
/// True if the even number j is some b_k.
bool is_twist_b(Index j);
/// pi(m) evaluated in closed form.
Index twist_pi(Index m);
/// pi^{-1}(j) evaluated in closed form (identity on odd j).
Index twist_pi_inverse(Index j);

class TwistPerm {
 public:
  /// Tabulates pi on [1, n] and verifies injectivity on the evens.
  static TwistPerm build(Index n);

  Index size() const { return static_cast<Index>(table_.size()); }
  Index operator()(Index m) const { return table_[static_cast<std::size_t>(m - 1)]; }
  Index inverse(Index j) const { return twist_pi_inverse(j); }
  const std::vector<Index>& table() const { return table_; }
  /// b_0, b_1, ... for every 4k + 2 <= n.
  const std::vector<Index>& b_list() const { return b_list_; }

 private:
  std::vector<Index> table_;
  std::vector<Index> b_list_;
};

enum class BasisVariant { standard, even_twist, odd_twist };

const char* to_string(BasisVariant v);
BasisVariant basis_variant_from_string(const std::string& s);

/// Smallest N' >= n for which f_1..f_N' span a coordinate subspace.
Index closed_size(Index n, BasisVariant variant);

class TwistedBasis {
 public:
  /// Keeps f_1..f_N with N = closed_size(n, variant).
  TwistedBasis(BasisVariant variant, Index n);

  BasisVariant variant() const { return variant_; }
  Index size() const { return n_; }
  const TwistPerm& perm() const { return perm_; }

  /// Sorted e-indices spanned by the truncation.
  const std::vector<Index>& support() const { return support_; }
  /// Block number of every support index.
  const std::vector<Index>& support_blocks() const { return support_blocks_; }
  /// Offset of e-index j inside support(), or -1.
  Index position_of(Index j) const;
  /// Layout just large enough to hold the support.
  BlockLayout layout() const { return BlockLayout::covering(support_.back()); }

  /// Compressed e-coordinates -> f-coefficients (entry m-1 is the coefficient of f_m).
  Eigen::VectorXcd f_from_e(const Eigen::VectorXcd& a) const;
  Eigen::VectorXcd e_from_f(const Eigen::VectorXcd& b) const;

  /// Full vectors; entries outside the support raise StructuralError naming
  /// the first offending index.
  Eigen::VectorXcd f_from_e(const MixedVectorXcd& v) const;
  MixedVectorXcd e_from_f(const Eigen::VectorXcd& b, const BlockLayout& layout) const;

  Eigen::VectorXcd gather(const MixedVectorXcd& v) const;
  MixedVectorXcd scatter(const Eigen::VectorXcd& a, const BlockLayout& layout) const;
  Eigen::VectorXcd gather(const SparseVectorXcd& v) const;
  SparseVectorXcd scatter_sparse(const Eigen::VectorXcd& a, Index dim) const;

  /// X_p norm of a compressed vector.
  double norm(const Eigen::VectorXcd& a, double p) const;

  /// e-position of the "own" coordinate of f_m: e_m for odd m (even twist),
  /// e_{pi(m)} for even m; mirrored for the odd twist.
  Index own_position(Index m) const { return own_pos_[static_cast<std::size_t>(m - 1)]; }

 private:
  BasisVariant variant_;
  Index n_;
  TwistPerm perm_;
  std::vector<Index> support_;
  std::vector<Index> support_blocks_;
  std::vector<Index> own_pos_;
  std::vector<std::int32_t> pos_lookup_;
};

enum class UncondMode { exact, sampled };

struct UncondResult {
  double estimate = 1.0;
  Eigen::VectorXcd witness_coeffs;  // a, in f-coordinates
  Eigen::VectorXd witness_signs;
  Index patterns_tested = 0;
};

/// Lower estimate of the unconditional constant
///   sup ||sum eps_m a_m f_m|| / ||sum a_m f_m||
/// over sign patterns and witness coefficient vectors. Exact mode enumerates
/// all 2^N sign patterns (N <= 14) for a witness family that contains the
/// zero-padded families of every smaller N, so the estimate is nondecreasing
/// in N. Sampled mode draws seeded signs and runs coordinate ascent on a.
UncondResult unconditional_constant(BasisVariant variant, Index n, double p,
                                    UncondMode mode, std::uint64_t seed,
                                    Index trials = 64);

}  // namespace mrlab
