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

// Schauder multipliers A f_m = gamma_m f_m on a truncated twisted basis,
// applied matrix-free: transform to f-coordinates, scale, transform back.
// All vectors handed to the compressed overloads live on the basis support
// (see TwistedBasis); the MixedVector overloads gather and scatter.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrlab/blockspace.hpp"
#include "mrlab/gammaseq.hpp"
#include "mrlab/twistbasis.hpp"

namespace mrlab {

/// A complex spectral parameter stored as (log |lambda|, arg lambda), so that
/// points comparable to overflowing gamma values stay representable.
struct SpectralPoint {
  double log_modulus = 0.0;
  double arg = 0.0;

  static SpectralPoint from(Complex lambda);
  /// -exp(log_modulus).
  static SpectralPoint negative_real(double log_modulus);
  /// r e^{i(pi - theta)}: the ray at angle theta from the negative axis side.
  static SpectralPoint off_sector(double r, double theta);
  Complex value() const;
};

/// lambda / (lambda - gamma) for gamma = exp(log_gamma).
Complex scaled_resolvent_symbol(const SpectralPoint& lambda, double log_gamma);

class MultiplierSpec {
 public:
  /// gamma on the closed truncation f_1..f_N of the given variant; the layout
  /// is the smallest one holding the basis support.
  MultiplierSpec(GammaSeq gamma, BasisVariant variant, Index n);
  MultiplierSpec(GammaSeq gamma, TwistedBasis basis, BlockLayout layout);

  const GammaSeq& gamma() const { return gamma_; }
  const TwistedBasis& basis() const { return basis_; }
  const BlockLayout& layout() const { return layout_; }
  Index size() const { return basis_.size(); }

 private:
  GammaSeq gamma_;
  TwistedBasis basis_;
  BlockLayout layout_;
};

/// Multiplier with symbol mu(m), m = 1..N, on compressed e-coordinates.
template <typename Symbol>
Eigen::VectorXcd apply_multiplier(const TwistedBasis& basis,
                                  const Eigen::VectorXcd& a, Symbol&& mu) {
  Eigen::VectorXcd b = basis.f_from_e(a);
  for (Index m = 1; m <= basis.size(); ++m) b(m - 1) *= mu(m);
  return basis.e_from_f(b);
}

template <typename Symbol>
MixedVectorXcd apply_multiplier(const MultiplierSpec& spec, const MixedVectorXcd& v,
                                Symbol&& mu) {
  if (v.layout() != spec.layout()) {
    throw StructuralError("vector layout (dim " + std::to_string(v.dim()) +
                          ") differs from the operator layout (dim " +
                          std::to_string(spec.layout().dim()) + ")");
  }
  return spec.basis().scatter(
      apply_multiplier(spec.basis(), spec.basis().gather(v), std::forward<Symbol>(mu)),
      spec.layout());
}

Eigen::VectorXcd apply_A(const MultiplierSpec& spec, const Eigen::VectorXcd& a);
MixedVectorXcd apply_A(const MultiplierSpec& spec, const MixedVectorXcd& v);

/// R(lambda, A) v = (lambda - A)^{-1} v.
Eigen::VectorXcd resolvent_apply(const MultiplierSpec& spec, Complex lambda,
                                 const Eigen::VectorXcd& a);
MixedVectorXcd resolvent_apply(const MultiplierSpec& spec, Complex lambda,
                               const MixedVectorXcd& v);

/// lambda R(lambda, A) v, evaluated from log values.
Eigen::VectorXcd scaled_resolvent_apply(const MultiplierSpec& spec,
                                        const SpectralPoint& lambda,
                                        const Eigen::VectorXcd& a);
MixedVectorXcd scaled_resolvent_apply(const MultiplierSpec& spec,
                                      const SpectralPoint& lambda,
                                      const MixedVectorXcd& v);

/// e^{-tA} v.
Eigen::VectorXcd semigroup_apply(const MultiplierSpec& spec, double t,
                                 const Eigen::VectorXcd& a);
MixedVectorXcd semigroup_apply(const MultiplierSpec& spec, double t,
                               const MixedVectorXcd& v);

/// Dense matrices in compressed e-coordinates (row/column i is support()[i]).
Eigen::MatrixXd semigroup_matrix(const MultiplierSpec& spec, double t);
Eigen::MatrixXd generator_matrix(const MultiplierSpec& spec);

struct PositivityReport {
  std::vector<double> t_grid;
  std::vector<double> min_entry;
  double tolerance = 1e-12;
  bool verdict = true;    // every entry >= -tolerance on the grid
  bool predicate = true;  // the gamma monotonicity condition
  bool agrees() const { return verdict == predicate; }
};

/// Semigroup positivity holds iff gamma_m <= gamma_{m-1} for every even m
/// (even twist); the odd twist needs gamma_{m+1} >= gamma_m for odd m.
bool semigroup_positivity_predicate(const MultiplierSpec& spec);
PositivityReport positivity_check(const MultiplierSpec& spec,
                                  std::span<const double> t_grid,
                                  double tolerance = 1e-12);

/// A^{it} v. For the even twist this evaluates the e-coordinate expansion
///   sum gt_m^{it} a_m e_m + sum a_{2m} (g_{k}^{it} - g_{k-1}^{it}) e_{k-1},
/// k = pi^{-1}(2m), gt_m = gamma_m (m odd), gamma_{pi^{-1}(m)} (m even);
/// other variants go through the f-coordinates.
Eigen::VectorXcd imaginary_power_apply(const MultiplierSpec& spec, double t,
                                       const Eigen::VectorXcd& a);
MixedVectorXcd imaginary_power_apply(const MultiplierSpec& spec, double t,
                                     const MixedVectorXcd& v);

struct BipCheck {
  double worst_ratio = 0.0;
  Index worst_m = 0;
  double worst_t = 0.0;
};

/// max over m <= n_pairs and t of |gamma_{2m}^{it} - gamma_{2m-1}^{it}| / (8|t| c_{2m}).
BipCheck bip_pair_bound_check(const GammaSeq& gamma, const CSeq& c,
                              std::span<const double> t_grid, Index n_pairs);

struct BvBound {
  double computed = 0.0;
  double closed_form = 0.0;
  bool holds() const { return computed <= closed_form; }
};

/// (2^a / (2^a - 1)) (2^{3a} + 2^a - 2) e^{-t}.
double bv_semigroup_closed_form(double alpha, double t);
/// Variation of (exp(-t gamma_m^alpha))_{m <= n} for the twisted lacunary
/// gamma, against the closed form.
BvBound bv_semigroup_bound(double alpha, double t, Index n);

/// sup_n ||P_n|| for the partial-sum projections of either twisted basis.
inline constexpr double kBasisConstantBound = 2.0;

/// Abel-summation upper bound 2 (sum |mu_{m+1} - mu_m| + |mu_N|) on the norm
/// of the multiplier with symbol mu.
double multiplier_upper_bound(const Eigen::VectorXcd& mu);

struct NormEstimate {
  double value = 0.0;
  Eigen::VectorXcd witness;
};

using CompressedOperator = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Lower bound on ||T|| on X_p restricted to the basis support: scans unit
/// vectors and seeded random vectors, then runs normalized coordinate ascent
/// from the best starts.
NormEstimate operator_norm_lower(const TwistedBasis& basis, double p,
                                 const CompressedOperator& op, Index trials,
                                 std::uint64_t seed);

struct SectorialityReport {
  double p = 2.0;
  std::vector<double> angles;
  std::vector<double> radii;
  Eigen::MatrixXd lower;     // angles x radii, ||lambda R(lambda, A)|| lower bounds
  Eigen::MatrixXd bv_upper;  // angles x radii, Abel bound
  std::vector<double> sup_lower;
  std::vector<double> sup_upper;
  double measured_K = 0.0;  // max lower / ||symbol||_BV
  std::vector<std::string> notes;
};

/// Samples lambda = r e^{i(pi - theta)} and bounds ||lambda R(lambda, A)||.
SectorialityReport sectoriality_probe(const MultiplierSpec& spec, double p,
                                      std::span<const double> angles,
                                      std::span<const double> radii,
                                      Index trials, std::uint64_t seed);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace mrlab
