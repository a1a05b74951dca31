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

// Rademacher sums sum r_m x_m in a truncated X_p, the operator
//   sum r_n x_n -> sum r_n q_n R(q_n, A) x_n,
// R-bound lower estimates and the blow-up series L_k.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mrlab/blockspace.hpp"
#include "mrlab/multop.hpp"

namespace mrlab {

class RadSum {
 public:
  RadSum(BlockLayout layout, double p);

  /// Appends a term; its dimension must equal layout().dim().
  void add(SparseVectorXcd term);
  void add(const MixedVectorXcd& term);

  const BlockLayout& layout() const { return layout_; }
  double p() const { return p_; }
  Index size() const { return static_cast<Index>(terms_.size()); }
  const std::vector<SparseVectorXcd>& terms() const { return terms_; }

 private:
  BlockLayout layout_;
  double p_;
  std::vector<SparseVectorXcd> terms_;
};

enum class RadMode { exact, sampled, disjoint };

const char* to_string(RadMode m);
RadMode rad_mode_from_string(const std::string& s);

inline constexpr Index kMaxExactTerms = 14;

struct RadNorm {
  double value = 0.0;
  /// Mean of ||sum eps_m x_m||^2 over the patterns seen, and its standard
  /// error (zero for exact and disjoint modes).
  double mean_square = 0.0;
  double mean_square_se = 0.0;
  Index samples = 0;
};

/// exact: sqrt(2^-K sum_eps ||sum eps_m x_m||^2), K <= 14, by Gray code.
/// sampled: Monte-Carlo over iid sign vectors.
/// disjoint: ||sum x_m||, valid for pairwise disjoint supports.
RadNorm rad_norm(const RadSum& s, RadMode mode, std::uint64_t seed = 0,
                 Index samples = 100000);

/// Same for terms given in compressed coordinates of `basis`.
RadNorm rad_norm(const TwistedBasis& basis, std::span<const Eigen::VectorXcd> terms,
                 double p, RadMode mode, std::uint64_t seed = 0, Index samples = 100000);

/// Term-wise q_n R(q_n, A). The q_n are given in log form; see SpectralPoint.
RadSum associated_operator(const MultiplierSpec& spec, std::span<const SpectralPoint> q,
                           const RadSum& s);
/// Negative real q_n.
RadSum associated_operator(const MultiplierSpec& spec, std::span<const double> q,
                           const RadSum& s);

struct RBoundWitness {
  std::vector<Index> ops;                // family member applied to each term
  std::vector<Eigen::VectorXcd> vectors;  // compressed coordinates
};

struct RBoundReport {
  std::string description;
  double lower_bound = 0.0;
  RBoundWitness witness;
  RadMode method = RadMode::exact;
  Index evaluations = 0;
};

/// ||sum r_k T_{ops_k} x_k|| / ||sum r_k x_k|| with exact Rademacher norms.
double rbound_ratio(const TwistedBasis& basis, double p,
                    std::span<const CompressedOperator> family, const RBoundWitness& w);

/// Lower bound for the R-bound of `family`: single-operator norm bounds,
/// seeded random witnesses of up to six terms, the supplied starting
/// witnesses, then coordinate ascent on the best one.
RBoundReport rbound_lower(const TwistedBasis& basis, double p,
                          std::span<const CompressedOperator> family, Index trials,
                          std::uint64_t seed, std::span<const RBoundWitness> starts = {},
                          std::string description = {});

enum class BlowupConstruction { lacunary, power, powerlog };

const char* to_string(BlowupConstruction c);
BlowupConstruction blowup_construction_from_string(const std::string& s);

struct BlowupSeries {
  BlowupConstruction construction = BlowupConstruction::lacunary;
  double p = 4.0;
  double alpha = 0.25;
  std::vector<Index> k;
  std::vector<double> L;            // running max of the block ratios
  std::vector<double> closed_form;  // running max of ||coefficients|B_j||_q
  std::vector<Index> argmax_block;
  double slope = 0.0;  // log-log fit of L against k
};

/// For each block j <= max(blocks) builds x = sum_m a_m e_{pi(i+1)} over
/// i = 4m + 1 in B_j, with q_m = -gamma_{i+1} and a the Hoelder extremizer of
/// the coefficients of R x on e_i. The block ratio is the norm of the part of
/// R x on the odd coordinates over ||x||; every term has its own support, so
/// both Rademacher norms are plain norms. L_k is the max over j <= k.
/// The lacunary construction uses the twisted lacunary gamma, the others
/// gamma_from_c of the scaled family.
BlowupSeries blowup_experiment(BlowupConstruction construction, double p, double alpha,
                               std::span<const Index> blocks);

}  // namespace mrlab
