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

// Maximal-regularity bookkeeping for the diagonal multipliers built from a
// sequence (c_m): the norm of a -> (a_m c_m) from l_p into X_p, the per-p
// verdict, interval planning by intersecting a family and its dual, and the
// X_inf witness against dissipativity.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mrlab/gammaseq.hpp"

namespace mrlab {

/// q with 1/2 = 1/p + 1/q, for p > 2.
double block_exponent(double p);

struct DiagonalNorm {
  double value = 0.0;  // max_k ||c|B_k||_q
  Index argmax_block = 0;
  Eigen::VectorXd extremizer;  // unit in l_p, supported on argmax_block
  double extremizer_value = 0.0;  // ||(a_m c_m)||_{X_p} at the extremizer
};

DiagonalNorm diagonal_norm(const CSeq& c, double p, Index n_blocks);

/// Tolerance for deciding that a growth exponent vanishes.
inline constexpr double kExponentTol = 1e-12;

/// Whether the family with parameter alpha has bounded block q-norms for
/// 1/p = inv_p; p <= 2 always does.
bool family_admits(CFamily family, double alpha, double inv_p);

struct MRVerdict {
  bool mr = true;
  double exponent = 0.0;  // 1/q - alpha for analytic families
  std::string reason;
};

/// MR on X_p for the multiplier built from c.
MRVerdict mr_predicate(const CSeq& c, double p);

struct IntervalSpec {
  double left = 1.0;
  double right = 2.0;
  bool left_closed = false;
  bool right_closed = true;

  /// ParameterError unless the interval is well formed and contains 2.
  void validate() const;
  bool contains(double p) const;
  std::string describe() const;
};

struct SidePlan {
  CFamily family = CFamily::exponential;
  double alpha = 0.0;
  double endpoint = 2.0;  // conjugated for the left side
  bool closed = false;
  bool external_reference = false;

  /// MR at the exponent with reciprocal inv_p (already conjugated).
  bool admits(double inv_p) const { return family_admits(family, alpha, inv_p); }
};

struct MRPlan {
  IntervalSpec interval;
  SidePlan right;
  SidePlan left;  // acts on the dual exponent
  bool predicted(double p) const;
  /// Same, with p given by its reciprocal.
  bool predicted_inv(double inv_p) const;
};

MRPlan plan_interval(const IntervalSpec& interval);

struct GridVerdict {
  double p = 0.0;
  bool predicted = false;
  bool member = false;
};

struct IntervalCertificate {
  MRPlan plan;
  std::vector<GridVerdict> grid;
  bool set_equal = true;
};

/// Compares the plan with membership on p = j / n in (1, p_max], step = 1/n.
IntervalCertificate certify_interval(const IntervalSpec& interval, double step,
                                     double p_max = 8.0);

struct DissipativityWitness {
  Index block = 0;
  std::vector<Index> eligible;  // m = 1 mod 4 in the block
  double pairing = 0.0;        // <Bx, x*> with B = -A
  double closed_form = 0.0;    // sum (1/4)(gamma_{m+1} - gamma_m)^2 / gamma_m
  double x_norm_sq = 0.0;      // sum over the block of |x_m|^2
};

/// x = sum (x_m e_m - e_{pi(m+1)}), x_m = (gamma_{m+1} - gamma_m) / (2 gamma_m),
/// over m = 1 mod 4 in B_k, against x* = x restricted to B_k.
DissipativityWitness dissipativity_witness(const CSeq& c, Index k);

/// sum over eligible m in B_k of x_m^2, from ratios only; 0 if none.
double dissipativity_x_norm_sq(const CSeq& c, Index k);

struct DissipativityOnset {
  Index k0 = 0;  // 0 if x_norm_sq stays <= 1 at k_max
  std::vector<double> x_norm_sq;  // entry k-1 for block k
};

/// Smallest k0 with x_norm_sq > 1 on every block in [k0, k_max].
DissipativityOnset dissipativity_onset(const CSeq& c, Index k_max);

struct Sandwich {
  double min_ratio = 0.0;  // min x_m / c_m
  double max_ratio = 0.0;  // max x_m / c_m
};

/// Ratios x_m / c_m over m = 1 mod 4 in blocks 1..k_max.
Sandwich dissipativity_sandwich(const CSeq& c, Index k_max);

}  // namespace mrlab
