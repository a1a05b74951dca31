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

// Multiplier sequences (gamma_m) and their half-ratios
//   c_m = (1/2) (gamma_m - gamma_{m-1}) / (gamma_m + gamma_{m-1}).
//
// gamma grows geometrically, so a GammaSeq stores log-increments
// log(gamma_m / gamma_{m-1}) exactly as generated and the running log values;
// plain values are derived and may overflow.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mrlab/blockspace.hpp"

namespace mrlab {

enum class CFamily { power, powerlog, constant, exponential, custom };
enum class CConstraint { open_half, open_eighth };

const char* to_string(CFamily f);
CFamily c_family_from_string(const std::string& s);

/// The sequence (c_m), m = 1..size. Entry c_1 is the family value on B_1; the
/// gamma recurrence only reads m >= 2. Analytic families are evaluated lazily,
/// so a CSeq may describe very long truncations without storing them.
class CSeq {
 public:
  /// Block-constant analytic family: c_m = scale * g(k) for m in B_k, with
  ///   power: k^-alpha, powerlog: k^-alpha log(k+1), constant: 1,
  ///   exponential: 2^-k.
  CSeq(CFamily family, double alpha, double scale, Index size, CConstraint constraint);
  /// Arbitrary values c_1..c_N.
  static CSeq custom(std::vector<double> values, CConstraint constraint);

  CFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  CConstraint constraint() const { return constraint_; }
  Index size() const { return size_; }
  /// Number of complete blocks covered.
  Index n_blocks() const;
  bool block_constant() const { return family_ != CFamily::custom; }

  double operator()(Index m) const;
  /// Value on block k (block-constant families only).
  double block_value(Index k) const;
  Eigen::VectorXd values() const;

  /// Index from which the sequence is non-increasing (1 if it always is);
  /// for powerlog this is the start of the block maximizing k^-alpha log(k+1).
  Index decreasing_from() const;

  /// Same family over a different truncation.
  CSeq resized(Index size) const;

 private:
  CSeq() = default;

  CFamily family_ = CFamily::custom;
  double alpha_ = 0.0;
  double scale_ = 1.0;
  Index size_ = 0;
  CConstraint constraint_ = CConstraint::open_eighth;
  std::vector<double> custom_;
};

/// Builds the scaled family over `n_blocks` blocks: c_m = s g(k), with
/// s = (1/16) / sup_k g(k) taken over all k >= 1 so that values lie in
/// (0, 1/16] and do not depend on the truncation.
CSeq c_family(CFamily kind, double alpha, Index n_blocks,
              CConstraint target = CConstraint::open_eighth);

/// Block k maximizing k^-alpha log(k+1).
Index powerlog_peak_block(double alpha);

class GammaSeq {
 public:
  enum class Origin { recurrence, twisted_lacunary, custom };

  /// First entry is log gamma_1, entry m-1 (m >= 2) is log(gamma_m / gamma_{m-1}).
  GammaSeq(std::vector<double> log_increments, Origin origin);
  /// Increments together with log values computed independently.
  GammaSeq(std::vector<double> log_increments, std::vector<double> log_values,
           Origin origin);
  static GammaSeq from_values(const std::vector<double>& values);

  Origin origin() const { return origin_; }
  Index size() const { return static_cast<Index>(log_values_.size()); }

  double log_value(Index m) const { return log_values_[static_cast<std::size_t>(m - 1)]; }
  /// log(gamma_m / gamma_{m-1}) for m >= 2.
  double log_increment(Index m) const { return log_incr_[static_cast<std::size_t>(m - 1)]; }
  /// gamma_m; RangeError if it overflows double precision.
  double value(Index m) const;
  /// gamma_1..gamma_N; RangeError naming the first overflowing index.
  Eigen::VectorXd values() const;
  /// First index whose value overflows, or 0.
  Index first_overflow() const;
  /// (1/2)(gamma_m - gamma_{m-1})/(gamma_m + gamma_{m-1}) = tanh(incr/2)/2.
  double half_ratio(Index m) const;

  GammaSeq head(Index n) const;

 private:
  std::vector<double> log_incr_;
  std::vector<double> log_values_;
  Origin origin_;
};

/// The unique strictly increasing gamma with gamma_1 = 1 and half-ratios c_m.
GammaSeq gamma_from_c(const CSeq& c);

/// gamma_m = 2^{m+1} (m odd), 2^{m-1} (m even).
GammaSeq twisted_lacunary(Index n);
/// log(gamma_m / gamma_{m-1}) of the twisted lacunary sequence.
double twisted_lacunary_log_increment(Index m);

struct GapMax {
  double t_star;
  double d_star;
};

/// Maximizer of d(t) = t[(t + g0)^-1 - (t + g1)^-1] on t > 0 for g1 > g0 > 0.
GapMax resolvent_gap_max(double gamma_prev, double gamma_cur);
/// d(t) itself.
double resolvent_gap(double t, double gamma_prev, double gamma_cur);

/// k -> max_{j <= k} ||c|B_j||_q over the complete blocks of c.
std::vector<double> membership_block_qsup(const CSeq& c, double q);

}  // namespace mrlab
