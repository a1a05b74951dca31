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

#include "mrlab/gammaseq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mrlab {
namespace {

double family_shape(CFamily family, double alpha, Index k) {
  const double kd = static_cast<double>(k);
  switch (family) {
    case CFamily::power: return std::pow(kd, -alpha);
    case CFamily::powerlog: return std::pow(kd, -alpha) * std::log(kd + 1.0);
    case CFamily::constant: return 1.0;
    case CFamily::exponential: return std::exp2(-kd);
    case CFamily::custom: break;
  }
  throw ParameterError("family_shape: custom sequences have no shape");
}

double constraint_bound(CConstraint c) {
  return c == CConstraint::open_half ? 0.5 : 0.125;
}

void check_alpha(CFamily family, double alpha) {
  if ((family == CFamily::power || family == CFamily::powerlog) &&
      !(alpha > 0.0 && alpha < 0.5)) {
    throw ParameterError("alpha must lie in (0, 1/2), got " + std::to_string(alpha));
  }
}

double family_sup(CFamily family, double alpha) {
  switch (family) {
    case CFamily::power: return 1.0;
    case CFamily::powerlog: return family_shape(family, alpha, powerlog_peak_block(alpha));
    case CFamily::constant: return 1.0;
    case CFamily::exponential: return 0.5;
    case CFamily::custom: break;
  }
  throw ParameterError("family_sup: custom sequences have no shape");
}

}  // namespace

const char* to_string(CFamily f) {
  switch (f) {
    case CFamily::power: return "power";
    case CFamily::powerlog: return "powerlog";
    case CFamily::constant: return "constant";
    case CFamily::exponential: return "exponential";
    case CFamily::custom: return "custom";
  }
  return "?";
}

CFamily c_family_from_string(const std::string& s) {
  if (s == "power") return CFamily::power;
  if (s == "powerlog") return CFamily::powerlog;
  if (s == "constant") return CFamily::constant;
  if (s == "exponential") return CFamily::exponential;
  if (s == "custom") return CFamily::custom;
  throw ParameterError("unknown c family '" + s + "'");
}

Index powerlog_peak_block(double alpha) {
  check_alpha(CFamily::powerlog, alpha);
  // With u = log(k+1) the stationarity condition k/(k+1) = alpha log(k+1)
  // reads 1 - e^-u = alpha u, which has one root on (0, 1/alpha].
  double lo = 1e-9;
  double hi = 1.0 / alpha;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (-std::expm1(-mid) > alpha * mid) lo = mid; else hi = mid;
  }
  const double k_real = std::expm1(lo);
  if (k_real > 1e15) throw ParameterError("powerlog_peak_block: alpha too small");
  const auto k0 = std::max<Index>(1, static_cast<Index>(std::floor(k_real)));
  const auto g = [alpha](Index k) { return family_shape(CFamily::powerlog, alpha, k); };
  return g(k0 + 1) > g(k0) ? k0 + 1 : k0;
}

CSeq::CSeq(CFamily family, double alpha, double scale, Index size,
           CConstraint constraint)
    : family_(family), alpha_(alpha), scale_(scale), size_(size),
      constraint_(constraint) {
  if (family == CFamily::custom) {
    throw ParameterError("CSeq: use CSeq::custom for explicit values");
  }
  if (size < 1) throw ParameterError("CSeq: size must be positive");
  check_alpha(family, alpha);
  const double sup = scale * family_sup(family, alpha);
  if (!(scale > 0.0) || !(sup < constraint_bound(constraint))) {
    throw ParameterError("CSeq: scaled values leave the constraint interval");
  }
}

CSeq CSeq::custom(std::vector<double> values, CConstraint constraint) {
  if (values.empty()) throw ParameterError("CSeq::custom: empty sequence");
  const double bound = constraint_bound(constraint);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const bool ok = i == 0 ? (std::isfinite(v) && v >= 0.0) : (v > 0.0 && v < bound);
    if (!ok) {
      throw ParameterError("CSeq::custom: c_" + std::to_string(i + 1) + " = " +
                           std::to_string(v) + " outside (0, " + std::to_string(bound) + ")");
    }
  }
  CSeq c;
  c.constraint_ = constraint;
  c.size_ = static_cast<Index>(values.size());
  c.custom_ = std::move(values);
  return c;
}

Index CSeq::n_blocks() const {
  Index k = BlockLayout::block_of(size_);
  if (BlockLayout::bounds(k).second > size_) --k;
  return k;
}

double CSeq::operator()(Index m) const {
  if (m < 1 || m > size_) {
    throw StructuralError("CSeq: index " + std::to_string(m) + " outside [1, " +
                          std::to_string(size_) + "]");
  }
  if (family_ == CFamily::custom) return custom_[static_cast<std::size_t>(m - 1)];
  return scale_ * family_shape(family_, alpha_, BlockLayout::block_of(m));
}

double CSeq::block_value(Index k) const {
  if (family_ == CFamily::custom) {
    throw ParameterError("CSeq::block_value: custom sequences are not block constant");
  }
  return scale_ * family_shape(family_, alpha_, k);
}

Eigen::VectorXd CSeq::values() const {
  Eigen::VectorXd v(size_);
  for (Index m = 1; m <= size_; ++m) v(m - 1) = (*this)(m);
  return v;
}

Index CSeq::decreasing_from() const {
  switch (family_) {
    case CFamily::power:
    case CFamily::constant:
    case CFamily::exponential:
      return 1;
    case CFamily::powerlog:
      return BlockLayout::bounds(powerlog_peak_block(alpha_)).first;
    case CFamily::custom:
      break;
  }
  Index start = size_;
  while (start > 1 && custom_[static_cast<std::size_t>(start - 2)] >=
                          custom_[static_cast<std::size_t>(start - 1)]) {
    --start;
  }
  return start;
}

CSeq CSeq::resized(Index size) const {
  if (family_ == CFamily::custom) {
    if (size > size_) throw ParameterError("CSeq::resized: cannot extend custom values");
    return custom(std::vector<double>(custom_.begin(), custom_.begin() + size), constraint_);
  }
  return CSeq(family_, alpha_, scale_, size, constraint_);
}

CSeq c_family(CFamily kind, double alpha, Index n_blocks, CConstraint target) {
  if (kind == CFamily::custom) throw ParameterError("c_family: custom is not a family");
  if (n_blocks < 1) throw ParameterError("c_family: need at least one block");
  check_alpha(kind, alpha);
  const double scale = (1.0 / 16.0) / family_sup(kind, alpha);
  return CSeq(kind, alpha, scale, BlockLayout(n_blocks).dim(), target);
}

GammaSeq::GammaSeq(std::vector<double> log_increments, Origin origin)
    : log_incr_(std::move(log_increments)), origin_(origin) {
  if (log_incr_.empty()) throw ParameterError("GammaSeq: empty sequence");
  log_values_.resize(log_incr_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < log_incr_.size(); ++i) {
    acc += log_incr_[i];
    log_values_[i] = acc;
  }
}

GammaSeq::GammaSeq(std::vector<double> log_increments, std::vector<double> log_values,
                   Origin origin)
    : log_incr_(std::move(log_increments)), log_values_(std::move(log_values)),
      origin_(origin) {
  if (log_incr_.empty() || log_incr_.size() != log_values_.size()) {
    throw ParameterError("GammaSeq: increment and value lengths differ");
  }
}

GammaSeq GammaSeq::from_values(const std::vector<double>& values) {
  std::vector<double> incr(values.size());
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw ParameterError("GammaSeq: gamma_" + std::to_string(i + 1) + " must be positive");
    }
    logs[i] = std::log(values[i]);
    incr[i] = i == 0 ? logs[0] : logs[i] - logs[i - 1];
  }
  return GammaSeq(std::move(incr), std::move(logs), Origin::custom);
}

double GammaSeq::value(Index m) const {
  const double v = std::exp(log_value(m));
  if (!std::isfinite(v)) {
    throw RangeError("gamma_" + std::to_string(m) + " overflows double precision");
  }
  return v;
}

Index GammaSeq::first_overflow() const {
  for (Index m = 1; m <= size(); ++m) {
    if (!std::isfinite(std::exp(log_value(m)))) return m;
  }
  return 0;
}

Eigen::VectorXd GammaSeq::values() const {
  if (const Index bad = first_overflow(); bad != 0) {
    throw RangeError("gamma_" + std::to_string(bad) + " overflows double precision");
  }
  Eigen::VectorXd v(size());
  for (Index m = 1; m <= size(); ++m) v(m - 1) = std::exp(log_value(m));
  return v;
}

double GammaSeq::half_ratio(Index m) const {
  if (m < 2) throw ParameterError("half_ratio: defined for m >= 2");
  return 0.5 * std::tanh(0.5 * log_increment(m));
}

GammaSeq GammaSeq::head(Index n) const {
  if (n < 1 || n > size()) throw ParameterError("GammaSeq::head: bad length");
  return GammaSeq(std::vector<double>(log_incr_.begin(), log_incr_.begin() + n),
                  std::vector<double>(log_values_.begin(), log_values_.begin() + n),
                  origin_);
}

GammaSeq gamma_from_c(const CSeq& c) {
  std::vector<double> incr(static_cast<std::size_t>(c.size()));
  incr[0] = 0.0;
  for (Index m = 2; m <= c.size(); ++m) {
    const double cm = c(m);
    if (!(cm > 0.0 && cm < 0.5)) {
      throw ParameterError("gamma_from_c: c_" + std::to_string(m) + " = " +
                           std::to_string(cm) + " outside (0, 1/2)");
    }
    // log((1 + 2c)/(1 - 2c))
    incr[static_cast<std::size_t>(m - 1)] = 2.0 * std::atanh(2.0 * cm);
  }
  return GammaSeq(std::move(incr), GammaSeq::Origin::recurrence);
}

double twisted_lacunary_log_increment(Index m) {
  if (m < 2) throw ParameterError("twisted_lacunary_log_increment: m >= 2");
  return (m % 2 == 1 ? 3.0 : -1.0) * std::numbers::ln2;
}

GammaSeq twisted_lacunary(Index n) {
  if (n < 2) throw ParameterError("twisted_lacunary: need N >= 2");
  std::vector<double> incr(static_cast<std::size_t>(n));
  std::vector<double> logs(static_cast<std::size_t>(n));
  for (Index m = 1; m <= n; ++m) {
    const auto i = static_cast<std::size_t>(m - 1);
    logs[i] = static_cast<double>(m % 2 == 1 ? m + 1 : m - 1) * std::numbers::ln2;
    incr[i] = m == 1 ? logs[0] : twisted_lacunary_log_increment(m);
  }
  return GammaSeq(std::move(incr), std::move(logs), GammaSeq::Origin::twisted_lacunary);
}

double resolvent_gap(double t, double gamma_prev, double gamma_cur) {
  return t * (gamma_cur - gamma_prev) / ((t + gamma_prev) * (t + gamma_cur));
}

GapMax resolvent_gap_max(double gamma_prev, double gamma_cur) {
  if (!(gamma_prev > 0.0) || !(gamma_cur > gamma_prev)) {
    throw ParameterError("resolvent_gap_max: need gamma_cur > gamma_prev > 0");
  }
  const double a = std::sqrt(gamma_prev);
  const double b = std::sqrt(gamma_cur);
  return {a * b, (b - a) / (b + a)};
}

std::vector<double> membership_block_qsup(const CSeq& c, double q) {
  if (!(q > 1.0) || std::isinf(q)) {
    throw ParameterError("membership_block_qsup: q must lie in (1, inf)");
  }
  const Index blocks = c.n_blocks();
  std::vector<double> out(static_cast<std::size_t>(blocks));
  double running = 0.0;
  for (Index k = 1; k <= blocks; ++k) {
    double value;
    if (c.block_constant()) {
      value = c.block_value(k) * std::pow(static_cast<double>(k), 1.0 / q);
    } else {
      const auto [first, last] = BlockLayout::bounds(k);
      double s = 0.0;
      for (Index m = first; m <= last; ++m) s += std::pow(std::abs(c(m)), q);
      value = std::pow(s, 1.0 / q);
    }
    running = std::max(running, value);
    out[static_cast<std::size_t>(k - 1)] = running;
  }
  return out;
}

}  // namespace mrlab
