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

#include "mrlab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mrlab/blockspace.hpp"
#include "mrlab/multop.hpp"
#include "mrlab/twistbasis.hpp"

namespace mrlab {

double block_exponent(double p) {
  if (!(p > 2.0)) throw ParameterError("block exponent needs p > 2, got " + std::to_string(p));
  if (std::isinf(p)) return 2.0;
  return 2.0 * p / (p - 2.0);
}

DiagonalNorm diagonal_norm(const CSeq& c, double p, Index n_blocks) {
  const double q = block_exponent(p);
  if (n_blocks < 1) throw ParameterError("diagonal_norm: need at least one block");
  const Index dim = BlockLayout(n_blocks).dim();
  if (c.size() < dim) {
    throw ParameterError("c has " + std::to_string(c.size()) + " terms, " +
                         std::to_string(n_blocks) + " blocks need " + std::to_string(dim));
  }
  DiagonalNorm out;
  for (Index k = 1; k <= n_blocks; ++k) {
    const auto [first, last] = BlockLayout::bounds(k);
    double s = 0.0;
    for (Index m = first; m <= last; ++m) s += std::pow(std::abs(c(m)), q);
    const double v = std::pow(s, 1.0 / q);
    if (v > out.value) {
      out.value = v;
      out.argmax_block = k;
    }
  }
  out.extremizer = Eigen::VectorXd::Zero(dim);
  if (out.argmax_block == 0) return out;
  const auto [first, last] = BlockLayout::bounds(out.argmax_block);
  for (Index m = first; m <= last; ++m) {
    out.extremizer(m - 1) = std::pow(std::abs(c(m)), q / p);
  }
  out.extremizer /= out.extremizer.lpNorm<Eigen::Infinity>();
  out.extremizer /= std::pow(out.extremizer.array().pow(p).sum(), 1.0 / p);
  Eigen::VectorXd image(dim);
  for (Index m = 1; m <= dim; ++m) image(m - 1) = out.extremizer(m - 1) * c(m);
  out.extremizer_value = norm_xp(image, p);
  return out;
}

bool family_admits(CFamily family, double alpha, double inv_p) {
  if (inv_p >= 0.5) return true;
  const double e = 0.5 - inv_p - alpha;
  switch (family) {
    case CFamily::power: return e <= kExponentTol;
    case CFamily::powerlog: return e < -kExponentTol;
    case CFamily::constant: return false;
    case CFamily::exponential: return true;
    case CFamily::custom: break;
  }
  throw ParameterError("family_admits: custom sequences need the trend test");
}

namespace {

double family_peak_value(const CSeq& c) {
  switch (c.family()) {
    case CFamily::powerlog: return c.block_value(powerlog_peak_block(c.alpha()));
    case CFamily::custom: {
      double best = 0.0;
      for (Index m = 2; m <= c.size(); ++m) best = std::max(best, c(m));
      return best;
    }
    default: return c.block_value(1);
  }
}

}  // namespace

MRVerdict mr_predicate(const CSeq& c, double p) {
  detail::check_exponent(p);
  const double peak = family_peak_value(c);
  if (!(peak < 0.125)) {
    throw ParameterError("hypothesis violated: c must lie in (0, 1/8), sup is " +
                         std::to_string(peak));
  }
  MRVerdict v;
  const double inv_p = 1.0 / p;
  if (inv_p >= 0.5) {
    v.reason = "p <= 2";
    return v;
  }
  if (c.family() != CFamily::custom) {
    v.exponent = 0.5 - inv_p - c.alpha();
    if (c.family() == CFamily::constant || c.family() == CFamily::exponential) {
      v.exponent = std::numeric_limits<double>::quiet_NaN();
    }
    v.mr = family_admits(c.family(), c.alpha(), inv_p);
    v.reason = std::string(to_string(c.family())) + " family exponent rule";
    return v;
  }
  const Index n_blocks = c.n_blocks();
  if (n_blocks < 10) {
    throw ParameterError("trend test needs at least 10 complete blocks, got " +
                         std::to_string(n_blocks));
  }
  const Index horizon = n_blocks / 10;
  if (c.decreasing_from() > BlockLayout::bounds(horizon).first) {
    throw ParameterError("hypothesis violated: c is not decreasing over the last decade "
                         "of blocks (decreasing from index " +
                         std::to_string(c.decreasing_from()) + ")");
  }
  const std::vector<double> sup = membership_block_qsup(c, block_exponent(p));
  const double growth = sup.back() - sup[static_cast<std::size_t>(horizon - 1)];
  v.exponent = std::numeric_limits<double>::quiet_NaN();
  v.mr = growth < 1e-6;
  std::ostringstream os;
  os << "trend test: partial sup grew by " << growth << " over blocks " << horizon << ".."
     << n_blocks;
  v.reason = os.str();
  return v;
}

void IntervalSpec::validate() const {
  if (std::isnan(left) || std::isnan(right)) throw ParameterError("interval: NaN endpoint");
  if (left < 1.0) throw ParameterError("interval: left endpoint below 1");
  if (left == 1.0 && left_closed) throw ParameterError("interval: p = 1 is not admissible");
  if (std::isinf(right) && right_closed) {
    throw ParameterError("interval: right endpoint infinity must be open");
  }
  if (!contains(2.0)) throw ParameterError("interval " + describe() + " does not contain 2");
}

bool IntervalSpec::contains(double p) const {
  const bool lo = left_closed ? p >= left : p > left;
  const bool hi = right_closed ? p <= right : p < right;
  return lo && hi;
}

std::string IntervalSpec::describe() const {
  std::ostringstream os;
  os << (left_closed ? '[' : '(') << left << ", ";
  if (std::isinf(right)) {
    os << "inf";
  } else {
    os << right;
  }
  os << (right_closed ? ']' : ')');
  return os.str();
}

namespace {

/// Family for the side whose endpoint has reciprocal inv_end.
SidePlan plan_side(double endpoint, double inv_end, bool closed) {
  SidePlan s;
  s.endpoint = endpoint;
  s.closed = closed;
  if (inv_end == 0.0) {
    s.family = CFamily::exponential;
  } else if (inv_end == 0.5) {
    s.family = CFamily::constant;
    s.external_reference = true;
  } else {
    s.family = closed ? CFamily::power : CFamily::powerlog;
    s.alpha = 0.5 - inv_end;
  }
  return s;
}

}  // namespace

bool MRPlan::predicted_inv(double inv_p) const {
  return right.admits(inv_p) && left.admits(1.0 - inv_p);
}

bool MRPlan::predicted(double p) const { return predicted_inv(1.0 / p); }

MRPlan plan_interval(const IntervalSpec& interval) {
  interval.validate();
  MRPlan plan;
  plan.interval = interval;
  const double inv_right = std::isinf(interval.right) ? 0.0 : 1.0 / interval.right;
  plan.right = plan_side(interval.right, inv_right, interval.right_closed);
  // Conjugate exponent of the left endpoint: 1/p' = 1 - 1/p.
  const double inv_left_dual = 1.0 - 1.0 / interval.left;
  const double left_dual = inv_left_dual == 0.0 ? std::numeric_limits<double>::infinity()
                                                : 1.0 / inv_left_dual;
  plan.left = plan_side(left_dual, inv_left_dual, interval.left_closed);
  return plan;
}

IntervalCertificate certify_interval(const IntervalSpec& interval, double step,
                                     double p_max) {
  if (!(step > 0.0)) throw ParameterError("grid step must be positive");
  const double n_real = std::round(1.0 / step);
  if (n_real < 1.0 || std::abs(1.0 / n_real - step) > 1e-12) {
    throw ParameterError("grid step must be 1/n for an integer n");
  }
  const auto n = static_cast<Index>(n_real);
  IntervalCertificate cert;
  cert.plan = plan_interval(interval);
  const auto j_max = static_cast<Index>(std::floor(p_max * n_real + 1e-9));
  for (Index j = n + 1; j <= j_max; ++j) {
    GridVerdict g;
    g.p = static_cast<double>(j) / n_real;
    g.predicted = cert.plan.predicted_inv(n_real / static_cast<double>(j));
    g.member = interval.contains(g.p);
    cert.set_equal = cert.set_equal && g.predicted == g.member;
    cert.grid.push_back(g);
  }
  return cert;
}

namespace {

double c_log_increment(const CSeq& c, Index m) { return 2.0 * std::atanh(2.0 * c(m)); }

std::vector<Index> eligible_indices(Index k) {
  const auto [first, last] = BlockLayout::bounds(k);
  std::vector<Index> out;
  for (Index m = first; m <= last; ++m) {
    if (m % 4 == 1) out.push_back(m);
  }
  return out;
}

void require_length(const CSeq& c, Index k) {
  const Index need = BlockLayout::bounds(k).second + 1;
  if (c.size() < need) {
    throw ParameterError("block " + std::to_string(k) + " needs c up to index " +
                         std::to_string(need) + ", have " + std::to_string(c.size()));
  }
}

}  // namespace

DissipativityWitness dissipativity_witness(const CSeq& c, Index k) {
  if (k < 1) throw ParameterError("dissipativity: block index must be positive");
  require_length(c, k);
  DissipativityWitness w;
  w.block = k;
  w.eligible = eligible_indices(k);
  if (w.eligible.empty()) {
    throw ParameterError("block " + std::to_string(k) + " contains no index = 1 mod 4");
  }
  for (Index m : w.eligible) {
    if (BlockLayout::block_of(twist_pi(m + 1)) == k) {
      throw ParameterError("pi(" + std::to_string(m + 1) + ") falls inside block " +
                           std::to_string(k));
    }
  }
  const Index n = BlockLayout::bounds(k).second + 1;
  const MultiplierSpec spec(gamma_from_c(c.resized(n)), BasisVariant::even_twist, n);
  const TwistedBasis& basis = spec.basis();
  const GammaSeq& g = spec.gamma();

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Index>(basis.support().size()));
  for (Index m : w.eligible) {
    const double xm = 0.5 * std::expm1(g.log_increment(m + 1));
    x(basis.position_of(m)) = xm;
    x(basis.position_of(twist_pi(m + 1))) = -1.0;
    w.x_norm_sq += xm * xm;
    const double delta = g.value(m + 1) - g.value(m);
    w.closed_form += 0.25 * delta * delta / g.value(m);
  }
  const Eigen::VectorXcd ax = apply_A(spec, x);
  const auto [first, last] = BlockLayout::bounds(k);
  double pairing = 0.0;
  for (Index i = first; i <= last; ++i) {
    const Index pos = basis.position_of(i);
    if (pos >= 0) pairing -= (ax(pos) * x(pos)).real();
  }
  w.pairing = pairing;
  return w;
}

double dissipativity_x_norm_sq(const CSeq& c, Index k) {
  require_length(c, k);
  double s = 0.0;
  for (Index m : eligible_indices(k)) {
    const double xm = 0.5 * std::expm1(c_log_increment(c, m + 1));
    s += xm * xm;
  }
  return s;
}

DissipativityOnset dissipativity_onset(const CSeq& c, Index k_max) {
  if (k_max < 1) throw ParameterError("dissipativity onset: k_max must be positive");
  DissipativityOnset out;
  for (Index k = 1; k <= k_max; ++k) out.x_norm_sq.push_back(dissipativity_x_norm_sq(c, k));
  for (Index k = k_max; k >= 1 && out.x_norm_sq[static_cast<std::size_t>(k - 1)] > 1.0; --k) {
    out.k0 = k;
  }
  return out;
}

Sandwich dissipativity_sandwich(const CSeq& c, Index k_max) {
  Sandwich s{std::numeric_limits<double>::infinity(), 0.0};
  for (Index k = 1; k <= k_max; ++k) {
    require_length(c, k);
    for (Index m : eligible_indices(k)) {
      if (m < 2) continue;
      const double xm = 0.5 * std::expm1(c_log_increment(c, m + 1));
      const double r = xm / c(m);
      s.min_ratio = std::min(s.min_ratio, r);
      s.max_ratio = std::max(s.max_ratio, r);
    }
  }
  return s;
}

}  // namespace mrlab
