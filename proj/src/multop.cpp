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

#include "mrlab/multop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mrlab {

namespace {

constexpr double kSingularTol = 1e-14;

Complex unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

void check_compressed(const MultiplierSpec& spec, const Eigen::VectorXcd& a) {
  const auto n = static_cast<Index>(spec.basis().support().size());
  if (a.size() != n) {
    throw StructuralError("compressed vector has " + std::to_string(a.size()) +
                          " entries, the basis support has " + std::to_string(n));
  }
}

double semigroup_symbol(double t, double log_gamma) {
  if (t == 0.0) return 1.0;
  return std::exp(-t * std::exp(log_gamma));
}

}  // namespace

SpectralPoint SpectralPoint::from(Complex lambda) {
  if (lambda == Complex(0.0)) throw ParameterError("spectral point at the origin");
  return {std::log(std::abs(lambda)), std::arg(lambda)};
}

SpectralPoint SpectralPoint::negative_real(double log_modulus) {
  return {log_modulus, std::numbers::pi};
}

SpectralPoint SpectralPoint::off_sector(double r, double theta) {
  if (!(r > 0.0)) throw ParameterError("off_sector: radius must be positive");
  return {std::log(r), std::numbers::pi - theta};
}

Complex SpectralPoint::value() const { return std::exp(log_modulus) * unit_phase(arg); }

Complex scaled_resolvent_symbol(const SpectralPoint& lambda, double log_gamma) {
  // lambda / (lambda - gamma) = 1 / (1 - z), z = (gamma / |lambda|) e^{-i arg}.
  const double d = log_gamma - lambda.log_modulus;
  if (d <= 0.0) {
    const Complex z = std::exp(d) * unit_phase(-lambda.arg);
    const Complex den = 1.0 - z;
    if (std::abs(den) <= kSingularTol) {
      throw SingularityError("lambda coincides with a point of the spectrum");
    }
    return 1.0 / den;
  }
  if (d > 745.0) return 0.0;
  const Complex w = std::exp(-d) * unit_phase(lambda.arg);  // 1 / z
  const Complex den = 1.0 - w;
  if (std::abs(den) <= kSingularTol) {
    throw SingularityError("lambda coincides with a point of the spectrum");
  }
  return -w / den;
}

MultiplierSpec::MultiplierSpec(GammaSeq gamma, BasisVariant variant, Index n)
    : MultiplierSpec(gamma, TwistedBasis(variant, n),
                     TwistedBasis(variant, n).layout()) {}

MultiplierSpec::MultiplierSpec(GammaSeq gamma, TwistedBasis basis, BlockLayout layout)
    : gamma_(std::move(gamma)), basis_(std::move(basis)), layout_(layout) {
  if (gamma_.size() < basis_.size()) {
    throw ParameterError("gamma has " + std::to_string(gamma_.size()) +
                         " entries, the truncation needs " +
                         std::to_string(basis_.size()));
  }
  if (layout_.dim() < basis_.support().back()) {
    throw StructuralError("layout of dimension " + std::to_string(layout_.dim()) +
                          " cannot hold e_" + std::to_string(basis_.support().back()));
  }
}

Eigen::VectorXcd apply_A(const MultiplierSpec& spec, const Eigen::VectorXcd& a) {
  check_compressed(spec, a);
  const GammaSeq& g = spec.gamma();
  return apply_multiplier(spec.basis(), a, [&](Index m) { return Complex(g.value(m)); });
}

MixedVectorXcd apply_A(const MultiplierSpec& spec, const MixedVectorXcd& v) {
  const GammaSeq& g = spec.gamma();
  return apply_multiplier(spec, v, [&](Index m) { return Complex(g.value(m)); });
}

namespace {

auto resolvent_symbol(const MultiplierSpec& spec, Complex lambda) {
  std::vector<Complex> mu(static_cast<std::size_t>(spec.size()));
  for (Index m = 1; m <= spec.size(); ++m) {
    const double g = spec.gamma().value(m);
    const Complex den = lambda - g;
    if (std::abs(den) <= kSingularTol * std::max(1.0, g)) {
      throw SingularityError("lambda = gamma_" + std::to_string(m) +
                             " lies in the spectrum");
    }
    mu[static_cast<std::size_t>(m - 1)] = 1.0 / den;
  }
  return mu;
}

std::vector<Complex> scaled_symbol(const MultiplierSpec& spec, const SpectralPoint& lambda) {
  std::vector<Complex> mu(static_cast<std::size_t>(spec.size()));
  for (Index m = 1; m <= spec.size(); ++m) {
    mu[static_cast<std::size_t>(m - 1)] =
        scaled_resolvent_symbol(lambda, spec.gamma().log_value(m));
  }
  return mu;
}

}  // namespace

Eigen::VectorXcd resolvent_apply(const MultiplierSpec& spec, Complex lambda,
                                 const Eigen::VectorXcd& a) {
  check_compressed(spec, a);
  const auto mu = resolvent_symbol(spec, lambda);
  return apply_multiplier(spec.basis(), a,
                          [&](Index m) { return mu[static_cast<std::size_t>(m - 1)]; });
}

MixedVectorXcd resolvent_apply(const MultiplierSpec& spec, Complex lambda,
                               const MixedVectorXcd& v) {
  const auto mu = resolvent_symbol(spec, lambda);
  return apply_multiplier(spec, v,
                          [&](Index m) { return mu[static_cast<std::size_t>(m - 1)]; });
}

Eigen::VectorXcd scaled_resolvent_apply(const MultiplierSpec& spec,
                                        const SpectralPoint& lambda,
                                        const Eigen::VectorXcd& a) {
  check_compressed(spec, a);
  const auto mu = scaled_symbol(spec, lambda);
  return apply_multiplier(spec.basis(), a,
                          [&](Index m) { return mu[static_cast<std::size_t>(m - 1)]; });
}

MixedVectorXcd scaled_resolvent_apply(const MultiplierSpec& spec,
                                      const SpectralPoint& lambda,
                                      const MixedVectorXcd& v) {
  const auto mu = scaled_symbol(spec, lambda);
  return apply_multiplier(spec, v,
                          [&](Index m) { return mu[static_cast<std::size_t>(m - 1)]; });
}

Eigen::VectorXcd semigroup_apply(const MultiplierSpec& spec, double t,
                                 const Eigen::VectorXcd& a) {
  if (!(t >= 0.0)) throw ParameterError("semigroup time must be >= 0");
  check_compressed(spec, a);
  const GammaSeq& g = spec.gamma();
  return apply_multiplier(spec.basis(), a, [&](Index m) {
    return Complex(semigroup_symbol(t, g.log_value(m)));
  });
}

MixedVectorXcd semigroup_apply(const MultiplierSpec& spec, double t,
                               const MixedVectorXcd& v) {
  if (!(t >= 0.0)) throw ParameterError("semigroup time must be >= 0");
  const GammaSeq& g = spec.gamma();
  return apply_multiplier(spec, v, [&](Index m) {
    return Complex(semigroup_symbol(t, g.log_value(m)));
  });
}

namespace {

template <typename Apply>
Eigen::MatrixXd dense_matrix(Index n, Apply&& apply) {
  Eigen::MatrixXd out(n, n);
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    unit(j) = 1.0;
    out.col(j) = apply(unit).real();
    unit(j) = 0.0;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd semigroup_matrix(const MultiplierSpec& spec, double t) {
  const auto n = static_cast<Index>(spec.basis().support().size());
  return dense_matrix(n, [&](const Eigen::VectorXcd& u) { return semigroup_apply(spec, t, u); });
}

Eigen::MatrixXd generator_matrix(const MultiplierSpec& spec) {
  const auto n = static_cast<Index>(spec.basis().support().size());
  return dense_matrix(n, [&](const Eigen::VectorXcd& u) { return apply_A(spec, u); });
}

bool semigroup_positivity_predicate(const MultiplierSpec& spec) {
  const GammaSeq& g = spec.gamma();
  const Index n = spec.size();
  switch (spec.basis().variant()) {
    case BasisVariant::standard:
      return true;
    case BasisVariant::even_twist:
      for (Index m = 2; m <= n; m += 2) {
        if (g.log_increment(m) > 0.0) return false;
      }
      return true;
    case BasisVariant::odd_twist:
      for (Index m = 1; m + 1 <= n; m += 2) {
        if (g.log_increment(m + 1) < 0.0) return false;
      }
      return true;
  }
  return true;
}

PositivityReport positivity_check(const MultiplierSpec& spec,
                                  std::span<const double> t_grid, double tolerance) {
  PositivityReport rep;
  rep.tolerance = tolerance;
  rep.predicate = semigroup_positivity_predicate(spec);
  for (double t : t_grid) {
    const Eigen::MatrixXd s = semigroup_matrix(spec, t);
    const double lo = s.minCoeff();
    rep.t_grid.push_back(t);
    rep.min_entry.push_back(lo);
    if (lo < -tolerance) rep.verdict = false;
  }
  return rep;
}

Eigen::VectorXcd imaginary_power_apply(const MultiplierSpec& spec, double t,
                                       const Eigen::VectorXcd& a) {
  if (!std::isfinite(t)) throw ParameterError("imaginary power: t must be finite");
  check_compressed(spec, a);
  const GammaSeq& g = spec.gamma();
  auto power = [&](Index m) { return unit_phase(t * g.log_value(m)); };
  if (spec.basis().variant() != BasisVariant::even_twist) {
    return apply_multiplier(spec.basis(), a, power);
  }
  const TwistedBasis& basis = spec.basis();
  const auto& support = basis.support();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(a.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index j = support[i];
    const auto pos = static_cast<Index>(i);
    if (j % 2 == 1) {
      out(pos) += power(j) * a(pos);
      continue;
    }
    const Index k = twist_pi_inverse(j);
    out(pos) += power(k) * a(pos);
    out(basis.position_of(k - 1)) += a(pos) * (power(k) - power(k - 1));
  }
  return out;
}

MixedVectorXcd imaginary_power_apply(const MultiplierSpec& spec, double t,
                                     const MixedVectorXcd& v) {
  if (v.layout() != spec.layout()) {
    throw StructuralError("vector layout differs from the operator layout");
  }
  return spec.basis().scatter(imaginary_power_apply(spec, t, spec.basis().gather(v)),
                              spec.layout());
}

BipCheck bip_pair_bound_check(const GammaSeq& gamma, const CSeq& c,
                              std::span<const double> t_grid, Index n_pairs) {
  if (2 * n_pairs > gamma.size() || 2 * n_pairs > c.size()) {
    throw ParameterError("bip check needs " + std::to_string(2 * n_pairs) +
                         " terms of gamma and c");
  }
  BipCheck out;
  for (Index m = 1; m <= n_pairs; ++m) {
    const double cm = c(2 * m);
    if (!(cm > 0.0 && cm < 0.125)) {
      throw ParameterError("c_" + std::to_string(2 * m) + " = " + std::to_string(cm) +
                           " lies outside (0, 1/8)");
    }
    const double inc = gamma.log_increment(2 * m);
    for (double t : t_grid) {
      if (t == 0.0) continue;
      const double diff = 2.0 * std::abs(std::sin(0.5 * t * inc));
      const double ratio = diff / (8.0 * std::abs(t) * cm);
      if (ratio > out.worst_ratio) out = {ratio, m, t};
    }
  }
  return out;
}

double bv_semigroup_closed_form(double alpha, double t) {
  const double a = std::exp2(alpha);
  return (a / (a - 1.0)) * (std::exp2(3.0 * alpha) + a - 2.0) * std::exp(-t);
}

BvBound bv_semigroup_bound(double alpha, double t, Index n) {
  if (!(alpha > 0.0)) throw ParameterError("bv bound: alpha must be positive");
  if (!(t > 0.0)) throw ParameterError("bv bound: t must be positive");
  if (n < 2) throw ParameterError("bv bound: need at least two terms");
  const GammaSeq g = twisted_lacunary(n);
  Eigen::VectorXd s(n);
  for (Index m = 1; m <= n; ++m) s(m - 1) = semigroup_symbol(t, alpha * g.log_value(m));
  return {tail_variation(s), bv_semigroup_closed_form(alpha, t)};
}

double multiplier_upper_bound(const Eigen::VectorXcd& mu) {
  if (mu.size() == 0) throw ParameterError("empty symbol");
  return kBasisConstantBound * (tail_variation(mu) + std::abs(mu(mu.size() - 1)));
}

NormEstimate operator_norm_lower(const TwistedBasis& basis, double p,
                                 const CompressedOperator& op, Index trials,
                                 std::uint64_t seed) {
  detail::check_exponent(p);
  const auto n = static_cast<Index>(basis.support().size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  auto ratio = [&](const Eigen::VectorXcd& x) {
    const double nx = basis.norm(x, p);
    return nx > 0.0 ? basis.norm(op(x), p) / nx : 0.0;
  };

  struct Start {
    double r;
    Eigen::VectorXcd x;
  };
  std::vector<Start> starts;
  const Index unit_count = std::min<Index>(n, 256);
  for (Index u = 0; u < unit_count; ++u) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    x(u * n / unit_count) = 1.0;
    starts.push_back({ratio(x), std::move(x)});
  }
  for (Index k = 0; k < trials; ++k) {
    Eigen::VectorXcd x(n);
    for (Index i = 0; i < n; ++i) x(i) = Complex(gauss(rng), gauss(rng));
    starts.push_back({ratio(x), std::move(x)});
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const Start& a, const Start& b) { return a.r > b.r; });
  starts.resize(std::min<std::size_t>(starts.size(), 3));

  NormEstimate best{starts.front().r, starts.front().x};
  const Complex dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::vector<Index> coords(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = i;
  for (Start& s : starts) {
    for (double step : {0.5, 0.25, 0.125, 0.0625}) {
      if (n > 64) std::shuffle(coords.begin(), coords.end(), rng);
      const Index sweep = std::min<Index>(n, 64);
      for (Index ci = 0; ci < sweep; ++ci) {
        const Index c = coords[static_cast<std::size_t>(ci)];
        const double scale = s.x.cwiseAbs().maxCoeff();
        for (const Complex& d : dirs) {
          Eigen::VectorXcd y = s.x;
          y(c) += step * scale * d;
          const double r = ratio(y);
          if (r > s.r) {
            s.r = r;
            s.x = std::move(y);
          }
        }
      }
    }
    if (s.r > best.value) best = {s.r, s.x};
  }
  best.witness /= basis.norm(best.witness, p);
  return best;
}

SectorialityReport sectoriality_probe(const MultiplierSpec& spec, double p,
                                      std::span<const double> angles,
                                      std::span<const double> radii, Index trials,
                                      std::uint64_t seed) {
  SectorialityReport rep;
  rep.p = p;
  rep.angles.assign(angles.begin(), angles.end());
  rep.radii.assign(radii.begin(), radii.end());
  const auto na = static_cast<Index>(angles.size());
  const auto nr = static_cast<Index>(radii.size());
  rep.lower = Eigen::MatrixXd::Constant(na, nr, std::nan(""));
  rep.bv_upper = Eigen::MatrixXd::Constant(na, nr, std::nan(""));
  rep.sup_lower.assign(angles.size(), 0.0);
  rep.sup_upper.assign(angles.size(), 0.0);
  const Index n = spec.size();
  for (Index ia = 0; ia < na; ++ia) {
    for (Index ir = 0; ir < nr; ++ir) {
      const double theta = angles[static_cast<std::size_t>(ia)];
      const double r = radii[static_cast<std::size_t>(ir)];
      Eigen::VectorXcd mu(n);
      try {
        const SpectralPoint lambda = SpectralPoint::off_sector(r, theta);
        for (Index m = 1; m <= n; ++m) {
          mu(m - 1) = scaled_resolvent_symbol(lambda, spec.gamma().log_value(m));
        }
      } catch (const SingularityError&) {
        rep.notes.push_back("singular at theta=" + std::to_string(theta) +
                            " r=" + std::to_string(r));
        continue;
      }
      const auto op = [&](const Eigen::VectorXcd& a) {
        return apply_multiplier(spec.basis(), a, [&](Index m) { return mu(m - 1); });
      };
      const NormEstimate est = operator_norm_lower(
          spec.basis(), p, op, trials,
          seed + static_cast<std::uint64_t>(ia * nr + ir));
      const double upper = multiplier_upper_bound(mu);
      rep.lower(ia, ir) = est.value;
      rep.bv_upper(ia, ir) = upper;
      auto& sl = rep.sup_lower[static_cast<std::size_t>(ia)];
      auto& su = rep.sup_upper[static_cast<std::size_t>(ia)];
      sl = std::max(sl, est.value);
      su = std::max(su, upper);
      rep.measured_K = std::max(rep.measured_K, est.value / bv_norm(mu));
    }
  }
  return rep;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError("loglog_slope needs two or more matching points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw ParameterError("loglog_slope: non-positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ParameterError("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace mrlab
