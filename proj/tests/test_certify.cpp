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

#include <doctest.h>

#include <random>

#include "mrlab/certify.hpp"

using namespace mrlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Eigen::VectorXd& a, double p) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += std::pow(std::abs(a(i)), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TEST_CASE("block exponent") {
  CHECK(block_exponent(4.0) == doctest::Approx(4.0));
  CHECK(block_exponent(3.0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(block_exponent(2.0), ParameterError);
  CHECK_THROWS_AS(block_exponent(1.5), ParameterError);
}

TEST_CASE("diagonal norm of the power family equals its scale") {
  const CSeq c = c_family(CFamily::power, 0.25, 60);
  const DiagonalNorm d = diagonal_norm(c, 4.0, 60);
  CHECK(d.value == doctest::Approx(c.scale()).epsilon(1e-13));
  CHECK(d.extremizer_value == doctest::Approx(d.value).epsilon(1e-12));
  CHECK(lp_norm(d.extremizer, 4.0) == doctest::Approx(1.0).epsilon(1e-13));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const Index dim = BlockLayout(60).dim();
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd a(dim);
    for (Index i = 0; i < dim; ++i) a(i) = g(rng);
    a /= lp_norm(a, 4.0);
    Eigen::VectorXd image(dim);
    for (Index m = 1; m <= dim; ++m) image(m - 1) = a(m - 1) * c(m);
    CHECK(norm_xp(image, 4.0) <= d.value * (1.0 + 1e-12));
  }
}

// Per block, max ||a c||_2 over the unit l_p sphere is ||c||_q; the
// maximizer |a_m| ~ |c_m|^{q/p} follows from a Lagrange condition.
TEST_CASE("block maximizers satisfy the Lagrange condition") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.001, 0.12);
  std::vector<double> vals(static_cast<std::size_t>(BlockLayout(12).dim()));
  for (double& v : vals) v = u(rng);
  const CSeq c = CSeq::custom(vals, CConstraint::open_eighth);
  for (double p : {2.5, 4.0, 9.0}) {
    const double q = 2.0 * p / (p - 2.0);
    double best = 0.0;
    for (Index k = 1; k <= 12; ++k) {
      const auto [first, last] = BlockLayout::bounds(k);
      const Index len = last - first + 1;
      Eigen::VectorXd cb(len);
      for (Index i = 0; i < len; ++i) cb(i) = c(first + i);
      Eigen::VectorXd a(len);
      for (Index i = 0; i < len; ++i) a(i) = std::pow(cb(i), q / p);
      a /= lp_norm(a, p);
      const double at_max = a.cwiseProduct(cb).norm();
      CHECK(at_max == doctest::Approx(lp_norm(cb, q)).epsilon(1e-12));
      // gradient of ||a c||_2^2 is parallel to the gradient of ||a||_p^p
      const Eigen::VectorXd grad_f = 2.0 * a.cwiseProduct(cb).cwiseProduct(cb);
      const Eigen::VectorXd grad_g = p * a.array().pow(p - 1.0).matrix();
      const double ratio = grad_f(0) / grad_g(0);
      CHECK((grad_f - ratio * grad_g).norm() <= 1e-12 * grad_f.norm());
      best = std::max(best, at_max);
    }
    CHECK(diagonal_norm(c, p, 12).value == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK_THROWS_AS(diagonal_norm(c, 4.0, 13), ParameterError);
  CHECK_THROWS_AS(diagonal_norm(c, 2.0, 5), ParameterError);
}

TEST_CASE("maximal regularity thresholds") {
  const CSeq power = c_family(CFamily::power, 0.25, 100);
  const CSeq pl = c_family(CFamily::powerlog, 0.25, 100);
  CHECK(mr_predicate(power, 4.0).mr);
  CHECK_FALSE(mr_predicate(power, 4.5).mr);
  CHECK(mr_predicate(pl, 3.9).mr);
  CHECK_FALSE(mr_predicate(pl, 4.0).mr);
  CHECK(mr_predicate(power, 1.5).mr);
  CHECK(mr_predicate(pl, 2.0).mr);

  for (CFamily f : {CFamily::power, CFamily::powerlog}) {
    bool seen_false = false;
    for (double p = 1.2; p <= 12.0; p += 0.1) {
      const bool mr = mr_predicate(f == CFamily::power ? power : pl, p).mr;
      CHECK_FALSE((seen_false && mr));
      seen_false = seen_false || !mr;
    }
  }
}

TEST_CASE("trend test on explicit sequences") {
  const Index dim = BlockLayout(200).dim();
  std::vector<double> fast(static_cast<std::size_t>(dim));
  std::vector<double> flat(static_cast<std::size_t>(dim), 0.05);
  for (Index m = 1; m <= dim; ++m) {
    fast[static_cast<std::size_t>(m - 1)] = 0.1 * std::exp2(-static_cast<double>(BlockLayout::block_of(m)));
  }
  CHECK(mr_predicate(CSeq::custom(fast, CConstraint::open_eighth), 3.0).mr);
  CHECK_FALSE(mr_predicate(CSeq::custom(flat, CConstraint::open_eighth), 3.0).mr);

  std::vector<double> rising(static_cast<std::size_t>(dim));
  for (Index m = 1; m <= dim; ++m) rising[static_cast<std::size_t>(m - 1)] = 0.1 * m / dim;
  CHECK_THROWS_AS(mr_predicate(CSeq::custom(rising, CConstraint::open_eighth), 3.0), ParameterError);
  std::vector<double> wide(static_cast<std::size_t>(dim), 0.2);
  CHECK_THROWS_AS(mr_predicate(CSeq::custom(wide, CConstraint::open_half), 3.0), ParameterError);
  CHECK_THROWS_AS(mr_predicate(CSeq::custom({0.0, 0.05, 0.05}, CConstraint::open_eighth), 3.0),
                  ParameterError);
}

TEST_CASE("interval plans") {
  const MRPlan a = plan_interval({1.5, 3.0, true, true});
  CHECK(a.right.family == CFamily::power);
  CHECK(a.right.alpha == doctest::Approx(1.0 / 6.0));
  CHECK(a.left.family == CFamily::power);
  CHECK(a.left.alpha == doctest::Approx(1.0 / 6.0));

  const MRPlan b = plan_interval({4.0 / 3.0, 4.0, false, true});
  CHECK(b.right.family == CFamily::power);
  CHECK(b.right.alpha == doctest::Approx(0.25));
  CHECK(b.left.family == CFamily::powerlog);
  CHECK(b.left.alpha == doctest::Approx(0.25));
  CHECK(b.predicted(4.0));
  CHECK_FALSE(b.predicted(4.0 / 3.0));
  CHECK(b.predicted(1.34));

  const MRPlan c = plan_interval({1.0, kInf, false, false});
  CHECK(c.right.family == CFamily::exponential);
  CHECK(c.left.family == CFamily::exponential);

  const MRPlan d = plan_interval({2.0, 2.0, true, true});
  CHECK(d.right.external_reference);
  CHECK(d.left.external_reference);
  CHECK(d.predicted(2.0));
  CHECK_FALSE(d.predicted(2.1));

  CHECK_THROWS_AS(plan_interval({2.5, 3.0, true, true}), ParameterError);
  CHECK_THROWS_AS(plan_interval({1.5, 1.8, true, true}), ParameterError);
}

TEST_CASE("predicted sets are intervals containing 2") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const double left = 1.0 + static_cast<double>(rng() % 20) / 20.0;
    const double right = 2.0 + static_cast<double>(rng() % 60) / 10.0;
    const IntervalSpec iv{left, right, left > 1.0 && rng() % 2 == 0, rng() % 2 == 0};
    const MRPlan plan = plan_interval(iv);
    CHECK(plan.predicted(2.0));
    bool inside = false;
    int changes = 0;
    for (int j = 21; j <= 160; ++j) {
      const double p = j / 20.0;
      const bool now = plan.predicted(p);
      CHECK(now == iv.contains(p));
      changes += now != inside;
      inside = now;
    }
    CHECK(changes <= 2);
  }
}

TEST_CASE("interval certificates") {
  const std::vector<IntervalSpec> cases = {{1.5, 3.0, true, true},
                                           {4.0 / 3.0, 4.0, false, true},
                                           {2.0, 2.0, true, true},
                                           {1.0, kInf, false, false},
                                           {2.0, 5.0, true, false}};
  for (const IntervalSpec& iv : cases) {
    const IntervalCertificate cert = certify_interval(iv, 0.1, 6.0);
    CHECK(cert.set_equal);
    CHECK(cert.grid.front().p == doctest::Approx(1.1));
    CHECK(cert.grid.back().p == doctest::Approx(6.0));
  }
  CHECK_THROWS_AS(certify_interval(cases[0], 0.3, 6.0), ParameterError);
}

TEST_CASE("dissipativity witness") {
  const CSeq c(CFamily::constant, 0.0, 0.1, BlockLayout(71).dim(), CConstraint::open_eighth);
  for (Index k : {20, 33}) {
    const DissipativityWitness w = dissipativity_witness(c, k);
    const auto [first, last] = BlockLayout::bounds(k);
    long double closed = 0.0L;
    Index count = 0;
    for (Index m = first; m <= last; ++m) {
      if (m % 4 != 1) continue;
      const long double gm = std::pow(1.5L, static_cast<long double>(m - 1));
      const long double gn = 1.5L * gm;
      closed += 0.25L * (gn - gm) * (gn - gm) / gm;
      ++count;
    }
    CHECK(static_cast<Index>(w.eligible.size()) == count);
    CHECK(w.closed_form == doctest::Approx(static_cast<double>(closed)).epsilon(1e-10));
    CHECK(w.pairing == doctest::Approx(w.closed_form).epsilon(1e-9));
    CHECK(w.pairing > 0.0);
    CHECK(w.x_norm_sq == doctest::Approx(count / 16.0).epsilon(1e-12));
  }

  const DissipativityOnset on = dissipativity_onset(c, 70);
  // first block from which every later block has more than 16 eligible indices
  Index k0 = 0;
  for (Index k = 1; k <= 70; ++k) {
    Index count = 0;
    const auto [first, last] = BlockLayout::bounds(k);
    for (Index m = first; m <= last; ++m) count += m % 4 == 1;
    if (count / 16.0 <= 1.0) {
      k0 = 0;
    } else if (k0 == 0) {
      k0 = k;
    }
  }
  CHECK(on.k0 == k0);
  CHECK(on.k0 == 67);

  CHECK_THROWS_AS(dissipativity_witness(c, 2), ParameterError);
  CHECK_THROWS_AS(dissipativity_witness(c, 72), ParameterError);
}

TEST_CASE("dissipativity across families") {
  for (CFamily f : {CFamily::power, CFamily::powerlog, CFamily::exponential}) {
    const CSeq c = c_family(f, 0.25, 40);
    for (Index k : {10, 25, 39}) CHECK(dissipativity_witness(c, k).pairing > 0.0);
    const Sandwich s = dissipativity_sandwich(c, 39);
    CHECK(s.min_ratio >= 1.0);
    CHECK(s.max_ratio <= 8.0 / 3.0);
  }
  for (double scale : {0.01, 0.05, 0.12}) {
    const CSeq c(CFamily::constant, 0.0, scale, BlockLayout(30).dim(), CConstraint::open_eighth);
    const Sandwich s = dissipativity_sandwich(c, 29);
    CHECK(s.min_ratio == doctest::Approx(2.0 / (1.0 - 2.0 * scale)).epsilon(1e-10));
    CHECK(dissipativity_witness(c, 20).pairing > 0.0);
  }
}
