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
#include <string>

#include "mrlab/gammaseq.hpp"

using namespace mrlab;

namespace {

/// gamma_N by the direct product prod (1 + 2c_m)/(1 - 2c_m) in long double.
long double product_gamma(const std::vector<double>& c, std::size_t n) {
  long double g = 1.0L;
  for (std::size_t m = 2; m <= n; ++m) {
    const long double cm = c[m - 1];
    g *= (1.0L + 2.0L * cm) / (1.0L - 2.0L * cm);
  }
  return g;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("constant half-ratios give geometric sequences") {
  const CSeq sixth(CFamily::constant, 0.0, 1.0 / 6.0, 12, CConstraint::open_half);
  const Eigen::VectorXd g = gamma_from_c(sixth).values();
  for (Index m = 1; m <= 12; ++m) CHECK(g(m - 1) == doctest::Approx(std::exp2(m - 1)).epsilon(1e-14));

  const CSeq tenth(CFamily::constant, 0.0, 0.1, 30, CConstraint::open_eighth);
  const Eigen::VectorXd h = gamma_from_c(tenth).values();
  CHECK(h(0) == 1.0);
  for (Index m = 2; m <= 30; ++m) CHECK(h(m - 1) / h(m - 2) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("half-ratios are recovered from gamma") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(1e-6, 0.5 - 1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(200);
    c[0] = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) c[i] = u(rng);
    const GammaSeq g = gamma_from_c(CSeq::custom(c, CConstraint::open_half));
    for (Index m = 2; m <= 200; ++m) {
      CHECK(std::abs(g.half_ratio(m) - c[static_cast<std::size_t>(m - 1)]) <= 1e-12);
    }
    const long double ref = std::log(product_gamma(c, 200));
    CHECK(std::abs(g.log_value(200) - static_cast<double>(ref)) <= 1e-10 * std::abs(static_cast<double>(ref)));
  }
}

TEST_CASE("out of range half-ratios name the index") {
  const std::string msg = message_of([] { (void)CSeq::custom({0.0, 0.1, 0.6}, CConstraint::open_half); });
  CHECK(msg.find("c_3") != std::string::npos);
  CHECK_THROWS_AS(CSeq::custom({0.0, 0.2}, CConstraint::open_eighth), ParameterError);
  CHECK_THROWS_AS(CSeq::custom({0.0, 0.0}, CConstraint::open_half), ParameterError);
}

TEST_CASE("overflowing values name the index") {
  const CSeq c(CFamily::constant, 0.0, 0.45, 2000, CConstraint::open_half);
  const GammaSeq g = gamma_from_c(c);
  const Index bad = g.first_overflow();
  REQUIRE(bad > 0);
  CHECK(std::isfinite(g.log_value(2000)));
  const std::string msg = message_of([&] { (void)g.values(); });
  CHECK(msg.find("gamma_" + std::to_string(bad)) != std::string::npos);
  CHECK_THROWS_AS(g.value(bad), RangeError);
  CHECK_NOTHROW(g.value(bad - 1));
}

TEST_CASE("twisted lacunary sequence") {
  const GammaSeq g = twisted_lacunary(40);
  const Eigen::VectorXd head = g.head(4).values();
  CHECK(head(0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(head(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(head(2) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(head(3) == doctest::Approx(8.0).epsilon(1e-15));
  for (Index m = 1; m <= 20; ++m) {
    const double odd = g.value(2 * m - 1);
    const double even = g.value(2 * m);
    CHECK(0.5 * (odd - even) / (odd + even) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(even <= odd);
    if (m > 1) CHECK(even > g.value(2 * m - 2));
  }
  for (Index m = 2; m <= 40; ++m) {
    CHECK(twisted_lacunary_log_increment(m) == doctest::Approx(std::log(g.value(m) / g.value(m - 1))));
  }
}

TEST_CASE("power family stays in range and is block constant") {
  const CSeq c = c_family(CFamily::power, 0.25, 100);
  for (Index m = 2; m <= c.size(); ++m) {
    CHECK(c(m) > 0.0);
    CHECK(c(m) < 0.125);
    CHECK(c(m) == c.block_value(BlockLayout::block_of(m)));
  }
  CHECK_THROWS_AS(c_family(CFamily::power, 0.5, 10), ParameterError);
  CHECK_THROWS_AS(c_family(CFamily::power, 0.0, 10), ParameterError);
}

TEST_CASE("powerlog peak") {
  Index best = 1;
  double best_v = 0.0;
  for (Index k = 1; k <= 1000; ++k) {
    const double v = std::pow(static_cast<double>(k), -0.25) * std::log(k + 1.0);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  CHECK(powerlog_peak_block(0.25) == best);
  CHECK(best >= 40);
  CHECK(best <= 70);
  const CSeq c = c_family(CFamily::powerlog, 0.25, 200);
  CHECK(c.block_value(best) == doctest::Approx(1.0 / 16.0));
  CHECK(c.decreasing_from() == BlockLayout::bounds(best).first);
}

TEST_CASE("resolvent gap maximizer") {
  const GapMax g = resolvent_gap_max(2.0, 4.0);
  CHECK(g.t_star == doctest::Approx(std::sqrt(8.0)));
  CHECK(g.d_star == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  double grid_best = 0.0;
  double lib_best = 0.0;
  for (int i = 1; i <= 1000000; ++i) {
    const double t = 1e-4 * i;
    grid_best = std::max(grid_best, t * (1.0 / (t + 2.0) - 1.0 / (t + 4.0)));
    lib_best = std::max(lib_best, resolvent_gap(t, 2.0, 4.0));
  }
  CHECK(std::abs(grid_best - g.d_star) <= 1e-8);
  CHECK(lib_best <= g.d_star + 1e-15);

  // d at t = gamma_cur equals the half-ratio
  CHECK(resolvent_gap(4.0, 2.0, 4.0) == doctest::Approx(0.5 * (4.0 - 2.0) / (4.0 + 2.0)));
  const GapMax scaled = resolvent_gap_max(2e6, 4e6);
  CHECK(scaled.d_star == doctest::Approx(g.d_star).epsilon(1e-12));
  CHECK(scaled.t_star == doctest::Approx(1e6 * g.t_star));
  CHECK_THROWS_AS(resolvent_gap_max(4.0, 2.0), ParameterError);
  CHECK_THROWS_AS(resolvent_gap_max(0.0, 2.0), ParameterError);
}

TEST_CASE("membership sums") {
  const CSeq power = c_family(CFamily::power, 0.25, 2000);
  const std::vector<double> flat = membership_block_qsup(power, 4.0);
  CHECK(flat.back() == doctest::Approx(flat.front()).epsilon(1e-12));

  const CSeq pl = c_family(CFamily::powerlog, 0.25, 10000);
  const std::vector<double> grow = membership_block_qsup(pl, 4.0);
  CHECK(grow[9999] / grow[99] == doctest::Approx(2.0).epsilon(0.01));

  const std::vector<double> fast = membership_block_qsup(power, 6.0);
  CHECK(fast[1999] - fast[999] <= 1e-6);

  // the block-constant shortcut against a direct block sum
  const CSeq custom = CSeq::custom(
      [&] {
        std::vector<double> v(static_cast<std::size_t>(BlockLayout(30).dim()));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = power(static_cast<Index>(i) + 1);
        return v;
      }(),
      CConstraint::open_eighth);
  const std::vector<double> direct = membership_block_qsup(custom, 4.0);
  for (std::size_t k = 0; k < direct.size(); ++k) {
    CHECK(direct[k] == doctest::Approx(flat[k]).epsilon(1e-12));
  }
}
