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

#include "mrlab/blockspace.hpp"
#include "oracles.hpp"

using namespace mrlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXcd random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("unit vectors have norm one") {
  const BlockLayout layout(6);
  for (double p : {1.5, 2.0, 4.0, kInf}) {
    for (Index m = 1; m <= layout.dim(); ++m) {
      CHECK(norm_xp(MixedVectorXcd::unit(layout, m), p) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("worked norm examples") {
  const BlockLayout layout(2);
  Eigen::VectorXcd a(3);
  a << 0.0, 3.0, 4.0;
  CHECK(norm_xp(MixedVectorXcd(layout, a), 3.0) == doctest::Approx(5.0).epsilon(1e-14));
  a << 1.0, 1.0, 0.0;
  CHECK(norm_xp(MixedVectorXcd(layout, a), kInf) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm agrees with the walking oracle") {
  std::mt19937_64 rng(11);
  for (double p : {1.25, 2.0, 3.0, 7.0, kInf}) {
    for (Index n : {1, 5, 10, 37, 120}) {
      const Eigen::VectorXcd v = random_vector(n, rng);
      const double ref = oracle::nested_norm(v, p);
      CHECK(norm_xp(v, p) == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}

TEST_CASE("one entry per block gives the plain l_p norm") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const BlockLayout layout(30);
  for (double p : {1.5, 3.0, 6.0}) {
    MixedVectorXcd v(layout);
    Eigen::VectorXd plain(30);
    for (Index k = 1; k <= 30; ++k) {
      const auto [first, last] = BlockLayout::bounds(k);
      plain(k - 1) = g(rng);
      v.coeff(first + (k % (last - first + 1))) = plain(k - 1);
    }
    double s = 0.0;
    for (Index k = 0; k < 30; ++k) s += std::pow(std::abs(plain(k)), p);
    CHECK(norm_xp(v, p) == doctest::Approx(std::pow(s, 1.0 / p)).epsilon(1e-13));
  }
}

TEST_CASE("p = 2 is the Euclidean norm") {
  std::mt19937_64 rng(5);
  for (Index n : {3, 28, 210}) {
    const Eigen::VectorXcd v = random_vector(n, rng);
    CHECK(std::abs(norm_xp(v, 2.0) - v.norm()) <= 1e-12 * v.norm());
  }
}

TEST_CASE("sparse and indexed forms match the dense norm") {
  std::mt19937_64 rng(9);
  const BlockLayout layout(12);
  for (double p : {1.5, 2.5, kInf}) {
    Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(layout.dim());
    SparseVectorXcd sparse(layout.dim());
    std::vector<Index> idx;
    std::vector<Complex> vals;
    for (Index m = layout.dim(); m >= 1; m -= 3) {
      const Complex z(static_cast<double>(rng() % 7) - 3.0, 0.5);
      dense(m - 1) = z;
      sparse.coeffRef(m - 1) = z;
      idx.push_back(m);
      vals.push_back(z);
    }
    const double ref = norm_xp(dense, p);
    CHECK(norm_xp(sparse, p) == doctest::Approx(ref).epsilon(1e-14));
    const Eigen::Map<const Eigen::VectorXcd> mv(vals.data(), static_cast<Index>(vals.size()));
    CHECK(norm_xp_at(std::span<const Index>(idx), mv, p) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("norm axioms on random vectors") {
  std::mt19937_64 rng(21);
  for (double p : {1.1, 2.0, 5.0, kInf}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXcd x = random_vector(45, rng);
      const Eigen::VectorXcd y = random_vector(45, rng);
      const Complex s(-2.5, 1.25);
      CHECK(norm_xp(x + y, p) <= norm_xp(x, p) + norm_xp(y, p) + 1e-12);
      CHECK(norm_xp(Eigen::VectorXcd(s * x), p) == doctest::Approx(std::abs(s) * norm_xp(x, p)));
    }
  }
}

TEST_CASE("invalid inputs are rejected") {
  const BlockLayout layout(3);
  CHECK_THROWS_AS(norm_xp(MixedVectorXcd::unit(layout, 1), 1.0), ParameterError);
  CHECK_THROWS_AS(norm_xp(MixedVectorXcd::unit(layout, 1), 0.5), ParameterError);
  CHECK_THROWS_AS(norm_xp(MixedVectorXcd::unit(layout, 1), std::nan("")), ParameterError);
  CHECK_THROWS_AS(MixedVectorXcd(layout, Eigen::VectorXcd::Zero(5)), StructuralError);
  Eigen::VectorXcd bad = Eigen::VectorXcd::Zero(6);
  bad(2) = Complex(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(MixedVectorXcd(layout, bad), ParameterError);
  CHECK_THROWS_AS(BlockLayout(0), ParameterError);
}

TEST_CASE("block membership matches the walking oracle") {
  for (Index m = 1; m <= 5000; ++m) CHECK(BlockLayout::block_of(m) == oracle::block_of(m));
  CHECK(BlockLayout::covering(1).n_blocks() == 1);
  CHECK(BlockLayout::covering(7).n_blocks() == 4);
  CHECK(BlockLayout::covering(10).n_blocks() == 4);
}

TEST_CASE("block q-sup examples") {
  Eigen::VectorXd c(BlockLayout(40).dim());
  for (Index m = 1; m <= c.size(); ++m) c(m - 1) = std::pow(BlockLayout::block_of(m), -0.25);
  CHECK(norm_block_qsup(c, 4.0) == doctest::Approx(1.0).epsilon(1e-13));

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(10);
  CHECK(norm_block_qsup(ones, 2.0) == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::VectorXd single(1);
  single << 0.3;
  CHECK(norm_block_qsup(single, 7.0) == doctest::Approx(0.3).epsilon(1e-14));

  CHECK_THROWS_AS(norm_block_qsup(Eigen::VectorXd(), 2.0), ParameterError);
  CHECK_THROWS_AS(norm_block_qsup(ones, 1.0), ParameterError);
}

TEST_CASE("Hoelder inequality inside blocks") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  const BlockLayout layout(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = 2.0 + 6.0 * static_cast<double>(rng() % 1000) / 1000.0 + 0.01;
    const double q = 2.0 * p / (p - 2.0);
    Eigen::VectorXd a(layout.dim());
    Eigen::VectorXd c(layout.dim());
    for (Index i = 0; i < a.size(); ++i) {
      a(i) = g(rng);
      c(i) = g(rng);
    }
    double lp = 0.0;
    for (Index i = 0; i < a.size(); ++i) lp += std::pow(std::abs(a(i)), p);
    lp = std::pow(lp, 1.0 / p);
    const Eigen::VectorXd ac = a.cwiseProduct(c);
    CHECK(norm_xp(ac, p) <= norm_block_qsup(c, q) * lp * (1.0 + 1e-12));
  }
}

TEST_CASE("bounded variation norm") {
  Eigen::VectorXd s(4);
  s << 1.0, 0.0, 1.0, 0.0;
  CHECK(bv_norm(s) == doctest::Approx(4.0));
  CHECK(tail_variation(s) == doctest::Approx(3.0));
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(9, -0.7);
  CHECK(bv_norm(c) == doctest::Approx(0.7));
  CHECK_THROWS_AS(bv_norm(Eigen::VectorXd()), ParameterError);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(12);
    Eigen::VectorXd y(12);
    for (Index i = 0; i < 12; ++i) {
      x(i) = g(rng);
      y(i) = g(rng);
    }
    CHECK(bv_norm(Eigen::VectorXd(x + y)) <= bv_norm(x) + bv_norm(y) + 1e-12);
    Eigen::VectorXd rep(13);
    rep << x, x(11);
    CHECK(bv_norm(rep) == doctest::Approx(bv_norm(x)));
  }
}

TEST_CASE("spread and compress") {
  std::mt19937_64 rng(4);
  const BlockLayout source(6);
  const SpreadMap ident = SpreadMap::strided(source.dim(), 1);
  const MixedVectorXcd v(source, random_vector(source.dim(), rng));
  const MixedVectorXcd same = spread(v, ident, source);
  CHECK((same.coeffs() - v.coeffs()).norm() == 0.0);

  const SpreadMap two = SpreadMap::strided(source.dim(), 2);
  CHECK(two.gap() == 2);
  const BlockLayout target = BlockLayout::covering(two.positions().back());
  const MixedVectorXcd back = compress(spread(v, two, target), two, source);
  CHECK((back.coeffs() - v.coeffs()).norm() == 0.0);

  CHECK_THROWS_AS(SpreadMap({3, 2}), ParameterError);
  CHECK_THROWS_AS(spread(v, two, source), StructuralError);
}

// Zero insertion with gap M changes the norm by at most a factor depending on
// M only; the ratio may fall below 1 (all-ones vectors already do).
TEST_CASE("spread ratios stay bounded on both sides") {
  std::mt19937_64 rng(8);
  const double bound = 4.0;
  double lo = 1e300;
  double hi = 0.0;
  for (Index n : {5, 10, 20, 40}) {
    const BlockLayout source(n);
    const SpreadMap two = SpreadMap::strided(source.dim(), 2);
    const BlockLayout target = BlockLayout::covering(two.positions().back());
    for (double p : {1.5, 3.0, 6.0}) {
      std::vector<Eigen::VectorXcd> samples = {Eigen::VectorXcd::Ones(source.dim())};
      for (int t = 0; t < 20; ++t) samples.push_back(random_vector(source.dim(), rng));
      for (const auto& s : samples) {
        const MixedVectorXcd v(source, s);
        const double r = norm_xp(spread(v, two, target), p) / norm_xp(v, p);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  CHECK(lo >= 1.0 / bound);
  CHECK(hi <= bound);
}
