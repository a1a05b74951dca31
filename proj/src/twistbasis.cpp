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

#include "mrlab/twistbasis.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace mrlab {
namespace {

Index block_start(Index k) { return (k - 1) * k / 2 + 1; }

/// Number of b_k that are <= x.
Index count_b_upto(Index x) {
  if (x < 2) return 0;
  const Index j = BlockLayout::block_of(x);
  if (j < 2) return 0;
  return (j - 2) + (twist_b(j - 2) <= x ? 1 : 0);
}

/// Number of even numbers <= x that are not some b_k.
Index count_free_evens_upto(Index x) { return x / 2 - count_b_upto(x); }

}  // namespace

Index twist_b(Index k) {
  if (k < 0) throw ParameterError("twist_b: negative index");
  const Index s = block_start(k + 2);
  return s % 2 == 0 ? s : s + 1;
}

bool is_twist_b(Index j) {
  if (j < 2 || j % 2 != 0) return false;
  const Index block = BlockLayout::block_of(j);
  return block >= 2 && twist_b(block - 2) == j;
}

Index twist_pi(Index m) {
  if (m < 1) throw ParameterError("twist_pi: index must be positive");
  if (m % 2 == 1) return m;
  if (m % 4 == 2) return twist_b((m - 2) / 4);
  // pi(4k) is the k-th even number that is not a b; the greedy minimum in the
  // definition always lands there because pi(4j+2) only consumes b's.
  const Index k = m / 4;
  Index x = 2 * k;
  for (Index c = count_free_evens_upto(x); c < k; c = count_free_evens_upto(x)) {
    x += 2 * (k - c);
  }
  while (is_twist_b(x)) x -= 2;
  return x;
}

Index twist_pi_inverse(Index j) {
  if (j < 1) throw ParameterError("twist_pi_inverse: index must be positive");
  if (j % 2 == 1) return j;
  if (is_twist_b(j)) return 4 * (BlockLayout::block_of(j) - 2) + 2;
  return 4 * count_free_evens_upto(j);
}

TwistPerm TwistPerm::build(Index n) {
  if (n < 2) throw ParameterError("TwistPerm: size must be at least 2");
  TwistPerm perm;
  perm.table_.resize(static_cast<std::size_t>(n));
  std::vector<Index> evens;
  evens.reserve(static_cast<std::size_t>(n / 2));
  for (Index m = 1; m <= n; ++m) {
    const Index v = twist_pi(m);
    perm.table_[static_cast<std::size_t>(m - 1)] = v;
    if (m % 2 == 0) {
      evens.push_back(v);
      if (m % 4 == 2) perm.b_list_.push_back(v);
    }
  }
  std::sort(evens.begin(), evens.end());
  if (std::adjacent_find(evens.begin(), evens.end()) != evens.end()) {
    throw RangeError("TwistPerm: permutation table is not injective");
  }
  return perm;
}

const char* to_string(BasisVariant v) {
  switch (v) {
    case BasisVariant::standard: return "standard";
    case BasisVariant::even_twist: return "even-twist";
    case BasisVariant::odd_twist: return "odd-twist";
  }
  return "?";
}

BasisVariant basis_variant_from_string(const std::string& s) {
  if (s == "standard" || s == "e") return BasisVariant::standard;
  if (s == "even-twist" || s == "f") return BasisVariant::even_twist;
  if (s == "odd-twist") return BasisVariant::odd_twist;
  throw ParameterError("unknown basis variant '" + s + "'");
}

Index closed_size(Index n, BasisVariant variant) {
  if (n < 1) throw ParameterError("closed_size: size must be positive");
  // Odd-twist f_m for odd m reaches e_{pi(m+1)}, which needs f_{m+1}.
  if (variant == BasisVariant::odd_twist && n % 2 == 1) return n + 1;
  return n;
}

TwistedBasis::TwistedBasis(BasisVariant variant, Index n)
    : variant_(variant),
      n_(closed_size(n, variant)),
      perm_(TwistPerm::build(std::max<Index>(n_, 2))) {
  support_.reserve(static_cast<std::size_t>(n_));
  for (Index m = 1; m <= n_; ++m) {
    const bool twisted = variant_ != BasisVariant::standard && m % 2 == 0;
    support_.push_back(twisted ? perm_(m) : m);
  }
  std::sort(support_.begin(), support_.end());
  pos_lookup_.assign(static_cast<std::size_t>(support_.back() + 1), -1);
  support_blocks_.reserve(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    pos_lookup_[static_cast<std::size_t>(support_[i])] = static_cast<std::int32_t>(i);
    support_blocks_.push_back(BlockLayout::block_of(support_[i]));
  }
  own_pos_.resize(static_cast<std::size_t>(n_));
  for (Index m = 1; m <= n_; ++m) {
    const bool twisted = variant_ != BasisVariant::standard && m % 2 == 0;
    own_pos_[static_cast<std::size_t>(m - 1)] = position_of(twisted ? perm_(m) : m);
  }
}

Index TwistedBasis::position_of(Index j) const {
  if (j < 1 || j >= static_cast<Index>(pos_lookup_.size())) return -1;
  return pos_lookup_[static_cast<std::size_t>(j)];
}

Eigen::VectorXcd TwistedBasis::f_from_e(const Eigen::VectorXcd& a) const {
  if (a.size() != n_) throw StructuralError("f_from_e: compressed length mismatch");
  Eigen::VectorXcd b(n_);
  switch (variant_) {
    case BasisVariant::standard:
      b = a;
      break;
    case BasisVariant::even_twist:
      for (Index m = 1; m <= n_; ++m) {
        const Complex own = a(own_position(m));
        if (m % 2 == 0) {
          b(m - 1) = own;
        } else {
          b(m - 1) = m + 1 <= n_ ? own - a(own_position(m + 1)) : own;
        }
      }
      break;
    case BasisVariant::odd_twist:
      for (Index m = 1; m <= n_; ++m) {
        const Complex own = a(own_position(m));
        b(m - 1) = m % 2 == 1 ? own : own - a(own_position(m - 1));
      }
      break;
  }
  return b;
}

Eigen::VectorXcd TwistedBasis::e_from_f(const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw StructuralError("e_from_f: coefficient length mismatch");
  Eigen::VectorXcd a(n_);
  switch (variant_) {
    case BasisVariant::standard:
      a = b;
      break;
    case BasisVariant::even_twist:
      for (Index m = 1; m <= n_; ++m) {
        if (m % 2 == 0) {
          a(own_position(m)) = b(m - 1);
        } else {
          a(own_position(m)) = m + 1 <= n_ ? b(m - 1) + b(m) : b(m - 1);
        }
      }
      break;
    case BasisVariant::odd_twist:
      for (Index m = 1; m <= n_; ++m) {
        a(own_position(m)) = m % 2 == 1 ? b(m - 1) : b(m - 1) + b(m - 2);
      }
      break;
  }
  return a;
}

Eigen::VectorXcd TwistedBasis::gather(const MixedVectorXcd& v) const {
  if (v.dim() < support_.back()) {
    throw StructuralError("truncation needs dimension " +
                          std::to_string(support_.back()) + ", vector has " +
                          std::to_string(v.dim()));
  }
  for (Index j = 1; j <= v.dim(); ++j) {
    if (v.coeff(j) != Complex(0) && position_of(j) < 0) {
      throw StructuralError("index " + std::to_string(j) +
                            " lies outside the span of the truncated basis");
    }
  }
  Eigen::VectorXcd a(n_);
  for (Index i = 0; i < n_; ++i) a(i) = v.coeff(support_[static_cast<std::size_t>(i)]);
  return a;
}

Eigen::VectorXcd TwistedBasis::gather(const SparseVectorXcd& v) const {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n_);
  for (SparseVectorXcd::InnerIterator it(v); it; ++it) {
    const Index j = it.index() + 1;
    const Index pos = position_of(j);
    if (pos < 0) {
      if (it.value() == Complex(0)) continue;
      throw StructuralError("index " + std::to_string(j) +
                            " lies outside the span of the truncated basis");
    }
    a(pos) = it.value();
  }
  return a;
}

MixedVectorXcd TwistedBasis::scatter(const Eigen::VectorXcd& a,
                                     const BlockLayout& layout) const {
  if (layout.dim() < support_.back()) {
    throw StructuralError("scatter: layout too small for the truncation support");
  }
  MixedVectorXcd v(layout);
  for (Index i = 0; i < n_; ++i) v.coeff(support_[static_cast<std::size_t>(i)]) = a(i);
  return v;
}

SparseVectorXcd TwistedBasis::scatter_sparse(const Eigen::VectorXcd& a, Index dim) const {
  if (dim < support_.back()) {
    throw StructuralError("scatter_sparse: dimension too small for the support");
  }
  SparseVectorXcd v(dim);
  v.reserve(n_);
  for (Index i = 0; i < n_; ++i) {
    if (a(i) != Complex(0)) v.insert(support_[static_cast<std::size_t>(i)] - 1) = a(i);
  }
  return v;
}

Eigen::VectorXcd TwistedBasis::f_from_e(const MixedVectorXcd& v) const {
  return f_from_e(gather(v));
}

MixedVectorXcd TwistedBasis::e_from_f(const Eigen::VectorXcd& b,
                                      const BlockLayout& layout) const {
  return scatter(e_from_f(b), layout);
}

double TwistedBasis::norm(const Eigen::VectorXcd& a, double p) const {
  detail::check_exponent(p);
  std::vector<std::pair<Index, double>> block_sq(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    block_sq[i] = {support_blocks_[i], std::norm(a(static_cast<Index>(i)))};
  }
  return detail::combine_blocks(block_sq, p);
}

namespace {

/// Witnesses of length `len` (zero padded to n), generated from (seed, len)
/// only so that families for different n are nested.
std::vector<Eigen::VectorXcd> witnesses_of_length(Index len, Index n,
                                                  std::uint64_t seed,
                                                  Index n_random) {
  std::vector<Eigen::VectorXcd> out;
  Eigen::VectorXcd ones = Eigen::VectorXcd::Zero(n);
  ones.head(len).setOnes();
  out.push_back(ones);
  // sum (f_{2j} - f_{2j-1}): the coefficient pattern of sum e_{pi(2j)}.
  Eigen::VectorXcd pairs = Eigen::VectorXcd::Zero(n);
  for (Index m = 2; m <= len; m += 2) {
    pairs(m - 1) = 1.0;
    pairs(m - 2) = -1.0;
  }
  out.push_back(pairs);
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(len)));
  std::normal_distribution<double> gauss;
  for (Index r = 0; r < n_random; ++r) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    for (Index i = 0; i < len; ++i) v(i) = Complex(gauss(rng), 0.0);
    out.push_back(v);
  }
  return out;
}

/// Block-concentrated witnesses sum_{4j+1 in B_k} (f_{4j+2} - f_{4j+1}),
/// one per block the truncation reaches.
std::vector<Eigen::VectorXcd> block_witnesses(Index n) {
  std::vector<Eigen::VectorXcd> out;
  for (Index k = 1; BlockLayout::bounds(k).first <= n; ++k) {
    const auto [first, last] = BlockLayout::bounds(k);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    bool any = false;
    for (Index i = first; i <= last; ++i) {
      if (i % 4 == 1 && i + 1 <= n) {
        v(i - 1) = -1.0;
        v(i) = 1.0;
        any = true;
      }
    }
    if (any) out.push_back(v);
  }
  return out;
}

double ratio(const TwistedBasis& basis, const Eigen::VectorXcd& a,
             const Eigen::VectorXd& signs, double p, double denom) {
  const Eigen::VectorXcd b = a.cwiseProduct(signs.cast<Complex>());
  return basis.norm(basis.e_from_f(b), p) / denom;
}

}  // namespace

UncondResult unconditional_constant(BasisVariant variant, Index n, double p,
                                    UncondMode mode, std::uint64_t seed,
                                    Index trials) {
  detail::check_exponent(p);
  const TwistedBasis basis(variant, n);
  const Index N = basis.size();
  if (mode == UncondMode::exact && N > 14) {
    throw ParameterError("unconditional_constant: exact mode needs N <= 14, got " +
                         std::to_string(N));
  }
  UncondResult best;
  best.witness_coeffs = Eigen::VectorXcd::Zero(N);
  best.witness_signs = Eigen::VectorXd::Ones(N);

  std::vector<Eigen::VectorXcd> family;
  if (mode == UncondMode::exact) {
    for (Index len = 1; len <= N; ++len) {
      auto w = witnesses_of_length(len, N, seed, 2);
      family.insert(family.end(), w.begin(), w.end());
    }
  } else {
    family = witnesses_of_length(N, N, seed, trials);
  }
  for (auto& w : block_witnesses(N)) family.push_back(std::move(w));

  auto consider = [&](const Eigen::VectorXcd& a, const Eigen::VectorXd& eps, double r) {
    if (r > best.estimate) {
      best.estimate = r;
      best.witness_coeffs = a;
      best.witness_signs = eps;
    }
  };

  if (mode == UncondMode::exact) {
    for (const auto& a : family) {
      const Eigen::VectorXcd base = basis.e_from_f(a);
      const double denom = basis.norm(base, p);
      if (denom == 0.0) continue;
      // Gray-code walk: flipping eps_m changes the e-vector by -2 eps_m a_m f_m.
      Eigen::VectorXd eps = Eigen::VectorXd::Ones(N);
      Eigen::VectorXcd y = base;
      const std::uint64_t count = std::uint64_t{1} << N;
      for (std::uint64_t g = 1; g < count; ++g) {
        const int bit = __builtin_ctzll(g);
        Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(N);
        delta(bit) = -2.0 * eps(bit) * a(bit);
        y += basis.e_from_f(delta);
        eps(bit) = -eps(bit);
        ++best.patterns_tested;
        consider(a, eps, basis.norm(y, p) / denom);
      }
    }
    return best;
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin;
  std::uniform_int_distribution<Index> pick(0, N - 1);
  for (const auto& start : family) {
    Eigen::VectorXcd a = start;
    double denom = basis.norm(basis.e_from_f(a), p);
    if (denom == 0.0) continue;
    std::vector<Eigen::VectorXd> sign_candidates;
    Eigen::VectorXd flip_odd = Eigen::VectorXd::Ones(N);
    Eigen::VectorXd flip_even = Eigen::VectorXd::Ones(N);
    for (Index m = 1; m <= N; ++m) (m % 2 ? flip_odd : flip_even)(m - 1) = -1.0;
    sign_candidates.push_back(flip_odd);
    sign_candidates.push_back(flip_even);
    for (int r = 0; r < 16; ++r) {
      Eigen::VectorXd eps(N);
      for (Index i = 0; i < N; ++i) eps(i) = coin(rng) ? 1.0 : -1.0;
      sign_candidates.push_back(eps);
    }
    Eigen::VectorXd eps = sign_candidates.front();
    double current = 0.0;
    for (const auto& cand : sign_candidates) {
      const double r = ratio(basis, a, cand, p, denom);
      ++best.patterns_tested;
      if (r > current) {
        current = r;
        eps = cand;
      }
    }
    // Coordinate ascent on a for the chosen signs, then single sign flips.
    double step = 0.5;
    for (int sweep = 0; sweep < 4; ++sweep, step *= 0.5) {
      const Index coords = std::min<Index>(N, 64);
      for (Index c = 0; c < coords; ++c) {
        const Index i = N <= 64 ? c : pick(rng);
        const double scale = std::max(1e-3, a.cwiseAbs().maxCoeff());
        for (const Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
          Eigen::VectorXcd trial = a;
          trial(i) += step * scale * dir;
          const double d = basis.norm(basis.e_from_f(trial), p);
          if (d == 0.0) continue;
          const double r = ratio(basis, trial, eps, p, d);
          if (r > current) {
            current = r;
            a = trial;
            denom = d;
          }
        }
      }
      for (Index c = 0; c < std::min<Index>(N, 64); ++c) {
        const Index i = N <= 64 ? c : pick(rng);
        eps(i) = -eps(i);
        const double r = ratio(basis, a, eps, p, denom);
        ++best.patterns_tested;
        if (r > current) current = r; else eps(i) = -eps(i);
      }
    }
    consider(a, eps, current);
  }
  return best;
}

}  // namespace mrlab
