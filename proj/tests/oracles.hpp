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

// Reference implementations used only by the tests. They follow the
// definitions literally and share no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Index = std::int64_t;
using Complex = std::complex<double>;

/// Block sizes 1, 2, 3, ... walked one entry at a time.
inline double nested_norm(const std::vector<Complex>& v, double p) {
  std::vector<double> blocks;
  std::size_t size = 1;
  std::size_t filled = 0;
  double sq = 0.0;
  for (const Complex& x : v) {
    sq += std::norm(x);
    if (++filled == size) {
      blocks.push_back(std::sqrt(sq));
      sq = 0.0;
      filled = 0;
      ++size;
    }
  }
  if (filled > 0) blocks.push_back(std::sqrt(sq));
  if (std::isinf(p)) return blocks.empty() ? 0.0 : *std::max_element(blocks.begin(), blocks.end());
  double s = 0.0;
  for (double b : blocks) s += std::pow(b, p);
  return std::pow(s, 1.0 / p);
}

inline double nested_norm(const Eigen::VectorXcd& v, double p) {
  return nested_norm(std::vector<Complex>(v.data(), v.data() + v.size()), p);
}

/// Block number by walking the blocks.
inline Index block_of(Index m) {
  Index k = 1;
  Index last = 1;
  while (last < m) {
    ++k;
    last += k;
  }
  return k;
}

/// First even number of each block B_2, B_3, ...: at least `count` of them
/// and all that are <= limit.
inline std::vector<Index> first_evens(Index limit, std::size_t count = 0) {
  std::vector<Index> b;
  Index first = 2;  // B_2 = {2, 3}
  for (Index k = 2; first <= limit || b.size() < count; ++k) {
    const Index last = first + k - 1;
    for (Index j = first; j <= last; ++j) {
      if (j % 2 == 0) {
        b.push_back(j);
        break;
      }
    }
    first = last + 1;
  }
  return b;
}

/// pi(1..n) by the greedy rule: odd m fixed, pi(4k+2) = b_k, pi(4k) the
/// smallest even number that is neither some b nor already used.
inline std::vector<Index> greedy_pi(Index n) {
  const std::vector<Index> b = first_evens(4 * n + 16, static_cast<std::size_t>(n / 4 + 1));
  const std::set<Index> reserved(b.begin(), b.end());
  std::set<Index> used;
  std::vector<Index> table(static_cast<std::size_t>(n));
  Index cursor = 2;
  for (Index m = 1; m <= n; ++m) {
    Index v;
    if (m % 2 == 1) {
      v = m;
    } else if (m % 4 == 2) {
      v = b[static_cast<std::size_t>((m - 2) / 4)];
    } else {
      while (reserved.count(cursor) || used.count(cursor)) cursor += 2;
      v = cursor;
    }
    if (m % 2 == 0) used.insert(v);
    table[static_cast<std::size_t>(m - 1)] = v;
  }
  return table;
}

enum class Variant { standard, even, odd };

/// Columns f_1..f_n in e-coordinates (rows 1..dim).
inline Eigen::MatrixXd basis_matrix(Variant v, Index n, Index dim) {
  const std::vector<Index> pi = greedy_pi(n + 1);
  auto P = [&](Index m) { return pi[static_cast<std::size_t>(m - 1)]; };
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, n);
  for (Index m = 1; m <= n; ++m) {
    switch (v) {
      case Variant::standard:
        f(m - 1, m - 1) = 1.0;
        break;
      case Variant::even:
        if (m % 2 == 1) {
          f(m - 1, m - 1) = 1.0;
        } else {
          f(m - 2, m - 1) += 1.0;
          f(P(m) - 1, m - 1) += 1.0;
        }
        break;
      case Variant::odd:
        if (m % 2 == 1) {
          f(m - 1, m - 1) += 1.0;
          f(P(m + 1) - 1, m - 1) += 1.0;
        } else {
          f(P(m) - 1, m - 1) = 1.0;
        }
        break;
    }
  }
  return f;
}

/// Rows of a basis matrix that some column touches (1-based indices).
inline std::vector<Index> touched_rows(const Eigen::MatrixXd& f) {
  std::vector<Index> rows;
  for (Index r = 0; r < f.rows(); ++r) {
    if (f.row(r).cwiseAbs().sum() != 0.0) rows.push_back(r + 1);
  }
  return rows;
}

/// The basis matrix restricted to its touched rows (square for closed truncations).
inline Eigen::MatrixXd compressed_basis(Variant v, Index n, Index dim) {
  const Eigen::MatrixXd f = basis_matrix(v, n, dim);
  const std::vector<Index> rows = touched_rows(f);
  Eigen::MatrixXd c(static_cast<Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) c.row(static_cast<Index>(i)) = f.row(rows[i] - 1);
  return c;
}

/// Dense multiplier F diag(mu) F^{-1} in compressed e-coordinates.
inline Eigen::MatrixXcd dense_multiplier(const Eigen::MatrixXd& fc, const Eigen::VectorXcd& mu) {
  const Eigen::MatrixXcd f = fc.cast<Complex>();
  return f * mu.asDiagonal() * f.inverse();
}

/// sqrt(2^-K sum_eps ||sum eps_k x_k||^2), every pattern summed from scratch.
inline double rademacher_brute(const std::vector<Eigen::VectorXcd>& x, double p) {
  const std::size_t k = x.size();
  double acc = 0.0;
  for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(x.front().size());
    for (std::size_t j = 0; j < k; ++j) s += ((pat >> j) & 1U) ? x[j] : Eigen::VectorXcd(-x[j]);
    const double n = nested_norm(s, p);
    acc += n * n;
  }
  return std::sqrt(acc / static_cast<double>(std::uint64_t{1} << k));
}

}  // namespace oracle
