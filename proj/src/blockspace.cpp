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

#include "mrlab/blockspace.hpp"

#include <algorithm>
#include <string>

namespace mrlab {

BlockLayout::BlockLayout(Index n_blocks) : n_blocks_(n_blocks) {
  if (n_blocks < 1) throw ParameterError("BlockLayout: need at least one block");
}

BlockLayout BlockLayout::covering(Index max_index) {
  return BlockLayout(block_of(std::max<Index>(max_index, 1)));
}

Index BlockLayout::block_of(Index m) {
  if (m < 1) throw ParameterError("block_of: index must be positive");
  // Smallest k with k(k+1)/2 >= m.
  auto k = static_cast<Index>(
      std::ceil((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0));
  while (k * (k + 1) / 2 < m) ++k;
  while (k > 1 && (k - 1) * k / 2 >= m) --k;
  return k;
}

namespace detail {

void check_exponent(double p) {
  if (std::isnan(p) || !(p > 1.0)) {
    throw ParameterError("exponent p must satisfy p > 1 or p = inf, got " +
                         std::to_string(p));
  }
}

double combine_blocks(std::vector<std::pair<Index, double>>& block_sq,
                      double p) {
  std::sort(block_sq.begin(), block_sq.end());
  const bool sup = std::isinf(p);
  double total = 0.0;
  std::size_t i = 0;
  while (i < block_sq.size()) {
    const Index k = block_sq[i].first;
    double sq = 0.0;
    for (; i < block_sq.size() && block_sq[i].first == k; ++i) {
      sq += block_sq[i].second;
    }
    const double block = std::sqrt(sq);
    total = sup ? std::max(total, block) : total + std::pow(block, p);
  }
  return sup ? total : std::pow(total, 1.0 / p);
}

}  // namespace detail

double norm_xp(const SparseVectorXcd& v, double p) {
  detail::check_exponent(p);
  std::vector<std::pair<Index, double>> block_sq;
  block_sq.reserve(static_cast<std::size_t>(v.nonZeros()));
  for (SparseVectorXcd::InnerIterator it(v); it; ++it) {
    block_sq.emplace_back(BlockLayout::block_of(it.index() + 1),
                          std::norm(it.value()));
  }
  return detail::combine_blocks(block_sq, p);
}

SpreadMap::SpreadMap(std::vector<Index> positions)
    : positions_(std::move(positions)) {
  if (positions_.empty()) throw ParameterError("SpreadMap: no positions");
  if (positions_.front() < 1) {
    throw ParameterError("SpreadMap: positions must be positive");
  }
  for (std::size_t k = 1; k < positions_.size(); ++k) {
    if (positions_[k] <= positions_[k - 1]) {
      throw ParameterError("SpreadMap: positions must be strictly increasing");
    }
    gap_ = std::max(gap_, positions_[k] - positions_[k - 1]);
  }
}

SpreadMap SpreadMap::strided(Index n, Index stride) {
  if (n < 1 || stride < 1) throw ParameterError("SpreadMap::strided: bad size");
  std::vector<Index> pos(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) pos[static_cast<std::size_t>(k)] = stride * k + 1;
  return SpreadMap(std::move(pos));
}

MixedVectorXcd spread(const MixedVectorXcd& v, const SpreadMap& map,
                      const BlockLayout& target) {
  if (v.dim() != map.size()) {
    throw StructuralError("spread: vector dimension " + std::to_string(v.dim()) +
                          " differs from map size " + std::to_string(map.size()));
  }
  if (map.positions().back() > target.dim()) {
    throw StructuralError("spread: position " +
                          std::to_string(map.positions().back()) +
                          " exceeds target dimension " +
                          std::to_string(target.dim()));
  }
  MixedVectorXcd out(target);
  for (Index k = 1; k <= map.size(); ++k) {
    out.coeff(map.positions()[static_cast<std::size_t>(k - 1)]) = v.coeff(k);
  }
  return out;
}

MixedVectorXcd compress(const MixedVectorXcd& w, const SpreadMap& map,
                        const BlockLayout& source) {
  if (source.dim() != map.size()) {
    throw StructuralError("compress: source dimension differs from map size");
  }
  if (map.positions().back() > w.dim()) {
    throw StructuralError("compress: position " +
                          std::to_string(map.positions().back()) +
                          " exceeds vector dimension " + std::to_string(w.dim()));
  }
  MixedVectorXcd out(source);
  for (Index k = 1; k <= map.size(); ++k) {
    out.coeff(k) = w.coeff(map.positions()[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

}  // namespace mrlab
