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

#include "mrlab/radlab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace mrlab {

namespace {

/// X_p norm of vectors living on a fixed sorted index set.
class SupportNorm {
 public:
  SupportNorm(const std::vector<Index>& indices, double p) : p_(p) {
    detail::check_exponent(p);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      const Index k = BlockLayout::block_of(indices[i]);
      if (run_start_.empty() || k != last_block_) {
        run_start_.push_back(static_cast<Index>(i));
        last_block_ = k;
      }
    }
    run_start_.push_back(static_cast<Index>(indices.size()));
  }

  double operator()(const Eigen::VectorXcd& v) const {
    const bool sup = std::isinf(p_);
    double total = 0.0;
    for (std::size_t r = 0; r + 1 < run_start_.size(); ++r) {
      const Index lo = run_start_[r];
      const Index len = run_start_[r + 1] - lo;
      const double block = v.segment(lo, len).norm();
      total = sup ? std::max(total, block) : total + std::pow(block, p_);
    }
    return sup ? total : std::pow(total, 1.0 / p_);
  }

 private:
  double p_;
  std::vector<Index> run_start_;
  Index last_block_ = 0;
};

/// Rademacher norm of the columns of x, rows indexed by sorted `indices`.
RadNorm rad_norm_dense(const std::vector<Index>& indices, const Eigen::MatrixXcd& x,
                       double p, RadMode mode, std::uint64_t seed, Index samples) {
  const SupportNorm norm(indices, p);
  const Index k = x.cols();
  RadNorm out;
  if (k == 0) return out;
  switch (mode) {
    case RadMode::disjoint: {
      for (Index r = 0; r < x.rows(); ++r) {
        Index hits = 0;
        for (Index c = 0; c < k; ++c) hits += x(r, c) != Complex(0);
        if (hits > 1) {
          throw StructuralError("disjoint mode: index " + std::to_string(indices[r]) +
                                " is shared by several terms");
        }
      }
      out.value = norm(x.rowwise().sum());
      out.mean_square = out.value * out.value;
      out.samples = 1;
      return out;
    }
    case RadMode::exact: {
      if (k > kMaxExactTerms) {
        throw ParameterError("exact mode supports at most " + std::to_string(kMaxExactTerms) +
                             " terms, got " + std::to_string(k));
      }
      Eigen::VectorXcd sum = x.rowwise().sum();
      std::vector<double> sign(static_cast<std::size_t>(k), 1.0);
      const std::uint64_t patterns = std::uint64_t{1} << k;
      double acc = 0.0;
      for (std::uint64_t g = 0; g < patterns; ++g) {
        if (g > 0) {
          const auto j = static_cast<Index>(std::countr_zero(g));
          sum -= 2.0 * sign[static_cast<std::size_t>(j)] * x.col(j);
          sign[static_cast<std::size_t>(j)] = -sign[static_cast<std::size_t>(j)];
        }
        const double n = norm(sum);
        acc += n * n;
      }
      out.mean_square = acc / static_cast<double>(patterns);
      out.value = std::sqrt(out.mean_square);
      out.samples = static_cast<Index>(patterns);
      return out;
    }
    case RadMode::sampled: {
      if (samples < 2) throw ParameterError("sampled mode needs at least two samples");
      std::mt19937_64 rng(seed);
      Eigen::VectorXcd sum(x.rows());
      double mean = 0.0;
      double m2 = 0.0;
      for (Index s = 0; s < samples; ++s) {
        sum.setZero();
        std::uint64_t bits = 0;
        for (Index c = 0; c < k; ++c) {
          if (c % 64 == 0) bits = rng();
          if (bits & 1U) {
            sum += x.col(c);
          } else {
            sum -= x.col(c);
          }
          bits >>= 1U;
        }
        const double n = norm(sum);
        const double sq = n * n;
        const double delta = sq - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (sq - mean);
      }
      const double var = m2 / static_cast<double>(samples - 1);
      out.mean_square = mean;
      out.mean_square_se = std::sqrt(var / static_cast<double>(samples));
      out.value = std::sqrt(mean);
      out.samples = samples;
      return out;
    }
  }
  return out;
}

}  // namespace

RadSum::RadSum(BlockLayout layout, double p) : layout_(layout), p_(p) {
  detail::check_exponent(p);
}

void RadSum::add(SparseVectorXcd term) {
  if (term.size() != layout_.dim()) {
    throw StructuralError("RadSum term of dimension " + std::to_string(term.size()) +
                          " for layout of dimension " + std::to_string(layout_.dim()));
  }
  terms_.push_back(std::move(term));
}

void RadSum::add(const MixedVectorXcd& term) {
  if (term.layout() != layout_) {
    throw StructuralError("RadSum term layout differs from the sum layout");
  }
  add(SparseVectorXcd(term.coeffs().sparseView()));
}

const char* to_string(RadMode m) {
  switch (m) {
    case RadMode::exact: return "exact";
    case RadMode::sampled: return "sampled";
    case RadMode::disjoint: return "disjoint";
  }
  return "?";
}

RadMode rad_mode_from_string(const std::string& s) {
  if (s == "exact") return RadMode::exact;
  if (s == "sampled") return RadMode::sampled;
  if (s == "disjoint") return RadMode::disjoint;
  throw ParameterError("unknown Rademacher mode '" + s + "'");
}

RadNorm rad_norm(const RadSum& s, RadMode mode, std::uint64_t seed, Index samples) {
  std::vector<Index> indices;
  for (const auto& t : s.terms()) {
    for (SparseVectorXcd::InnerIterator it(t); it; ++it) {
      indices.push_back(static_cast<Index>(it.index()) + 1);
    }
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::unordered_map<Index, Index> row;
  for (std::size_t i = 0; i < indices.size(); ++i) row[indices[i]] = static_cast<Index>(i);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(static_cast<Index>(indices.size()), s.size());
  for (Index c = 0; c < s.size(); ++c) {
    for (SparseVectorXcd::InnerIterator it(s.terms()[static_cast<std::size_t>(c)]); it; ++it) {
      x(row.at(static_cast<Index>(it.index()) + 1), c) = it.value();
    }
  }
  return rad_norm_dense(indices, x, s.p(), mode, seed, samples);
}

RadNorm rad_norm(const TwistedBasis& basis, std::span<const Eigen::VectorXcd> terms,
                 double p, RadMode mode, std::uint64_t seed, Index samples) {
  const auto n = static_cast<Index>(basis.support().size());
  Eigen::MatrixXcd x(n, static_cast<Index>(terms.size()));
  for (std::size_t c = 0; c < terms.size(); ++c) {
    if (terms[c].size() != n) {
      throw StructuralError("term " + std::to_string(c + 1) +
                            " does not match the basis support");
    }
    x.col(static_cast<Index>(c)) = terms[c];
  }
  return rad_norm_dense(basis.support(), x, p, mode, seed, samples);
}

RadSum associated_operator(const MultiplierSpec& spec, std::span<const SpectralPoint> q,
                           const RadSum& s) {
  if (s.layout() != spec.layout()) {
    throw StructuralError("Rademacher sum layout differs from the operator layout");
  }
  if (static_cast<Index>(q.size()) != s.size()) {
    throw StructuralError(std::to_string(q.size()) + " spectral points for " +
                          std::to_string(s.size()) + " terms");
  }
  RadSum out(s.layout(), s.p());
  for (Index n = 0; n < s.size(); ++n) {
    const Eigen::VectorXcd a = spec.basis().gather(s.terms()[static_cast<std::size_t>(n)]);
    const Eigen::VectorXcd b =
        scaled_resolvent_apply(spec, q[static_cast<std::size_t>(n)], a);
    out.add(spec.basis().scatter_sparse(b, s.layout().dim()));
  }
  return out;
}

RadSum associated_operator(const MultiplierSpec& spec, std::span<const double> q,
                           const RadSum& s) {
  std::vector<SpectralPoint> pts;
  pts.reserve(q.size());
  for (double v : q) {
    if (!(v < 0.0)) throw ParameterError("q values must be negative, got " + std::to_string(v));
    pts.push_back(SpectralPoint::negative_real(std::log(-v)));
  }
  return associated_operator(spec, std::span<const SpectralPoint>(pts), s);
}

double rbound_ratio(const TwistedBasis& basis, double p,
                    std::span<const CompressedOperator> family, const RBoundWitness& w) {
  if (w.ops.size() != w.vectors.size() || w.ops.empty()) {
    throw StructuralError("witness needs one operator per vector");
  }
  std::vector<Eigen::VectorXcd> images;
  images.reserve(w.ops.size());
  for (std::size_t i = 0; i < w.ops.size(); ++i) {
    const Index op = w.ops[i];
    if (op < 0 || op >= static_cast<Index>(family.size())) {
      throw StructuralError("witness refers to operator " + std::to_string(op) +
                            " outside the family");
    }
    images.push_back(family[static_cast<std::size_t>(op)](w.vectors[i]));
  }
  const double den = rad_norm(basis, w.vectors, p, RadMode::exact).value;
  if (den == 0.0) return 0.0;
  return rad_norm(basis, images, p, RadMode::exact).value / den;
}

RBoundReport rbound_lower(const TwistedBasis& basis, double p,
                          std::span<const CompressedOperator> family, Index trials,
                          std::uint64_t seed, std::span<const RBoundWitness> starts,
                          std::string description) {
  if (family.empty()) throw ParameterError("rbound_lower: empty family");
  const auto n_ops = static_cast<Index>(family.size());
  const auto n = static_cast<Index>(basis.support().size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  RBoundReport rep;
  rep.description = std::move(description);
  rep.method = RadMode::exact;
  auto consider = [&](RBoundWitness w) {
    const double r = rbound_ratio(basis, p, family, w);
    ++rep.evaluations;
    if (r > rep.lower_bound || rep.witness.ops.empty()) {
      rep.lower_bound = r;
      rep.witness = std::move(w);
    }
  };

  const Index singles = std::min<Index>(n_ops, 32);
  for (Index s = 0; s < singles; ++s) {
    const Index op = s * n_ops / singles;
    const NormEstimate est =
        operator_norm_lower(basis, p, family[static_cast<std::size_t>(op)], 4, seed + 1 + op);
    consider({{op}, {est.witness}});
  }
  for (const RBoundWitness& w : starts) consider(w);

  std::vector<Index> order(static_cast<std::size_t>(n_ops));
  for (Index i = 0; i < n_ops; ++i) order[static_cast<std::size_t>(i)] = i;
  for (Index t = 0; t < trials; ++t) {
    const Index k = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(
                            std::min<Index>(n_ops, 6)));
    std::shuffle(order.begin(), order.end(), rng);
    RBoundWitness w;
    for (Index i = 0; i < k; ++i) {
      Eigen::VectorXcd v(n);
      for (Index j = 0; j < n; ++j) v(j) = Complex(gauss(rng), gauss(rng));
      w.ops.push_back(order[static_cast<std::size_t>(i)]);
      w.vectors.push_back(std::move(v));
    }
    consider(std::move(w));
  }

  const Complex dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (double step : {0.5, 0.25, 0.125}) {
    for (int move = 0; move < 48; ++move) {
      RBoundWitness w = rep.witness;
      const auto term = static_cast<std::size_t>(rng() % w.vectors.size());
      const auto coord = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
      const double scale = std::max(w.vectors[term].cwiseAbs().maxCoeff(), 1e-300);
      w.vectors[term](coord) += step * scale * dirs[rng() % 4];
      consider(std::move(w));
    }
  }
  return rep;
}

const char* to_string(BlowupConstruction c) {
  switch (c) {
    case BlowupConstruction::lacunary: return "lacunary";
    case BlowupConstruction::power: return "power";
    case BlowupConstruction::powerlog: return "powerlog";
  }
  return "?";
}

BlowupConstruction blowup_construction_from_string(const std::string& s) {
  if (s == "lacunary") return BlowupConstruction::lacunary;
  if (s == "power") return BlowupConstruction::power;
  if (s == "powerlog") return BlowupConstruction::powerlog;
  throw ParameterError("unknown blow-up construction '" + s + "'");
}

BlowupSeries blowup_experiment(BlowupConstruction construction, double p, double alpha,
                               std::span<const Index> blocks) {
  detail::check_exponent(p);
  if (std::isinf(p)) throw ParameterError("blow-up experiment needs finite p");
  if (blocks.empty()) throw ParameterError("blow-up experiment needs block counts");
  const bool lacunary = construction == BlowupConstruction::lacunary;
  if (!lacunary && !(p > 2.0)) {
    throw ParameterError("the power and powerlog constructions need p > 2");
  }
  for (Index k : blocks) {
    if (k < 1) throw ParameterError("block counts must be positive");
  }
  const Index k_max = *std::max_element(blocks.begin(), blocks.end());

  BlowupSeries out;
  out.construction = construction;
  out.p = p;
  out.alpha = alpha;

  const CSeq c = lacunary ? CSeq::custom({0.0, 1.0 / 6.0}, CConstraint::open_half)
                          : c_family(construction == BlowupConstruction::power
                                         ? CFamily::power
                                         : CFamily::powerlog,
                                     alpha, k_max + 1);
  auto log_increment = [&](Index m) {
    return lacunary ? twisted_lacunary_log_increment(m) : 2.0 * std::atanh(2.0 * c(m));
  };
  const SpectralPoint unit_q = SpectralPoint::negative_real(0.0);
  const double q = p > 2.0 ? 2.0 * p / (p - 2.0) : 0.0;

  std::vector<double> block_L(static_cast<std::size_t>(k_max) + 1, 0.0);
  std::vector<double> block_cf(static_cast<std::size_t>(k_max) + 1, 0.0);
  std::vector<Index> odd_pos;
  std::vector<Index> twin_pos;
  std::vector<double> coef;
  for (Index j = 1; j <= k_max; ++j) {
    const auto [first, last] = BlockLayout::bounds(j);
    odd_pos.clear();
    twin_pos.clear();
    coef.clear();
    for (Index i = first + ((1 - first % 4) + 4) % 4; i <= last; i += 4) {
      // q = -gamma_{i+1}; the symbol at f_i depends on log(gamma_i / gamma_{i+1}).
      const double kappa =
          std::abs(0.5 - scaled_resolvent_symbol(unit_q, -log_increment(i + 1)).real());
      odd_pos.push_back(i);
      twin_pos.push_back(twist_pi(i + 1));
      coef.push_back(kappa);
    }
    if (coef.empty()) continue;
    const auto len = static_cast<Index>(coef.size());
    Eigen::VectorXd a = Eigen::VectorXd::Zero(len);
    Eigen::Map<const Eigen::VectorXd> kap(coef.data(), len);
    double cf = 0.0;
    if (q > 0.0) {
      for (Index i = 0; i < len; ++i) {
        a(i) = std::pow(kap(i), q / p);
        cf += std::pow(kap(i), q);
      }
      cf = std::pow(cf, 1.0 / q);
    } else {
      Index arg = 0;
      cf = kap.maxCoeff(&arg);
      a(arg) = 1.0;
    }
    a /= a.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd image = kap.cwiseProduct(a);
    const double num = norm_xp_at(std::span<const Index>(odd_pos), image, p);
    const double den = norm_xp_at(std::span<const Index>(twin_pos), a, p);
    block_L[static_cast<std::size_t>(j)] = num / den;
    block_cf[static_cast<std::size_t>(j)] = cf;
  }

  double run_L = 0.0;
  double run_cf = 0.0;
  Index run_arg = 0;
  std::vector<double> prefix_L(block_L.size(), 0.0);
  std::vector<double> prefix_cf(block_L.size(), 0.0);
  std::vector<Index> prefix_arg(block_L.size(), 0);
  for (std::size_t j = 1; j < block_L.size(); ++j) {
    if (block_L[j] > run_L) {
      run_L = block_L[j];
      run_arg = static_cast<Index>(j);
    }
    run_cf = std::max(run_cf, block_cf[j]);
    prefix_L[j] = run_L;
    prefix_cf[j] = run_cf;
    prefix_arg[j] = run_arg;
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (Index k : blocks) {
    const auto ks = static_cast<std::size_t>(k);
    out.k.push_back(k);
    out.L.push_back(prefix_L[ks]);
    out.closed_form.push_back(prefix_cf[ks]);
    out.argmax_block.push_back(prefix_arg[ks]);
    if (prefix_L[ks] > 0.0) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(prefix_L[ks]);
    }
  }
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  out.slope = xs.size() >= 2 && distinct ? loglog_slope(xs, ys) : 0.0;
  return out;
}

}  // namespace mrlab
