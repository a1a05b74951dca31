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

#include "mrlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "mrlab/blockspace.hpp"
#include "mrlab/certify.hpp"
#include "mrlab/gammaseq.hpp"
#include "mrlab/multop.hpp"
#include "mrlab/radlab.hpp"
#include "mrlab/twistbasis.hpp"

namespace mrlab {

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED: " << what << ";";
    }
  }
};

CriterionResult timed(int id, const char* name, double budget,
                      const std::function<void(Outcome&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  Outcome out;
  out.detail << std::setprecision(6);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << " exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.metric_passed = out.ok;
  r.passed = out.ok && r.seconds < budget;
  r.detail = out.detail.str();
  while (!r.detail.empty() && r.detail.front() == ' ') r.detail.erase(0, 1);
  return r;
}

}  // namespace

std::string CriterionResult::line(bool with_timing) const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail;
  if (with_timing) {
    os << std::fixed << std::setprecision(3) << " (" << seconds << " s, budget "
       << std::setprecision(0) << budget_seconds << " s)";
  } else if (metric_passed && !passed) {
    os << " (over runtime budget)";
  }
  return os.str();
}

CriterionResult accept_gamma_recurrence(std::uint64_t seed) {
  return timed(1, "gamma recurrence exactness", 1.0, [&](Outcome& o) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    const Index n = 500;
    double worst = 0.0;
    bool increasing = true;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> c(static_cast<std::size_t>(n));
      for (auto& v : c) {
        do v = u(rng);
        while (v == 0.0);
      }
      const GammaSeq g = gamma_from_c(CSeq::custom(c, CConstraint::open_half));
      o.require(g.log_value(1) == 0.0, "gamma_1 != 1");
      for (Index m = 2; m <= n; ++m) {
        const double cm = c[static_cast<std::size_t>(m - 1)];
        worst = std::max(worst, std::abs(g.half_ratio(m) - cm) / cm);
        increasing = increasing && g.log_increment(m) > 0.0;
      }
    }
    o.detail << "max relative error " << worst << " over 1000 sequences, N = 500";
    o.require(worst <= 1e-12, "relative error above 1e-12");
    o.require(increasing, "gamma not strictly increasing");
  });
}

CriterionResult accept_lacunary_coefficients(std::uint64_t seed) {
  return timed(2, "twisted lacunary coefficients 1/2 and 1/6", 1.0, [&](Outcome& o) {
    const Index m_max = 1000;
    const MultiplierSpec spec(twisted_lacunary(2 * m_max), BasisVariant::even_twist, 2 * m_max);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    RadSum x(spec.layout(), 4.0);
    std::vector<double> a;
    std::vector<SpectralPoint> q;
    for (Index m = 1; m <= m_max; ++m) {
      a.push_back(u(rng));
      SparseVectorXcd t(spec.layout().dim());
      t.insert(twist_pi(2 * m) - 1) = a.back();
      x.add(std::move(t));
      // q_m = -2^{2m-1}
      q.push_back(SpectralPoint::negative_real(static_cast<double>(2 * m - 1) *
                                               std::numbers::ln2));
    }
    const RadSum y = associated_operator(spec, q, x);
    double worst = 0.0;
    for (Index m = 1; m <= m_max; ++m) {
      const auto& t = y.terms()[static_cast<std::size_t>(m - 1)];
      const double am = a[static_cast<std::size_t>(m - 1)];
      for (SparseVectorXcd::InnerIterator it(t); it; ++it) {
        const Index j = static_cast<Index>(it.index()) + 1;
        Complex expect = 0.0;
        if (j == twist_pi(2 * m)) expect = 0.5;
        if (j == 2 * m - 1) expect = 1.0 / 6.0;
        worst = std::max(worst, std::abs(it.value() / am - expect));
      }
      const Complex half = t.coeff(twist_pi(2 * m) - 1) / am;
      const Complex sixth = t.coeff(2 * m - 2) / am;
      worst = std::max({worst, std::abs(half - 0.5), std::abs(sixth - 1.0 / 6.0)});
    }
    o.detail << "max abs coefficient error " << worst << " for m <= 1000";
    o.require(worst <= 1e-12, "coefficient error above 1e-12");
  });
}

CriterionResult accept_positivity(std::uint64_t seed) {
  return timed(3, "positivity iff monotonicity", 10.0, [&](Outcome& o) {
    const Index n = 500;
    std::vector<double> grid;
    for (int e = -10; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
    const PositivityReport lac =
        positivity_check(MultiplierSpec(twisted_lacunary(n), BasisVariant::even_twist, n), grid);
    const double lac_min = *std::min_element(lac.min_entry.begin(), lac.min_entry.end());
    o.detail << "lacunary min entry " << lac_min << ";";
    o.require(lac_min >= -1e-12, "negative entry for the twisted lacunary sequence");
    o.require(lac.agrees(), "verdict differs from predicate (lacunary)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    std::vector<double> random_c(static_cast<std::size_t>(n));
    for (auto& v : random_c) v = u(rng);
    const std::vector<std::pair<std::string, CSeq>> cases = {
        {"c=1/10", CSeq(CFamily::constant, 0.0, 0.1, n, CConstraint::open_eighth)},
        {"power", c_family(CFamily::power, 0.25, BlockLayout::covering(n).n_blocks())},
        {"powerlog", c_family(CFamily::powerlog, 0.25, BlockLayout::covering(n).n_blocks())},
        {"random", CSeq::custom(random_c, CConstraint::open_half)}};
    for (const auto& [label, c] : cases) {
      const PositivityReport rep =
          positivity_check(MultiplierSpec(gamma_from_c(c.resized(n)), BasisVariant::even_twist, n),
                           grid);
      const double lo = *std::min_element(rep.min_entry.begin(), rep.min_entry.end());
      o.detail << " " << label << " min entry " << lo << ";";
      o.require(lo < -1e-12, "no negative entry for increasing gamma (" + label + ")");
      o.require(rep.agrees(), "verdict differs from predicate (" + label + ")");
    }
  });
}

CriterionResult accept_bv_bound(std::uint64_t) {
  return timed(4, "BV bound for exp(-t A^alpha)", 5.0, [&](Outcome& o) {
    const Index n = 2000;
    double worst = 0.0;
    for (double alpha : {0.25, 0.5, 1.0}) {
      for (int i = 0; i < 50; ++i) {
        const double t = 0.01 * std::pow(1000.0, i / 49.0);
        const BvBound b = bv_semigroup_bound(alpha, t, n);
        worst = std::max(worst, b.computed / b.closed_form);
        o.require(b.holds(), "variation above the bound at alpha=" + std::to_string(alpha) +
                                 " t=" + std::to_string(t));
      }
    }
    const double at_one = bv_semigroup_closed_form(1.0, 1.0);
    o.detail << "max computed/bound " << worst << "; bound(1,1) = " << std::setprecision(8)
             << at_one;
    o.require(std::abs(at_one - 16.0 / std::numbers::e) <= 1e-12, "bound(1,1) != 16/e");
  });
}

CriterionResult accept_norm_identity(std::uint64_t seed) {
  return timed(5, "diagonal norm identity", 10.0, [&](Outcome& o) {
    const Index blocks = 20;
    const Index dim = BlockLayout(blocks).dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> u(0.001, 0.12);
    std::vector<double> random_c(static_cast<std::size_t>(dim));
    for (auto& v : random_c) v = u(rng);
    const std::vector<CSeq> cs = {c_family(CFamily::power, 0.25, blocks),
                                  c_family(CFamily::powerlog, 0.25, blocks),
                                  CSeq::custom(random_c, CConstraint::open_eighth)};
    double worst_identity = 0.0;
    double worst_sample = 0.0;
    for (double p : {2.5, 3.0, 4.0, 6.0}) {
      for (const CSeq& c : cs) {
        const DiagonalNorm d = diagonal_norm(c, p, blocks);
        worst_identity =
            std::max(worst_identity, std::abs(d.extremizer_value - d.value) / d.value);
        Eigen::VectorXd cv(dim);
        for (Index m = 1; m <= dim; ++m) cv(m - 1) = c(m);
        for (int s = 0; s < 10000 / static_cast<int>(cs.size()) + 1; ++s) {
          Eigen::VectorXd a(dim);
          for (Index i = 0; i < dim; ++i) a(i) = gauss(rng);
          a /= std::pow(a.cwiseAbs().array().pow(p).sum(), 1.0 / p);
          const double v = norm_xp(a.cwiseProduct(cv), p);
          worst_sample = std::max(worst_sample, v / d.value);
        }
      }
    }
    o.detail << "max identity error " << worst_identity << "; max sample/value "
             << worst_sample;
    o.require(worst_identity <= 1e-9, "extremizer misses the value");
    o.require(worst_sample <= 1.0 + 1e-9, "a random sample exceeds the value");
  });
}

CriterionResult accept_thresholds(std::uint64_t) {
  return timed(6, "MR thresholds for power and powerlog", 1.0, [&](Outcome& o) {
    const CSeq power = c_family(CFamily::power, 0.25, 100);
    const CSeq powerlog = c_family(CFamily::powerlog, 0.25, 100);
    int mismatches = 0;
    for (int j = 21; j <= 60; ++j) {
      const double p = j / 10.0;
      mismatches += mr_predicate(power, p).mr != (j <= 40);
      mismatches += mr_predicate(powerlog, p).mr != (j < 40);
    }
    o.detail << mismatches << " mismatches on p = 2.1..6.0";
    o.require(mismatches == 0, "threshold mismatch");
  });
}

CriterionResult accept_blowup_rates(std::uint64_t) {
  return timed(7, "blow-up rates", 60.0, [&](Outcome& o) {
    const std::vector<Index> two = {100, 10000};
    const BlowupSeries pl = blowup_experiment(BlowupConstruction::powerlog, 4.0, 0.25, two);
    const double ratio = pl.L[1] / pl.L[0];
    const std::vector<Index> decade = {1000, 10000};
    const BlowupSeries pw = blowup_experiment(BlowupConstruction::power, 4.0, 0.25, decade);
    const double incr = pw.L[1] - pw.L[0];
    const std::vector<Index> sweep = {100, 200, 500, 1000, 2000, 5000, 10000};
    const BlowupSeries lac = blowup_experiment(BlowupConstruction::lacunary, 4.0, 0.25, sweep);
    o.detail << "powerlog L(1e4)/L(1e2) = " << ratio << "; power increment " << incr
             << "; lacunary slope " << lac.slope;
    o.require(std::abs(ratio - 2.0) <= 0.2, "powerlog ratio outside 2 +- 10%");
    o.require(incr < 1e-6, "power family L still increasing");
    o.require(std::abs(lac.slope - 0.25) <= 0.03, "lacunary slope outside 1/4 +- 0.03");
  });
}

CriterionResult accept_bip_inequality(std::uint64_t) {
  return timed(8, "BIP pair inequality", 5.0, [&](Outcome& o) {
    const Index pairs = 10000;
    const Index blocks = BlockLayout::covering(2 * pairs).n_blocks();
    const std::vector<double> ts = {0.01, 0.1, 1.0, 10.0, 100.0};
    for (CFamily f : {CFamily::power, CFamily::powerlog}) {
      const CSeq c = c_family(f, 0.25, blocks);
      const BipCheck b = bip_pair_bound_check(gamma_from_c(c), c, ts, pairs);
      o.detail << to_string(f) << " worst ratio " << b.worst_ratio << " (m = " << b.worst_m
               << ", t = " << b.worst_t << "); ";
      o.require(b.worst_ratio <= 1.0, std::string("ratio above 1 for ") + to_string(f));
    }
  });
}

CriterionResult accept_interval_certification(std::uint64_t) {
  return timed(9, "interval certification", 5.0, [&](Outcome& o) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<IntervalSpec> intervals = {{1.5, 3.0, true, true},
                                                 {4.0 / 3.0, 4.0, false, true},
                                                 {2.0, 2.0, true, true},
                                                 {1.0, inf, false, false},
                                                 {2.0, 5.0, true, false}};
    for (const IntervalSpec& iv : intervals) {
      const IntervalCertificate cert = certify_interval(iv, 0.05, 8.0);
      o.detail << iv.describe() << (cert.set_equal ? " equal; " : " DIFFERENT; ");
      o.require(cert.set_equal, "predicted set differs for " + iv.describe());
    }
  });
}

CriterionResult accept_dissipativity(std::uint64_t) {
  return timed(10, "dissipativity witness", 1.0, [&](Outcome& o) {
    const CSeq c(CFamily::constant, 0.0, 0.1, BlockLayout(201).dim(), CConstraint::open_eighth);
    for (Index k : {10, 20, 40}) {
      const DissipativityWitness w = dissipativity_witness(c, k);
      const double rel = std::abs(w.pairing - w.closed_form) / w.closed_form;
      o.detail << "k=" << k << " pairing " << w.pairing << " rel err " << rel << "; ";
      o.require(rel <= 1e-9, "pairing differs from closed form at k=" + std::to_string(k));
      o.require(w.pairing > 0.0, "pairing not positive at k=" + std::to_string(k));
    }
    const DissipativityOnset on = dissipativity_onset(c, 200);
    o.detail << "k0 = " << on.k0;
    o.require(on.k0 > 0, "x_norm_sq never exceeds 1");
  });
}

CriterionResult accept_rademacher(std::uint64_t seed) {
  return timed(11, "Rademacher norms", 30.0, [&](Outcome& o) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const double ps[] = {1.5, 2.0, 3.0, 4.0, std::numeric_limits<double>::infinity()};
    int outside = 0;
    double worst_z = 0.0;
    for (int s = 0; s < 100; ++s) {
      const BlockLayout layout(5);
      const double p = ps[s % 5];
      RadSum sum(layout, p);
      for (int k = 0; k < 12; ++k) {
        MixedVectorXcd v(layout);
        for (Index m = 1; m <= layout.dim(); ++m) {
          if (rng() % 2 == 0) v.coeff(m) = Complex(gauss(rng), gauss(rng));
        }
        sum.add(v);
      }
      const RadNorm ex = rad_norm(sum, RadMode::exact);
      const RadNorm sa = rad_norm(sum, RadMode::sampled, seed + 1 + s, 100000);
      const double z = std::abs(sa.mean_square - ex.mean_square) / sa.mean_square_se;
      worst_z = std::max(worst_z, z);
      outside += z > 3.0;
    }
    double worst_disjoint = 0.0;
    for (int s = 0; s < 100; ++s) {
      const BlockLayout layout(6);
      const double p = ps[s % 5];
      std::vector<Index> owner(static_cast<std::size_t>(layout.dim()));
      for (auto& w : owner) w = static_cast<Index>(rng() % 10);
      RadSum sum(layout, p);
      for (Index k = 0; k < 10; ++k) {
        MixedVectorXcd v(layout);
        for (Index m = 1; m <= layout.dim(); ++m) {
          if (owner[static_cast<std::size_t>(m - 1)] == k) v.coeff(m) = Complex(gauss(rng), gauss(rng));
        }
        sum.add(v);
      }
      const double ex = rad_norm(sum, RadMode::exact).value;
      const double dj = rad_norm(sum, RadMode::disjoint).value;
      worst_disjoint = std::max(worst_disjoint, std::abs(ex - dj) / ex);
    }
    o.detail << outside << "/100 sampled estimates beyond 3 SE (max z " << worst_z
             << "); disjoint max rel err " << worst_disjoint;
    o.require(outside == 0, "sampled estimate beyond 3 standard errors");
    o.require(worst_disjoint <= 1e-12, "disjoint mode differs from enumeration");
  });
}

CriterionResult accept_permutation(std::uint64_t) {
  return timed(12, "permutation integrity", 1.0, [&](Outcome& o) {
    const Index n = 100000;
    const TwistPerm perm = TwistPerm::build(n);
    bool odd_fixed = true;
    bool inverse_ok = true;
    std::vector<Index> image;
    Index largest_free = 0;
    for (Index m = 1; m <= n; ++m) {
      const Index v = perm(m);
      if (m % 2 == 1) {
        odd_fixed = odd_fixed && v == m;
        continue;
      }
      image.push_back(v);
      inverse_ok = inverse_ok && perm.inverse(v) == m;
      if (m % 4 == 0) largest_free = std::max(largest_free, v);
    }
    std::sort(image.begin(), image.end());
    bool all_even = std::all_of(image.begin(), image.end(), [](Index v) { return v % 2 == 0; });
    const bool injective = std::adjacent_find(image.begin(), image.end()) == image.end();
    // Every even number up to the largest free value must be hit.
    bool onto = true;
    for (Index j = 2, i = 0; j <= largest_free; j += 2, ++i) {
      onto = onto && static_cast<std::size_t>(i) < image.size() &&
             image[static_cast<std::size_t>(i)] == j;
    }
    bool b_ok = true;
    const auto& b = perm.b_list();
    for (std::size_t k = 0; k < b.size(); ++k) {
      const auto [first, last] = BlockLayout::bounds(static_cast<Index>(k) + 2);
      const Index first_even = first % 2 == 0 ? first : first + 1;
      b_ok = b_ok && b[k] == first_even && b[k] <= last &&
             b[k] == perm(4 * static_cast<Index>(k) + 2);
    }
    b_ok = b_ok && b.size() >= 3 && b[0] == 2 && b[1] == 4 && b[2] == 8;
    o.detail << "N = " << n << ", " << image.size() << " evens, onto [2, " << largest_free
             << "], " << b.size() << " b values";
    o.require(odd_fixed, "odd index moved");
    o.require(all_even && injective, "not injective on the evens");
    o.require(inverse_ok, "inverse mismatch");
    o.require(onto, "an even number below the largest free value is missed");
    o.require(b_ok, "b list inconsistent with the first evens of B_{k+2}");
  });
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  return {accept_gamma_recurrence(seed),       accept_lacunary_coefficients(seed),
          accept_positivity(seed),             accept_bv_bound(seed),
          accept_norm_identity(seed),          accept_thresholds(seed),
          accept_blowup_rates(seed),           accept_bip_inequality(seed),
          accept_interval_certification(seed), accept_dissipativity(seed),
          accept_rademacher(seed),             accept_permutation(seed)};
}

}  // namespace mrlab
