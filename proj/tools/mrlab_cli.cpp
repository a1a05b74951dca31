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

// mrlab: batch runner for the multiplier laboratory.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mrlab/acceptance.hpp"
#include "mrlab/blockspace.hpp"
#include "mrlab/certify.hpp"
#include "mrlab/gammaseq.hpp"
#include "mrlab/multop.hpp"
#include "mrlab/radlab.hpp"
#include "mrlab/twistbasis.hpp"

namespace {

using json = nlohmann::json;
using mrlab::Index;

constexpr const char* kVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- formatting

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return v.dump();
}

/// A double as JSON, with non-finite values kept as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

struct Report {
  std::vector<std::pair<std::string, json>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json nested = json::object();
  int exit_code = kExitOk;
  std::string default_format = "csv";

  void add_meta(std::string key, json value) { meta.emplace_back(std::move(key), std::move(value)); }
  void fail(const std::string& why) {
    exit_code = kExitAssertion;
    add_meta("assertion_failed", why);
  }
};

struct Context {
  std::string command;
  std::uint64_t seed = 42;
  json config = json::object();
  std::string out = "-";
  std::string format;
  int jobs = 1;
};

std::string render(const Context& ctx, const Report& r) {
  const std::string format = ctx.format.empty() ? r.default_format : ctx.format;
  const std::string schema = "mrlab." + ctx.command + ".v1";
  if (format == "json") {
    json doc;
    doc["schema"] = schema;
    doc["version"] = kVersion;
    doc["seed"] = ctx.seed;
    doc["config"] = ctx.config;
    for (const auto& [k, v] : r.meta) doc[k] = v;
    for (auto it = r.nested.begin(); it != r.nested.end(); ++it) doc[it.key()] = it.value();
    json rows = json::array();
    for (const auto& row : r.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# mrlab " << kVersion << "\n";
  os << "# schema: " << schema << "\n";
  os << "# seed: " << ctx.seed << "\n";
  os << "# config: " << ctx.config.dump() << "\n";
  for (const auto& [k, v] : r.meta) os << "# " << k << ": " << csv_cell(v) << "\n";
  if (!r.nested.empty()) os << "# report: " << r.nested.dump() << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------------ parsing

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s)) out.push_back(parse_double(t));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<Index> parse_indices(const std::string& s) {
  std::vector<Index> out;
  for (const auto& t : split(s)) {
    const double v = parse_double(t);
    if (v != std::floor(v) || v < 1 || v > 1e15) throw UsageError("not a positive integer: '" + t + "'");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string closest(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best_d <= std::max<std::size_t>(2, word.size() / 3) ? best : std::string();
}

/// Runs f(0..n-1) on up to `jobs` threads; results come back in index order
/// and the first failing index rethrows.
template <typename F>
auto ordered_map(std::size_t n, int jobs, F&& f) {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

// ----------------------------------------------------------- shared builders

mrlab::CFamily family_of(const std::string& s) {
  try {
    return mrlab::c_family_from_string(s);
  } catch (const mrlab::ParameterError&) {
    throw UsageError("unknown family '" + s + "'");
  }
}

/// c for a named family covering `n_blocks` blocks.
mrlab::CSeq make_c(const std::string& family, double alpha, Index n_blocks, double scale) {
  const mrlab::CFamily f = family_of(family);
  if (f == mrlab::CFamily::custom) throw UsageError("custom c is not available from the CLI");
  if (f == mrlab::CFamily::constant && scale > 0.0) {
    return mrlab::CSeq(f, alpha, scale, mrlab::BlockLayout(n_blocks).dim(),
                       mrlab::CConstraint::open_eighth);
  }
  return mrlab::c_family(f, alpha, n_blocks);
}

/// gamma_1..gamma_n from a source name: lacunary or a c family.
mrlab::GammaSeq make_gamma(const std::string& source, double alpha, Index n, double scale = 0.0) {
  if (source == "lacunary") return mrlab::twisted_lacunary(n);
  const Index blocks = mrlab::BlockLayout::covering(n).n_blocks();
  return mrlab::gamma_from_c(make_c(source, alpha, blocks, scale).resized(n));
}

std::vector<double> default_log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return g;
}

// ---------------------------------------------------------------- commands

struct Options {
  std::string family = "power";
  std::string gamma = "lacunary";
  std::string variant = "even-twist";
  std::string mode = "exact";
  double alpha = 0.25;
  double scale = 0.0;
  double p = 4.0;
  std::string p_list = "2.5,3,4,6";
  std::string n_list = "8,10,12";
  Index n = 0;
  Index blocks = 10;
  std::string blocks_list = "100,1000,10000";
  std::string block_list = "10,20,40";
  Index pairs = 1000;
  Index terms = 12;
  Index samples = 100000;
  Index trials = 8;
  Index kmax = 200;
  std::string tgrid;
  std::string angles;
  std::string radii = "0.01,0.1,1,10,100,1000,10000";
  double tol = 1e-12;
  std::string left = "1.5";
  std::string right = "3";
  bool left_closed = false;
  bool right_closed = false;
  double grid = 0.05;
  double pmax = 8.0;
};

Report cmd_gen_gamma(const Context&, const Options& o) {
  Report r;
  r.columns = {"m", "c_m", "gamma_m", "log_gamma_m"};
  const Index n = o.n > 0 ? o.n : mrlab::BlockLayout(o.blocks).dim();
  if (o.family == "lacunary") {
    const mrlab::GammaSeq g = mrlab::twisted_lacunary(std::max<Index>(n, 2));
    for (Index m = 1; m <= g.size(); ++m) {
      r.rows.push_back({m, m == 1 ? json() : num(g.half_ratio(m)), num(std::exp(g.log_value(m))),
                        num(g.log_value(m))});
    }
    return r;
  }
  const mrlab::CSeq c =
      make_c(o.family, o.alpha, mrlab::BlockLayout::covering(n).n_blocks(), o.scale).resized(n);
  const mrlab::GammaSeq g = mrlab::gamma_from_c(c);
  r.add_meta("scale", num(c.scale()));
  r.add_meta("decreasing_from", c.decreasing_from());
  for (Index m = 1; m <= n; ++m) {
    r.rows.push_back({m, num(c(m)), num(std::exp(g.log_value(m))), num(g.log_value(m))});
  }
  return r;
}

Report cmd_pi_table(const Context&, const Options& o) {
  Report r;
  const Index n = o.n > 0 ? o.n : 64;
  const mrlab::TwistPerm perm = mrlab::TwistPerm::build(n);
  std::string b;
  for (Index v : perm.b_list()) b += (b.empty() ? "" : ",") + std::to_string(v);
  r.add_meta("b_list", b);
  r.columns = {"m", "pi", "inverse"};
  for (Index m = 1; m <= n; ++m) r.rows.push_back({m, perm(m), perm.inverse(m)});
  return r;
}

Report cmd_semigroup_check(const Context&, const Options& o) {
  Report r;
  const Index n = o.n > 0 ? o.n : 500;
  std::vector<double> grid;
  if (o.tgrid.empty()) {
    for (int e = -10; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
  } else {
    grid = parse_doubles(o.tgrid);
  }
  const mrlab::BasisVariant variant = mrlab::basis_variant_from_string(o.variant);
  const Index size = mrlab::closed_size(n, variant);
  const mrlab::MultiplierSpec spec(make_gamma(o.gamma, o.alpha, size, o.scale), variant, size);
  const mrlab::PositivityReport rep = mrlab::positivity_check(spec, grid, o.tol);
  r.columns = {"t", "min_entry", "verdict"};
  for (std::size_t i = 0; i < rep.t_grid.size(); ++i) {
    r.rows.push_back({num(rep.t_grid[i]), num(rep.min_entry[i]),
                      rep.min_entry[i] >= -o.tol ? "positive" : "negative"});
  }
  r.add_meta("n", size);
  r.add_meta("predicate", rep.predicate);
  r.add_meta("verdict", rep.verdict);
  r.add_meta("agrees", rep.agrees());
  if (!rep.agrees()) r.fail("positivity verdict differs from the monotonicity predicate");
  return r;
}

Report cmd_bv_bound(const Context& ctx, const Options& o) {
  Report r;
  const Index n = o.n > 0 ? o.n : 2000;
  const std::vector<double> grid = o.tgrid.empty() ? default_log_grid(0.01, 10.0, 50)
                                                   : parse_doubles(o.tgrid);
  const auto res = ordered_map(grid.size(), ctx.jobs, [&](std::size_t i) {
    return mrlab::bv_semigroup_bound(o.alpha, grid[i], n);
  });
  r.columns = {"t", "computed", "closed_form", "holds"};
  bool all = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.rows.push_back({num(grid[i]), num(res[i].computed), num(res[i].closed_form), res[i].holds()});
    all = all && res[i].holds();
  }
  r.add_meta("all_hold", all);
  if (!all) r.fail("total variation above the closed-form bound");
  return r;
}

Report cmd_bip_check(const Context& ctx, const Options& o) {
  Report r;
  const std::vector<double> grid =
      parse_doubles(o.tgrid.empty() ? std::string("0.01,0.1,1,10,100") : o.tgrid);
  const Index blocks = mrlab::BlockLayout::covering(2 * o.pairs).n_blocks();
  const mrlab::CSeq c = make_c(o.family, o.alpha, blocks, o.scale);
  const mrlab::GammaSeq g = mrlab::gamma_from_c(c);
  const auto res = ordered_map(grid.size(), ctx.jobs, [&](std::size_t i) {
    return mrlab::bip_pair_bound_check(g, c, std::span<const double>(&grid[i], 1), o.pairs);
  });
  r.columns = {"t", "worst_ratio", "worst_m"};
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.rows.push_back({num(grid[i]), num(res[i].worst_ratio), res[i].worst_m});
    worst = std::max(worst, res[i].worst_ratio);
  }
  r.add_meta("worst_ratio", num(worst));
  if (worst > 1.0) r.fail("pair difference above 8|t|c_2m");
  return r;
}

Report cmd_sector_probe(const Context& ctx, const Options& o) {
  Report r;
  const Index n = o.n > 0 ? o.n : 24;
  const std::vector<double> angles =
      o.angles.empty() ? std::vector<double>{std::numbers::pi / 8, std::numbers::pi / 4,
                                             std::numbers::pi / 2, 3 * std::numbers::pi / 4}
                       : parse_doubles(o.angles);
  const std::vector<double> radii = parse_doubles(o.radii);
  const mrlab::BasisVariant variant = mrlab::basis_variant_from_string(o.variant);
  const Index size = mrlab::closed_size(n, variant);
  const mrlab::MultiplierSpec spec(make_gamma(o.gamma, o.alpha, size, o.scale), variant, size);
  const auto nr = static_cast<std::uint64_t>(radii.size());
  const auto res = ordered_map(angles.size(), ctx.jobs, [&](std::size_t i) {
    return mrlab::sectoriality_probe(spec, o.p, std::span<const double>(&angles[i], 1), radii,
                                     o.trials, ctx.seed + i * nr);
  });
  r.columns = {"theta", "r", "lower", "bv_upper"};
  double k = 0.0;
  bool consistent = true;
  json notes = json::array();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double lo = res[i].lower(0, static_cast<Index>(j));
      const double up = res[i].bv_upper(0, static_cast<Index>(j));
      r.rows.push_back({num(angles[i]), num(radii[j]), num(lo), num(up)});
      if (std::isfinite(lo) && lo > up * (1 + 1e-9)) consistent = false;
    }
    k = std::max(k, res[i].measured_K);
    for (const auto& note : res[i].notes) notes.push_back(note);
  }
  r.add_meta("n", size);
  r.add_meta("measured_K", num(k));
  if (!notes.empty()) r.nested["notes"] = notes;
  if (!consistent) r.fail("a lower bound exceeds the BV upper bound");
  return r;
}

Report cmd_rad_norm(const Context& ctx, const Options& o) {
  Report r;
  const mrlab::RadMode mode = mrlab::rad_mode_from_string(o.mode);
  const mrlab::BlockLayout layout(o.blocks);
  std::mt19937_64 rng(ctx.seed);
  std::normal_distribution<double> gauss;
  mrlab::RadSum sum(layout, o.p);
  std::vector<Index> owner(static_cast<std::size_t>(layout.dim()));
  for (auto& w : owner) w = static_cast<Index>(rng() % static_cast<std::uint64_t>(o.terms));
  for (Index k = 0; k < o.terms; ++k) {
    mrlab::MixedVectorXcd v(layout);
    for (Index m = 1; m <= layout.dim(); ++m) {
      const bool on = mode == mrlab::RadMode::disjoint ? owner[static_cast<std::size_t>(m - 1)] == k
                                                       : rng() % 2 == 0;
      if (on) v.coeff(m) = mrlab::Complex(gauss(rng), gauss(rng));
    }
    sum.add(v);
  }
  const mrlab::RadNorm res = mrlab::rad_norm(sum, mode, ctx.seed + 1, o.samples);
  r.columns = {"mode", "terms", "value", "mean_square", "std_error", "exact_value"};
  json exact;
  if (o.terms <= mrlab::kMaxExactTerms) {
    const mrlab::RadNorm ex = mrlab::rad_norm(sum, mrlab::RadMode::exact);
    exact = num(ex.value);
    if (mode == mrlab::RadMode::sampled) {
      r.add_meta("z_score", num(std::abs(res.mean_square - ex.mean_square) / res.mean_square_se));
    }
    if (mode == mrlab::RadMode::disjoint &&
        std::abs(res.value - ex.value) > 1e-12 * std::max(1.0, ex.value)) {
      r.fail("disjoint-mode norm differs from the enumeration");
    }
  }
  r.rows.push_back({mrlab::to_string(mode), o.terms, num(res.value), num(res.mean_square),
                    num(res.mean_square_se), exact});
  return r;
}

Report cmd_rbound_blowup(const Context&, const Options& o) {
  Report r;
  const std::vector<Index> blocks = parse_indices(o.blocks_list);
  const mrlab::BlowupSeries s = mrlab::blowup_experiment(
      mrlab::blowup_construction_from_string(o.family), o.p, o.alpha, blocks);
  r.columns = {"k", "L_k", "closed_form", "argmax_block", "fitted_slope"};
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    r.rows.push_back({s.k[i], num(s.L[i]), num(s.closed_form[i]), s.argmax_block[i], num(s.slope)});
  }
  r.add_meta("fitted_slope", num(s.slope));
  if (s.L.front() > 0.0) r.add_meta("ratio_last_first", num(s.L.back() / s.L.front()));
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    for (std::size_t j = 0; j < s.k.size(); ++j) {
      if (s.k[i] < s.k[j] && s.L[i] > s.L[j]) r.fail("L_k decreases in k");
    }
  }
  return r;
}

Report cmd_diag_norm(const Context& ctx, const Options& o) {
  Report r;
  const std::vector<double> ps = parse_doubles(o.p_list);
  const mrlab::CSeq c = make_c(o.family, o.alpha, o.blocks, o.scale);
  const auto res = ordered_map(ps.size(), ctx.jobs, [&](std::size_t i) {
    return mrlab::diagonal_norm(c, ps[i], o.blocks);
  });
  r.columns = {"p", "q", "value", "argmax_block", "extremizer_value"};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    r.rows.push_back({num(ps[i]), num(mrlab::block_exponent(ps[i])), num(res[i].value),
                      res[i].argmax_block, num(res[i].extremizer_value)});
    if (std::abs(res[i].extremizer_value - res[i].value) > 1e-9 * res[i].value) {
      r.fail("extremizer does not attain the block value");
    }
  }
  return r;
}

json side_json(const mrlab::SidePlan& s) {
  json j;
  j["family"] = mrlab::to_string(s.family);
  j["alpha"] = num(s.alpha);
  j["endpoint"] = num(s.endpoint);
  j["closed"] = s.closed;
  j["external_reference"] = s.external_reference;
  return j;
}

Report cmd_interval_certify(const Context&, const Options& o) {
  Report r;
  r.default_format = "json";
  mrlab::IntervalSpec iv{parse_double(o.left), parse_double(o.right), o.left_closed,
                         o.right_closed};
  const mrlab::IntervalCertificate cert = mrlab::certify_interval(iv, o.grid, o.pmax);
  r.add_meta("interval", iv.describe());
  r.add_meta("set_equal", cert.set_equal);
  json plan;
  plan["right"] = side_json(cert.plan.right);
  plan["left_dual"] = side_json(cert.plan.left);
  r.nested["plan"] = plan;
  r.columns = {"p", "predicted", "member"};
  for (const auto& g : cert.grid) r.rows.push_back({num(g.p), g.predicted, g.member});
  if (!cert.set_equal) r.fail("predicted MR set differs from the interval");
  return r;
}

Report cmd_dissipativity(const Context& ctx, const Options& o) {
  Report r;
  const std::vector<Index> ks = parse_indices(o.block_list);
  const Index top = std::max(o.kmax, *std::max_element(ks.begin(), ks.end())) + 1;
  const mrlab::CSeq c = make_c(o.family, o.alpha, top, o.scale);
  const auto res = ordered_map(ks.size(), ctx.jobs,
                               [&](std::size_t i) { return mrlab::dissipativity_witness(c, ks[i]); });
  r.columns = {"k", "pairing", "closed_form", "rel_err", "x_norm_sq"};
  for (const auto& w : res) {
    const double rel = std::abs(w.pairing - w.closed_form) / w.closed_form;
    r.rows.push_back({w.block, num(w.pairing), num(w.closed_form), num(rel), num(w.x_norm_sq)});
    if (!(rel <= 1e-9) || !(w.pairing > 0.0)) r.fail("pairing differs from the closed form");
  }
  const mrlab::DissipativityOnset on = mrlab::dissipativity_onset(c, o.kmax);
  const mrlab::Sandwich sw = mrlab::dissipativity_sandwich(c, o.kmax);
  r.add_meta("k0", on.k0);
  r.add_meta("sandwich_min", num(sw.min_ratio));
  r.add_meta("sandwich_max", num(sw.max_ratio));
  if (sw.min_ratio < 1.0 || sw.max_ratio > 8.0 / 3.0) r.fail("sandwich constants out of range");
  return r;
}

Report cmd_uncond_constant(const Context& ctx, const Options& o) {
  Report r;
  const std::vector<Index> ns = parse_indices(o.n_list);
  const mrlab::BasisVariant variant = mrlab::basis_variant_from_string(o.variant);
  const mrlab::UncondMode mode = o.mode == "exact"     ? mrlab::UncondMode::exact
                                 : o.mode == "sampled" ? mrlab::UncondMode::sampled
                                                       : throw UsageError("mode must be exact or sampled");
  const auto res = ordered_map(ns.size(), ctx.jobs, [&](std::size_t i) {
    return mrlab::unconditional_constant(variant, ns[i], o.p, mode, ctx.seed, o.trials);
  });
  r.columns = {"n", "p", "mode", "estimate", "patterns_tested"};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    r.rows.push_back({ns[i], num(o.p), o.mode, num(res[i].estimate), res[i].patterns_tested});
  }
  if (mode == mrlab::UncondMode::exact) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = 0; j < ns.size(); ++j) {
        if (ns[i] < ns[j] && res[i].estimate > res[j].estimate * (1 + 1e-12)) {
          r.fail("exact estimate decreases in n");
        }
      }
    }
  }
  return r;
}

Report cmd_selftest(const Context& ctx, const Options&) {
  Report r;
  r.columns = {"id", "criterion", "result", "detail"};
  int failed = 0;
  for (const auto& c : mrlab::run_acceptance(ctx.seed)) {
    r.rows.push_back({c.id, c.name, c.passed ? "PASS" : "FAIL", c.line(false)});
    failed += !c.passed;
  }
  r.add_meta("failed", failed);
  if (failed > 0) r.fail(std::to_string(failed) + " acceptance criteria failed");
  return r;
}

// ------------------------------------------------------------------- driver

struct Command {
  const char* name;
  const char* help;
  Report (*run)(const Context&, const Options&);
  std::function<void(CLI::App&, Options&)> options;
};

void opt_family(CLI::App& a, Options& o, const char* def, const char* choices) {
  o.family = def;
  a.add_option("--family", o.family, std::string("sequence family: ") + choices);
}

std::vector<Command> commands() {
  return {
      {"gen-gamma", "dump (m, c_m, gamma_m, log gamma_m)", cmd_gen_gamma,
       [](CLI::App& a, Options& o) {
         opt_family(a, o, "power", "power|powerlog|constant|exponential|lacunary");
         a.add_option("--alpha", o.alpha, "decay exponent in (0, 1/2)");
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--blocks", o.blocks, "number of blocks");
         a.add_option("--n", o.n, "sequence length (0: all indices of the blocks)");
       }},
      {"pi-table", "dump the permutation pi and the b list", cmd_pi_table,
       [](CLI::App& a, Options& o) {
         o.n = 64;
         a.add_option("--n", o.n, "table size");
       }},
      {"semigroup-check", "min entries of exp(-tA) against the positivity predicate",
       cmd_semigroup_check,
       [](CLI::App& a, Options& o) {
         a.add_option("--gamma", o.gamma, "gamma source: lacunary|power|powerlog|constant|exponential");
         a.add_option("--alpha", o.alpha, "decay exponent for c families");
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--variant", o.variant, "basis: even-twist|odd-twist|standard");
         o.n = 500;
         a.add_option("--n", o.n, "truncation size");
         a.add_option("--tgrid", o.tgrid, "comma-separated t values (default 2^-10..2^10)");
         a.add_option("--tol", o.tol, "negativity tolerance");
       }},
      {"bv-bound", "variation of exp(-t gamma^alpha) against the closed form", cmd_bv_bound,
       [](CLI::App& a, Options& o) {
         o.alpha = 1.0;
         a.add_option("--alpha", o.alpha, "fractional power alpha > 0");
         o.n = 2000;
         a.add_option("--n", o.n, "sequence length");
         a.add_option("--tgrid", o.tgrid, "comma-separated t values (default 50-point log grid on [0.01, 10])");
       }},
      {"bip-check", "pair bound |gamma_2m^it - gamma_2m-1^it| <= 8|t| c_2m", cmd_bip_check,
       [](CLI::App& a, Options& o) {
         opt_family(a, o, "power", "power|powerlog|constant");
         a.add_option("--alpha", o.alpha, "decay exponent");
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--pairs", o.pairs, "number of pairs m");
         a.add_option("--tgrid", o.tgrid, "comma-separated t values (default 0.01,0.1,1,10,100)");
       }},
      {"sector-probe", "lower bounds of ||lambda R(lambda, A)|| off the sector", cmd_sector_probe,
       [](CLI::App& a, Options& o) {
         a.add_option("--gamma", o.gamma, "gamma source: lacunary|power|powerlog|constant|exponential");
         a.add_option("--alpha", o.alpha, "decay exponent for c families");
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--variant", o.variant, "basis: even-twist|odd-twist|standard");
         o.n = 24;
         a.add_option("--n", o.n, "truncation size");
         o.p = 2.0;
         a.add_option("--p", o.p, "exponent of X_p");
         a.add_option("--angles", o.angles, "angles theta in (0, pi) (default pi/8,pi/4,pi/2,3pi/4)");
         a.add_option("--radii", o.radii, "radii r > 0");
         a.add_option("--trials", o.trials, "random starts per point");
       }},
      {"rad-norm", "Rademacher norm of a seeded random sum", cmd_rad_norm,
       [](CLI::App& a, Options& o) {
         a.add_option("--mode", o.mode, "exact|sampled|disjoint");
         a.add_option("--terms", o.terms, "number of terms K");
         o.blocks = 5;
         a.add_option("--blocks", o.blocks, "number of blocks of the layout");
         o.p = 3.0;
         a.add_option("--p", o.p, "exponent of X_p");
         a.add_option("--samples", o.samples, "Monte-Carlo samples (sampled mode)");
       }},
      {"rbound-blowup", "blow-up series L_k of the associated operator", cmd_rbound_blowup,
       [](CLI::App& a, Options& o) {
         opt_family(a, o, "powerlog", "lacunary|power|powerlog");
         a.add_option("--alpha", o.alpha, "decay exponent");
         a.add_option("--p", o.p, "exponent of X_p");
         a.add_option("--blocks", o.blocks_list, "comma-separated block counts");
       }},
      {"diag-norm", "norm of a -> (a_m c_m) from l_p to X_p", cmd_diag_norm,
       [](CLI::App& a, Options& o) {
         opt_family(a, o, "power", "power|powerlog|constant|exponential");
         a.add_option("--alpha", o.alpha, "decay exponent");
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--p", o.p_list, "comma-separated exponents p > 2");
         o.blocks = 20;
         a.add_option("--blocks", o.blocks, "number of blocks");
       }},
      {"interval-certify", "plan an MR interval and compare on a p grid", cmd_interval_certify,
       [](CLI::App& a, Options& o) {
         a.add_option("--left", o.left, "left endpoint (>= 1)");
         a.add_option("--right", o.right, "right endpoint (> 1 or inf)");
         a.add_flag("--left-closed", o.left_closed, "left endpoint belongs to the interval");
         a.add_flag("--right-closed", o.right_closed, "right endpoint belongs to the interval");
         a.add_option("--grid", o.grid, "grid step 1/n");
         a.add_option("--pmax", o.pmax, "largest grid exponent");
       }},
      {"dissipativity", "X_inf witness pairing for B = -A", cmd_dissipativity,
       [](CLI::App& a, Options& o) {
         opt_family(a, o, "constant", "constant|power|powerlog|exponential");
         a.add_option("--alpha", o.alpha, "decay exponent");
         o.scale = 0.1;
         a.add_option("--scale", o.scale, "constant family value (0: default 1/16)");
         a.add_option("--block", o.block_list, "comma-separated block indices k");
         a.add_option("--kmax", o.kmax, "last block of the onset search");
       }},
      {"uncond-constant", "unconditional-constant estimate of the twisted basis",
       cmd_uncond_constant,
       [](CLI::App& a, Options& o) {
         a.add_option("--variant", o.variant, "basis: even-twist|odd-twist|standard");
         a.add_option("--n", o.n_list, "comma-separated truncation sizes");
         o.p = 2.0;
         a.add_option("--p", o.p, "exponent of X_p");
         a.add_option("--mode", o.mode, "exact|sampled");
         o.trials = 64;
         a.add_option("--trials", o.trials, "random trials (sampled mode)");
       }},
      {"selftest", "run the acceptance criteria", cmd_selftest, [](CLI::App&, Options&) {}},
  };
}

std::uint64_t env_seed() {
  const char* s = std::getenv("MRLAB_SEED");
  if (s == nullptr || *s == '\0') return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw UsageError(std::string("MRLAB_SEED is not an integer: ") + s);
  return v;
}

/// Removes --config <file> and appends its entries as flags, so they win
/// over the command line under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::vector<std::string> extra;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    json cfg;
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string key = it.key();
      key.erase(0, key.find_first_not_of('-'));
      const json& v = it.value();
      if (v.is_boolean()) {
        if (v.get<bool>()) extra.push_back("--" + key);
        continue;
      }
      std::string value;
      if (v.is_array()) {
        for (const auto& e : v) value += (value.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      } else {
        value = v.is_string() ? v.get<std::string>() : v.dump();
      }
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

json echo_config(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out" || name == "format" ||
        name == "jobs" || name == "seed") {
      continue;
    }
    if (opt->get_expected_min() == 0) {
      cfg[name] = opt->count() > 0;
    } else {
      cfg[name] = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    }
  }
  return cfg;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));

  CLI::App app{"mrlab: Schauder multiplier laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  Context ctx;
  const std::uint64_t default_seed = env_seed();
  std::uint64_t seed = default_seed;
  std::string format;
  const std::vector<Command> cmds = commands();
  std::map<std::string, CLI::App*> subs;
  std::vector<Options> per_command(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const Command& c = cmds[i];
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    c.options(*sub, per_command[i]);
    sub->add_option("--seed", seed, "RNG seed (default: $MRLAB_SEED or 42)");
    sub->add_option("--out", ctx.out, "output path, '-' for stdout, or csv|json");
    sub->add_option("--format", format, "csv|json (default per command)");
    sub->add_option("--jobs", ctx.jobs, "worker threads")->check(CLI::PositiveNumber);
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    // Suggest the nearest subcommand or flag for each unknown token.
    const CLI::App* chosen = nullptr;
    for (const auto& a : args) {
      if (subs.count(a)) {
        chosen = subs[a];
        break;
      }
    }
    if (chosen == nullptr) {
      for (const auto& a : args) {
        if (a.rfind("-", 0) == 0) continue;
        std::vector<std::string> names;
        for (const Command& c : cmds) names.emplace_back(c.name);
        const std::string s = closest(a, names);
        if (!s.empty()) std::cerr << "did you mean '" << s << "'?\n";
        break;
      }
    } else {
      std::vector<std::string> flags;
      for (const CLI::Option* opt : chosen->get_options()) {
        for (const auto& l : opt->get_lnames()) flags.push_back("--" + l);
      }
      for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        const std::string flag = a.substr(0, a.find('='));
        if (std::find(flags.begin(), flags.end(), flag) != flags.end()) continue;
        const std::string s = closest(flag, flags);
        std::cerr << "unknown option " << flag;
        if (!s.empty()) std::cerr << "; did you mean " << s << "?";
        std::cerr << "\n";
      }
    }
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  ctx.command = sub->get_name();
  ctx.seed = seed;
  if (ctx.command == "selftest" && sub->get_option("--seed")->count() == 0) {
    ctx.seed = mrlab::kAcceptanceSeed;
  }
  ctx.config = echo_config(sub);
  if (ctx.out == "csv" || ctx.out == "json") {
    format = ctx.out;
    ctx.out = "-";
  }
  if (!format.empty() && format != "csv" && format != "json") {
    throw UsageError("format must be csv or json");
  }
  ctx.format = format;

  const auto idx = static_cast<std::size_t>(
      std::find_if(cmds.begin(), cmds.end(),
                   [&](const Command& c) { return ctx.command == c.name; }) -
      cmds.begin());
  const Report report = cmds[idx].run(ctx, per_command[idx]);
  const std::string text = render(ctx, report);
  if (ctx.out == "-") {
    std::cout << text << std::flush;
  } else {
    std::ofstream f(ctx.out, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
      std::cerr << "I/O error: cannot write '" << ctx.out << "'\n";
      return kExitUsage;
    }
  }
  if (report.exit_code == kExitAssertion) {
    for (const auto& [k, v] : report.meta) {
      if (k == "assertion_failed") std::cerr << "assertion failed: " << v.get<std::string>() << "\n";
    }
  }
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mrlab::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
