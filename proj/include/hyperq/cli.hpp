// Copyright 2026 The hyperq Authors
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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperq/channel_algebra.hpp"
#include "hyperq/classical_cube.hpp"
#include "hyperq/errors.hpp"
#include "hyperq/inequality_lab.hpp"
#include "hyperq/norm_estimator.hpp"
#include "hyperq/pauli_tensor.hpp"
#include "hyperq/random.hpp"
#include "hyperq/report.hpp"

namespace hyperq::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnwritable = 3;

/** Bad command-line input; reported with exit code 2. */
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// --- literals ---------------------------------------------------------------------

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError("expected a number, got an empty string");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw UsageError("malformed number '" + t + "'");
  return v;
}

inline std::vector<double> parse_numbers(const std::string& text, std::size_t expected = 0) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_number(part));
  if (expected != 0 && out.size() != expected)
    throw UsageError("expected " + std::to_string(expected) + " numbers in '" + text + "'");
  return out;
}

/**
 * Grid literal: a single value, a comma list, or start:stop:step. Ranges
 * hold start + k step for every k with start + k step < stop - 1e-12.
 */
inline std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    auto values = parse_numbers(text);
    if (values.empty()) throw UsageError("empty grid '" + text + "'");
    return values;
  }
  if (parts.size() != 3) throw UsageError("malformed grid '" + text + "' (want start:stop:step)");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0)) throw UsageError("grid step must be positive in '" + text + "'");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double x = start + static_cast<double>(k) * step;
    if (!(x < stop - 1e-12)) break;
    out.push_back(x);
    if (out.size() > 1000000) throw UsageError("grid '" + text + "' is too large");
  }
  if (out.empty()) throw UsageError("grid '" + text + "' is empty");
  return out;
}

/** Splits "name(args)" into name and args; the whole text when there are no parentheses. */
inline std::pair<std::string, std::string> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return {trim(text), ""};
  if (text.back() != ')') throw UsageError("missing ')' in '" + text + "'");
  return {trim(text.substr(0, open)), text.substr(open + 1, text.size() - open - 2)};
}

/** One site: depolarizing(l), phase-damping(l), two-pauli(l), diag(l1,l2,l3), transfer(16 reals). */
inline TransferMatrix parse_site_channel(const std::string& text) {
  const auto [name, args] = split_call(trim(text));
  try {
    if (name == "depolarizing") return depolarizing(parse_numbers(args, 1)[0]).transfer();
    if (name == "phase-damping") return phase_damping(parse_numbers(args, 1)[0]).transfer();
    if (name == "two-pauli") return two_pauli(parse_numbers(args, 1)[0]).transfer();
    if (name == "diag") {
      const auto v = parse_numbers(args, 3);
      return DiagonalChannel{{v[0], v[1], v[2]}}.transfer();
    }
    if (name == "transfer") {
      const auto v = parse_numbers(args, 16);
      TransferMatrix t;
      for (int i = 0; i < 16; ++i) t(i / 4, i % 4) = v[static_cast<std::size_t>(i)];
      return t;
    }
  } catch (const DomainError& e) {
    throw UsageError(std::string("channel '") + text + "': " + e.what());
  }
  throw UsageError("unknown channel literal '" + text + "'");
}

/** Sites separated by ';'. */
inline ProductChannel parse_channel(const std::string& text) {
  std::vector<TransferMatrix> sites;
  for (const auto& part : split(text, ';')) sites.push_back(parse_site_channel(part));
  try {
    return ProductChannel(sites);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("channel '") + text + "': " + e.what());
  }
}

/** "h1,h2,h3;h1,h2,h3;..." */
inline std::vector<GeneratorTriple> parse_generators(const std::string& text) {
  std::vector<GeneratorTriple> out;
  for (const auto& part : split(text, ';')) {
    const auto v = parse_numbers(part, 3);
    out.push_back({{v[0], v[1], v[2]}});
  }
  if (static_cast<int>(out.size()) > kMaxSites) throw UsageError("too many generator sites");
  return out;
}

inline ChannelFamily parse_family(const std::string& text) {
  const auto [name, args] = split_call(trim(text));
  ChannelFamily f;
  if (name == "depolarizing" && args.empty()) {
    f.kind = ChannelFamily::Kind::kDepolarizing;
  } else if (name == "phase-damping" && args.empty()) {
    f.kind = ChannelFamily::Kind::kPhaseDamping;
  } else if (name == "two-pauli" && args.empty()) {
    f.kind = ChannelFamily::Kind::kTwoPauli;
  } else if (name == "gen") {
    const auto v = parse_numbers(args, 3);
    f.kind = ChannelFamily::Kind::kGenerator;
    f.generator = {{v[0], v[1], v[2]}};
  } else {
    throw UsageError("unknown channel family '" + text +
                     "' (depolarizing, phase-damping, two-pauli, gen(h1,h2,h3))");
  }
  return f;
}

// --- formatting ----------------------------------------------------------------------

/** Rounds to 12 significant digits so JSON output carries exactly those digits. */
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr) + 0.0;  // drops -0
}

inline std::string csv_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string csv_fixed(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

inline Json json_array(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(round12(v(i)));
  return a;
}

inline Json json_array(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(round12(x));
  return a;
}

inline Json to_json(const InequalityReport& r) {
  return Json{{"name", r.name},        {"inputs", r.inputs}, {"lhs", round12(r.lhs)},
              {"rhs", round12(r.rhs)}, {"gap", round12(r.gap)}, {"pass", r.pass},
              {"tolerance", round12(r.tolerance)}};
}

inline Json to_json(const CertificatePoint& pt) {
  return Json{{"channel", pt.channel},
              {"p", round12(pt.p)},
              {"q", round12(pt.q)},
              {"t", json_array(pt.times)},
              {"threshold", round12(pt.threshold)},
              {"estimate", round12(pt.estimate)},
              {"witness_ratio", round12(pt.witness_ratio)},
              {"verdict", to_string(pt.verdict)},
              {"expected", to_string(pt.expected)},
              {"converged", pt.converged},
              {"witness_pauli", json_array(pauli_expand(pt.witness).coeffs())}};
}

/** CSV t column: the smallest site time, which fixes max_i e^{-t_i}. */
inline double csv_time(const CertificatePoint& pt) {
  double t = pt.times.empty() ? 0.0 : pt.times.front();
  for (double x : pt.times) t = std::min(t, x);
  return t;
}

inline std::string certificate_csv(const std::vector<CertificatePoint>& points) {
  std::string s = "p,q,t,threshold,estimate,witness_ratio,verdict\n";
  for (const auto& pt : points) {
    s += csv_short(pt.p) + "," + csv_short(pt.q) + "," + csv_fixed(csv_time(pt)) + "," +
         csv_fixed(pt.threshold) + "," + csv_fixed(pt.estimate) + "," +
         csv_fixed(pt.witness_ratio) + "," + to_string(pt.verdict) + "\n";
  }
  return s;
}

/** A point is acceptable when it is CONTRACTIVE and contraction was not ruled out. */
inline bool point_ok(const CertificatePoint& pt) {
  return pt.verdict == Verdict::kContractive && pt.expected != Verdict::kViolated;
}

// --- commands ----------------------------------------------------------------------

struct Output {
  std::string text;
  bool ok = true;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  int restarts = 64;
  int max_iter = 200;
  std::string out;
  std::string format = "json";

  NormQuery query() const {
    NormQuery q;
    q.seed = seed;
    q.restarts = restarts;
    q.max_iter = max_iter;
    return q;
  }
};

inline Json header(const std::string& command, const CommonOptions& common) {
  return Json{{"command", command}, {"seed", common.seed}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Output cmd_check_cp(const std::vector<std::string>& channels, const CommonOptions& common) {
  Json doc = header("check-cp", common);
  Json records = Json::array();
  for (const auto& text : channels) {
    for (const auto& site : split(text, ';')) {
      const TransferMatrix t = parse_site_channel(site);
      Json rec{{"channel", site}};
      const bool diagonal = (t - TransferMatrix(t.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
      if (diagonal) {
        const DiagonalChannel c{{t(1, 1), t(2, 2), t(3, 3)}};
        const auto slack = cp_slacks(c);
        const auto prob = pauli_probabilities(c);
        rec["cp"] = is_cp_diagonal(c);
        rec["slacks"] = json_array(slack);
        rec["pauli_probabilities"] = json_array(prob);
      } else {
        const ComplexMatrix choi = choi_matrix(t);
        rec["cp"] = is_cp_transfer(t);
        rec["choi_min_eigenvalue"] =
            round12(jacobi_eigen<Complex>(choi, false).eigenvalues(0));
      }
      records.push_back(rec);
    }
  }
  doc["records"] = records;
  return {dump(doc), true};
}

inline Output cmd_decompose(const std::string& gen, const CommonOptions& common) {
  Json doc = header("decompose", common);
  Json records = Json::array();
  for (const auto& h : parse_generators(gen)) {
    const auto w = decompose_gamma(h);
    records.push_back(Json{{"rates", json_array(h.rates)},
                           {"gamma", json_array(w.a)},
                           {"in_gcp", is_gcp(h)},
                           {"h_min", round12(h_min(h))}});
  }
  doc["records"] = records;
  return {dump(doc), true};
}

struct NormArgs {
  std::string channel;
  std::optional<double> p;
  std::optional<double> q;
  std::string witness;
  std::size_t point = 0;
  bool hermitian = false;
};

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Output cmd_norm(NormArgs args, const CommonOptions& common) {
  Json doc = header("norm", common);
  Json rec;
  if (!args.witness.empty()) {
    const Json file = read_json_file(args.witness);
    if (!file.contains("records") || args.point >= file["records"].size())
      throw UsageError("witness file has no record " + std::to_string(args.point));
    const Json& src = file["records"][args.point];
    if (!src.contains("witness_pauli")) throw UsageError("record has no witness_pauli");
    if (args.channel.empty() && src.contains("channel")) args.channel = src["channel"].get<std::string>();
    if (!args.p && src.contains("p")) args.p = src["p"].get<double>();
    if (!args.q && src.contains("q")) args.q = src["q"].get<double>();
    if (args.channel.empty()) throw UsageError("norm: --channel is required");
    const ProductChannel channel = parse_channel(args.channel);
    const auto coeffs = src["witness_pauli"].get<std::vector<double>>();
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                                static_cast<Eigen::Index>(coeffs.size()));
    const HermitianOperator w = pauli_reconstruct(PauliCoefficients(v));
    const double p = args.p.value_or(2.0);
    const double q = args.q.value_or(4.0);
    rec = Json{{"channel", args.channel}, {"p", round12(p)}, {"q", round12(q)},
               {"ratio", round12(ratio(channel, w, p, q))}};
    if (src.contains("witness_ratio")) rec["recorded_ratio"] = src["witness_ratio"];
  } else {
    if (args.channel.empty()) throw UsageError("norm: --channel is required");
    const ProductChannel channel = parse_channel(args.channel);
    NormQuery query = common.query();
    query.p = args.p.value_or(2.0);
    query.q = args.q.value_or(4.0);
    query.hermitian_witness = args.hermitian;
    const NormEstimate est = estimate_norm(channel, query);
    rec = Json{{"channel", args.channel},
               {"p", round12(query.p)},
               {"q", round12(query.q)},
               {"estimate", round12(est.value)},
               {"unnormalized", round12(est.unnormalized_value)},
               {"converged", est.converged},
               {"certified", est.certified},
               {"witness_ratio", round12(est.value)},
               {"witness_pauli", json_array(pauli_expand(est.witness).coeffs())}};
  }
  doc["records"] = Json::array({rec});
  return {dump(doc), true};
}

inline Output emit_certificate(const std::string& command, const Json& extra,
                               const std::vector<CertificatePoint>& points,
                               const std::vector<std::string>& notes,
                               const CommonOptions& common) {
  bool ok = true;
  for (const auto& pt : points) ok = ok && point_ok(pt);
  if (common.format == "csv") return {certificate_csv(points), ok};
  Json doc = header(command, common);
  for (const auto& [k, v] : extra.items()) doc[k] = v;
  doc["notes"] = notes;
  Json records = Json::array();
  for (const auto& pt : points) records.push_back(to_json(pt));
  doc["records"] = records;
  return {dump(doc), ok};
}

struct CertifyArgs {
  std::string gen;
  std::string t = "0";
  std::string times;
  std::string p = "2";
  std::string q = "4";
};

inline Output cmd_hc_certify(const CertifyArgs& args, const CommonOptions& common) {
  const auto gens = parse_generators(args.gen);
  std::vector<std::vector<double>> time_sets;
  if (!args.times.empty()) {
    time_sets.push_back(parse_numbers(args.times, gens.size()));
  } else {
    for (double t : parse_grid(args.t))
      time_sets.emplace_back(gens.size(), t);
  }
  const auto ps = parse_grid(args.p);
  const auto qs = parse_grid(args.q);
  std::vector<CertificatePoint> points;
  std::vector<std::string> notes;
  std::string channel;
  for (double p : ps)
    for (double q : qs) {
      if (q < p) continue;
      for (const auto& ts : time_sets) {
        Certificate c = hc_certify(gens, ts, p, q, common.query());
        for (auto& pt : c.points) points.push_back(std::move(pt));
        for (auto& n : c.notes)
          if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
      }
    }
  return emit_certificate("hc-certify", Json{{"generators", args.gen}}, points, notes, common);
}

struct RegionArgs {
  std::string channel = "depolarizing";
  int n = 1;
  std::string p = "2";
  std::string q = "4";
  std::string t = "0:2:0.1";
};

inline Output cmd_region(const RegionArgs& args, const CommonOptions& common) {
  const ChannelFamily family = parse_family(args.channel);
  if (args.n < 1 || args.n > kMaxSites) throw UsageError("region: --n must be in 1..8");
  const auto ps = parse_grid(args.p);
  const auto qs = parse_grid(args.q);
  const auto ts = parse_grid(args.t);
  for (double p : ps)
    if (!(p > 1.0)) throw UsageError("region: p must be > 1");
  for (double t : ts)
    if (!(t >= 0.0)) throw UsageError("region: t must be >= 0");
  Certificate c = region_scan(family, args.n, ps, qs, ts, common.query());
  return emit_certificate("region", Json{{"family", family.name()}, {"n", args.n}}, c.points,
                          c.notes, common);
}

struct CheckArgs {
  std::string suites = "gross,logsobolev,blocknorm,monotonicity,gderiv,domination";
  int n = 0;
  std::size_t samples = 1000;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gross",  "logsobolev", "blocknorm",
                                              "monotonicity", "gderiv", "domination"};
  return names;
}

inline std::vector<InequalityReport> run_suite(const std::string& suite, const SweepSpec& spec) {
  if (suite == "gross") return sweep_gross(spec);
  if (suite == "logsobolev") return sweep_log_sobolev(spec);
  if (suite == "blocknorm") return sweep_block_norm(spec);
  if (suite == "monotonicity") return sweep_monotonicity(spec);
  if (suite == "gderiv") return sweep_g_derivative(spec);
  if (suite == "domination") return sweep_domination(spec);
  throw UsageError("unknown suite '" + suite + "'");
}

inline Output cmd_check(const CheckArgs& args, const CommonOptions& common) {
  if (args.n < 0 || args.n > 3) throw UsageError("check: --n must be 0 (cycle 1..3) or 1..3");
  std::vector<std::string> suites = split(args.suites, ',');
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UsageError("unknown suite '" + s + "'");
  Json doc = header("check", common);
  Json summary = Json::array();
  Json records = Json::array();
  bool ok = true;
  for (const auto& s : suites) {
    const auto id = static_cast<std::uint64_t>(
        std::find(suite_names().begin(), suite_names().end(), s) - suite_names().begin());
    const SweepSpec spec{args.n, args.samples, derive_seed(common.seed, id)};
    const auto reports = run_suite(s, spec);
    std::size_t failed = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
      failed += r.pass ? 0 : 1;
      worst = std::min(worst, r.gap + r.tolerance);
      records.push_back(to_json(r));
    }
    ok = ok && failed == 0;
    summary.push_back(Json{{"suite", s},
                           {"total", reports.size()},
                           {"failed", failed},
                           {"worst_margin", reports.empty() ? 0.0 : round12(worst)}});
  }
  doc["summary"] = summary;
  doc["records"] = records;
  return {dump(doc), ok};
}

struct MultArgs {
  std::size_t samples = 100;
  std::string p = "1,1.5,2";
  std::string q = "2,3,4";
};

/** Instance i: Omega random on M_2 with 1..4 Kraus operators; Phi cycles three families. */
inline Output cmd_mult(const MultArgs& args, const CommonOptions& common) {
  const auto ps = parse_grid(args.p);
  const auto qs = parse_grid(args.q);
  Json doc = header("mult", common);
  Json records = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < args.samples; ++i) {
    Rng rng(derive_seed(common.seed, i));
    const int kraus = std::uniform_int_distribution<int>(1, 4)(rng);
    const CpMap omega = random_cp_map(2, kraus, rng());
    DiagonalChannel phi;
    switch (i % 3) {
      case 0: phi = depolarizing(uniform(rng, -1.0 / 3.0, 1.0)); break;
      case 1: phi = phase_damping(uniform(rng, -1.0, 1.0)); break;
      default:
        do {
          phi = DiagonalChannel{{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
                                 uniform(rng, -1.0, 1.0)}};
        } while (!is_cp_diagonal(phi));
    }
    const double p = ps[i % ps.size()];
    const double q = qs[(i / ps.size()) % qs.size()];
    NormQuery query = common.query();
    query.seed = derive_seed(common.seed, i + args.samples);
    const auto report = multiplicativity_gap(omega, phi, p, q, query);
    ok = ok && report.pass;
    records.push_back(to_json(report));
  }
  doc["records"] = records;
  return {dump(doc), ok};
}

struct ClassicalArgs {
  std::string lambda = "0:1:0.1";
  std::string p = "2";
  std::string q = "4";
  int n = 2;
};

inline Output cmd_classical(const ClassicalArgs& args, const CommonOptions& common) {
  if (args.n < 1 || args.n > 16) throw UsageError("classical: --n must be in 1..16");
  const auto ls = parse_grid(args.lambda);
  const auto ps = parse_grid(args.p);
  const auto qs = parse_grid(args.q);
  Json doc = header("classical", common);
  Json records = Json::array();
  bool ok = true;
  std::uint64_t index = 0;
  for (double p : ps)
    for (double q : qs) {
      if (q < p) continue;
      for (double lambda : ls) {
        const double theta = classical_threshold(p, q).value;
        const auto v = classical_hc_check(lambda, p, q, args.n, 41, derive_seed(common.seed, index++));
        const Verdict expected = std::abs(lambda) <= theta * (1.0 + 1e-12) ? Verdict::kContractive
                                                                             : Verdict::kViolated;
        ok = ok && v.verdict == Verdict::kContractive && expected == Verdict::kContractive;
        records.push_back(Json{{"lambda", round12(lambda)},
                               {"p", round12(p)},
                               {"q", round12(q)},
                               {"n", args.n},
                               {"threshold", round12(theta)},
                               {"best_ratio", round12(v.best_ratio)},
                               {"verdict", to_string(v.verdict)},
                               {"expected", to_string(expected)},
                               {"witness", json_array(v.witness.values)}});
      }
    }
  doc["records"] = records;
  return {dump(doc), ok};
}

// --- entry point ---------------------------------------------------------------------

/** Runs one command line; returns the process exit code. */
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hyperq: hypercontractivity checks for qubit product channels"};
  app.name("hyperq");
  app.require_subcommand(1, 1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--seed", common.seed, "master seed");
  app.add_option("--restarts", common.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", common.max_iter, "ascent iterations per restart")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", common.out, "output file (default stdout)");
  app.add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> cp_channels;
  auto* check_cp = app.add_subcommand("check-cp", "complete-positivity test of channel literals");
  check_cp->add_option("--channel", cp_channels, "channel literal (repeatable)")->required();

  std::string gen;
  auto* decompose = app.add_subcommand("decompose", "Gamma decomposition of generator triples");
  decompose->add_option("--gen", gen, "h1,h2,h3[;...]")->required();

  NormArgs norm_args;
  double norm_p = 0.0;
  double norm_q = 0.0;
  auto* norm = app.add_subcommand("norm", "p->q norm estimate, or the ratio at a recorded witness");
  norm->add_option("--channel", norm_args.channel, "product channel literal");
  auto* norm_p_opt = norm->add_option("--p", norm_p, "input norm order");
  auto* norm_q_opt = norm->add_option("--q", norm_q, "output norm order");
  norm->add_option("--witness", norm_args.witness, "JSON file with witness_pauli records");
  norm->add_option("--point", norm_args.point, "record index in the witness file");
  norm->add_flag("--hermitian", norm_args.hermitian, "optimise over Hermitian witnesses");

  CertifyArgs cert_args;
  auto* certify = app.add_subcommand("hc-certify", "certify e^{-t H} contraction from L^p to L^q");
  certify->add_option("--gen", cert_args.gen, "h1,h2,h3[;...]")->required();
  certify->add_option("--t", cert_args.t, "time grid applied to every site");
  certify->add_option("--times", cert_args.times, "per-site times t1,t2,...");
  certify->add_option("--p", cert_args.p, "p grid");
  certify->add_option("--q", cert_args.q, "q grid");

  RegionArgs region_args;
  auto* region = app.add_subcommand("region", "verdicts over a (p, q, t) grid for a channel family");
  region->add_option("--channel", region_args.channel,
                     "depolarizing, phase-damping, two-pauli or gen(h1,h2,h3)");
  region->add_option("--n", region_args.n, "number of sites");
  region->add_option("--p", region_args.p, "p grid");
  region->add_option("--q", region_args.q, "q grid");
  region->add_option("--t", region_args.t, "t grid");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "seeded inequality sweeps");
  check->add_option("--suite", check_args.suites, "comma list of suites");
  check->add_option("--n", check_args.n, "sites per instance (0 cycles 1..3)");
  check->add_option("--samples", check_args.samples, "instances per suite");

  MultArgs mult_args;
  auto* mult = app.add_subcommand("mult", "multiplicativity of p->q norms under tensoring");
  mult->add_option("--samples", mult_args.samples, "number of instances");
  mult->add_option("--p", mult_args.p, "p values, cycled");
  mult->add_option("--q", mult_args.q, "q values, cycled");

  ClassicalArgs classical_args;
  auto* classical = app.add_subcommand("classical", "noise operator on the Boolean cube");
  classical->add_option("--lambda", classical_args.lambda, "lambda grid");
  classical->add_option("--p", classical_args.p, "p grid");
  classical->add_option("--q", classical_args.q, "q grid");
  classical->add_option("--n", classical_args.n, "number of bits");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hyperq: " << e.what() << "\n";
    return kExitUsage;
  }
  if (norm_p_opt->count()) norm_args.p = norm_p;
  if (norm_q_opt->count()) norm_args.q = norm_q;

  std::ofstream file;
  if (!common.out.empty()) {
    file.open(common.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "hyperq: cannot write '" << common.out << "'\n";
      return kExitUnwritable;
    }
  }

  Output result;
  try {
    const bool csv = common.format == "csv";
    if (csv && !certify->parsed() && !region->parsed())
      throw UsageError("csv output is available for hc-certify and region only");
    if (check_cp->parsed()) result = cmd_check_cp(cp_channels, common);
    else if (decompose->parsed()) result = cmd_decompose(gen, common);
    else if (norm->parsed()) result = cmd_norm(norm_args, common);
    else if (certify->parsed()) result = cmd_hc_certify(cert_args, common);
    else if (region->parsed()) result = cmd_region(region_args, common);
    else if (check->parsed()) result = cmd_check(check_args, common);
    else if (mult->parsed()) result = cmd_mult(mult_args, common);
    else if (classical->parsed()) result = cmd_classical(classical_args, common);
  } catch (const UsageError& e) {
    err << "hyperq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "hyperq: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "hyperq: out of domain: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RefusalError& e) {
    err << "hyperq: refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "hyperq: numerical failure: " << e.what() << "\n";
    return kExitFailed;
  }

  std::ostream& sink = common.out.empty() ? out : file;
  sink << result.text;
  sink.flush();
  if (!sink) {
    err << "hyperq: write failed\n";
    return kExitUnwritable;
  }
  return result.ok ? kExitOk : kExitFailed;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace hyperq::cli
