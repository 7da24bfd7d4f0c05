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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hyperq/inequality_lab.hpp"

namespace hyperq {
namespace {

HermitianOperator e0() { return HermitianOperator::diagonal(Eigen::Vector2d(1, 0)); }

HermitianOperator unit_psd(int n, std::uint64_t seed) { return random_unit_trace_psd(n, seed); }

NormQuery small_query(int restarts = 16) {
  NormQuery q;
  q.restarts = restarts;
  q.seed = 3;
  return q;
}

TEST(Gross, Examples) {
  const auto a = unit_psd(2, 1);
  const auto r = gross_gap(a, {{1, 2, 2.5}}, 1, 2.0);
  EXPECT_NEAR(r.gap, 0.0, 1e-12);
  EXPECT_TRUE(r.pass);
  const auto id = gross_gap(HermitianOperator::identity(2), uniform_generator(), 0, 3.0);
  EXPECT_NEAR(id.lhs, 0.0, 1e-14);
  EXPECT_NEAR(id.rhs, 0.0, 1e-14);
  EXPECT_EQ(r.name, "gross");
  EXPECT_EQ(r.tolerance, 1e-9);
}

TEST(Gross, Errors) {
  const auto a = unit_psd(1, 2);
  EXPECT_THROW(gross_gap(a, uniform_generator(), 0, 1.0), DomainError);
  EXPECT_THROW(gross_gap(a, {{3, 1, 1}}, 0, 2.0), RefusalError);
  EXPECT_THROW(gross_gap(a, uniform_generator(), 1, 2.0), ValidationError);
  EXPECT_THROW(gross_gap(HermitianOperator::from_matrix(pauli_matrix(3)), uniform_generator(), 0, 2.0),
               ValidationError);
}

TEST(Gross, RandomInstancesHold) {
  const auto reports = sweep_gross({0, 300, 17});
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.inputs << " gap=" << r.gap;
}

TEST(Monotonicity, Examples) {
  const auto grid = linear_grid(0, 2, 50);
  auto r = monotonicity_scan(HermitianOperator::identity(2), uniform_generator(), 0, 3.0, grid);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 0.0, 1e-14);
  r = monotonicity_scan(random_psd(2, 4), uniform_generator(), 1, 3.0, grid);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.lhs, 0.0);
  r = monotonicity_scan(random_psd(2, 5), {{1, 2, 3}}, 0, 1.0, grid);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  EXPECT_THROW(monotonicity_scan(random_psd(1, 5), {{3, 1, 1}}, 0, 2.0, grid), RefusalError);
}

TEST(LogSobolev, Examples) {
  const std::vector<GeneratorTriple> hu1{uniform_generator()};
  const auto r = log_sobolev_gap(e0(), hu1);
  EXPECT_NEAR(r.lhs, std::numbers::ln2 / 2, 1e-12);
  EXPECT_NEAR(r.rhs, 0.5, 1e-12);
  EXPECT_NEAR(r.gap, 0.5 - std::numbers::ln2 / 2, 1e-12);
  const std::vector<GeneratorTriple> hu2(2, uniform_generator());
  const auto id = log_sobolev_gap(HermitianOperator::identity(2), hu2);
  EXPECT_NEAR(id.lhs, 0.0, 1e-14);
  EXPECT_NEAR(id.rhs, 0.0, 1e-14);
}

TEST(LogSobolev, RefusesSubUnitRates) {
  const std::vector<GeneratorTriple> g{{{0.5, 1, 1}}};
  EXPECT_THROW(log_sobolev_gap(e0(), g), RefusalError);
  const std::vector<GeneratorTriple> two(2, uniform_generator());
  EXPECT_THROW(log_sobolev_gap(e0(), two), ValidationError);
}

// H_u = id - Delta_0 on one site, built from Kraus operators.
ComplexMatrix uniform_generator_dense(const ComplexMatrix& a, int site, int n) {
  const CpMap id = to_cp_map(depolarizing(1));
  const CpMap zero = to_cp_map(depolarizing(0));
  CpMap m = site == 0 ? zero : id;
  for (int k = 1; k < n; ++k) m = tensor(m, k == site ? zero : id);
  return a - m.apply(a);
}

TEST(LogSobolev, UniformGeneratorMatchesDepolarizingForm) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto a = unit_psd(n, seed);
    const double d = static_cast<double>(a.dim());
    double energy = 0.0;
    for (int k = 0; k < n; ++k)
      energy += (a.matrix() * uniform_generator_dense(a.matrix(), k, n)).trace().real() / d;
    const std::vector<GeneratorTriple> hu(static_cast<std::size_t>(n), uniform_generator());
    EXPECT_NEAR(log_sobolev_gap(a, hu).rhs, 2.0 * energy, 1e-12);
  }
}

TEST(Domination, UnitRateGeneratorsDominateUniform) {
  for (const auto& r : sweep_domination({0, 200, 5})) EXPECT_TRUE(r.pass) << r.inputs;
  EXPECT_THROW(unit_rate_domination(e0(), gamma(1), 0), RefusalError);
}

TEST(GDerivative, IdentityIsFlat) {
  const std::vector<GeneratorTriple> g(2, uniform_generator());
  const auto r = g_derivative(HermitianOperator::identity(2), g, 1.5, 0.4);
  EXPECT_NEAR(r.analytic, 0.0, 1e-12);
  EXPECT_NEAR(r.finite_difference, 0.0, 1e-9);
}

TEST(GDerivative, MatchesFiniteDifference) {
  const std::vector<GeneratorTriple> g{random_unit_rate_generator(1), random_unit_rate_generator(2)};
  const auto r = g_derivative(unit_psd(2, 9), g, 1.5, 0.3);
  EXPECT_NEAR(r.analytic, r.finite_difference, 1e-5 * std::max(1.0, std::abs(r.analytic)));
  EXPECT_LE(r.analytic, 1e-9);
  EXPECT_NEAR(r.q, 1.0 + std::exp(0.6) * 0.5, 1e-14);
  const auto at_zero = g_derivative(unit_psd(2, 9), g, 1.5, 0.0);
  EXPECT_NEAR(at_zero.analytic, at_zero.finite_difference, 1e-5 * std::max(1.0, std::abs(at_zero.analytic)));
}

TEST(GDerivative, NonUnitRatesUseTheSameFormula) {
  const std::vector<GeneratorTriple> g{{{0.3, 0.5, 0.7}}};
  const auto r = g_derivative(unit_psd(1, 4), g, 2.0, 0.2);
  EXPECT_NEAR(r.analytic, r.finite_difference, 1e-5 * std::max(1.0, std::abs(r.analytic)));
}

TEST(GDerivative, Errors) {
  const std::vector<GeneratorTriple> g{uniform_generator()};
  EXPECT_THROW(g_derivative(e0(), g, 1.0, 0.1), DomainError);
  EXPECT_THROW(g_derivative(e0(), g, 2.0, -0.1), DomainError);
  EXPECT_THROW(g_derivative(HermitianOperator::diagonal(Eigen::Vector2d(0, 0)), g, 2.0, 0.1),
               DomainError);
}

TEST(GDerivative, SweepHolds) {
  for (const auto& r : sweep_g_derivative({0, 60, 8})) EXPECT_TRUE(r.pass) << r.name << " " << r.inputs;
}

TEST(HcCertify, DepolarizingExamples) {
  const double t_half = std::numbers::ln2;
  const std::vector<GeneratorTriple> hu2(2, uniform_generator());
  const std::vector<double> t2(2, t_half);
  auto cert = hc_certify(hu2, t2, 2, 4, small_query());
  ASSERT_EQ(cert.points.size(), 1u);
  EXPECT_EQ(cert.points[0].verdict, Verdict::kContractive);
  EXPECT_EQ(cert.points[0].expected, Verdict::kContractive);
  EXPECT_NEAR(cert.points[0].threshold, std::sqrt(1.0 / 3), 1e-15);

  const std::vector<GeneratorTriple> hu1{uniform_generator()};
  const std::vector<double> t1{-std::log(0.7)};
  cert = hc_certify(hu1, t1, 2, 4, small_query());
  const auto& pt = cert.points[0];
  EXPECT_EQ(pt.verdict, Verdict::kViolated);
  EXPECT_EQ(pt.expected, Verdict::kViolated);
  const auto ch = ProductChannel::uniform(depolarizing(0.7), 1);
  EXPECT_GT(ratio(ch, pt.witness, 2, 4), 1.0 + 1e-9);
  EXPECT_NEAR(ratio(ch, pt.witness, 2, 4), pt.witness_ratio, 1e-12);

  const std::vector<double> zero{0.0};
  cert = hc_certify(hu1, zero, 2, 4, small_query());
  EXPECT_EQ(cert.points[0].verdict, Verdict::kViolated);
}

TEST(HcCertify, NormalisesRatesAndLogsIt) {
  const std::vector<GeneratorTriple> g{{{2, 2, 2}}};
  const std::vector<double> t{0.5};
  const auto cert = hc_certify(g, t, 2, 4, small_query());
  ASSERT_EQ(cert.notes.size(), 1u);
  EXPECT_NE(cert.notes[0].find("h_min=2"), std::string::npos);
  EXPECT_EQ(cert.points[0].verdict, Verdict::kContractive);
  EXPECT_EQ(cert.points[0].times, t);
}

TEST(HcCertify, Errors) {
  const std::vector<GeneratorTriple> g{uniform_generator()};
  const std::vector<double> t{0.5};
  EXPECT_THROW(hc_certify(g, t, 1.0, 4, small_query()), DomainError);
  EXPECT_THROW(hc_certify(g, t, 3.0, 2.0, small_query()), DomainError);
  const std::vector<GeneratorTriple> gamma3{gamma(3)};
  EXPECT_THROW(hc_certify(gamma3, t, 2, 4, small_query()), RefusalError);
  const std::vector<GeneratorTriple> bad{{{3, 1, 1}}};
  EXPECT_THROW(hc_certify(bad, t, 2, 4, small_query()), RefusalError);
}

TEST(Region, TwoPauliIsExploratory) {
  ChannelFamily f;
  f.kind = ChannelFamily::Kind::kTwoPauli;
  const std::vector<double> ps{2}, qs{4}, ts{0.1, 1.0};
  const auto cert = region_scan(f, 1, ps, qs, ts, small_query());
  ASSERT_EQ(cert.points.size(), 2u);
  for (const auto& pt : cert.points) {
    EXPECT_EQ(pt.expected, Verdict::kUnknown);
    EXPECT_NE(pt.verdict, Verdict::kContractive);
  }
}

TEST(Region, DepolarizingVerdictsTrackThreshold) {
  ChannelFamily f;
  const std::vector<double> ps{2}, qs{4}, ts{0.1, 0.3, 0.6, 1.0};
  const auto cert = region_scan(f, 2, ps, qs, ts, small_query());
  ASSERT_EQ(cert.points.size(), 4u);
  EXPECT_EQ(cert.points[0].verdict, Verdict::kViolated);
  EXPECT_EQ(cert.points[1].verdict, Verdict::kViolated);
  EXPECT_EQ(cert.points[2].verdict, Verdict::kContractive);
  EXPECT_EQ(cert.points[3].verdict, Verdict::kContractive);
}

TEST(Multiplicativity, Examples) {
  const auto q = small_query();
  auto r = multiplicativity_gap(to_cp_map(depolarizing(1)), depolarizing(1), 2, 4, q);
  EXPECT_TRUE(r.pass) << r.lhs << " " << r.rhs;
  r = multiplicativity_gap(to_cp_map(depolarizing(0.5)), depolarizing(0.5), 2, 4, q);
  EXPECT_TRUE(r.pass) << r.lhs << " " << r.rhs;
  r = multiplicativity_gap(random_cp_map(2, 3, 7), phase_damping(0.6), 1.5, 3, q);
  EXPECT_TRUE(r.pass) << r.lhs << " " << r.rhs;
  EXPECT_THROW(multiplicativity_gap(to_cp_map(depolarizing(1)), depolarizing(1), 2.5, 4, q),
               RefusalError);
  EXPECT_THROW(multiplicativity_gap(to_cp_map(depolarizing(1)), depolarizing(1), 1.5, 1.8, q),
               RefusalError);
}

TEST(BlockNorm, Examples) {
  Rng rng(3);
  const ComplexMatrix g1 = complex_gaussian(2, 2, rng);
  const ComplexMatrix g2 = complex_gaussian(2, 2, rng);
  const ComplexMatrix c11 = g1 * g1.adjoint();
  const ComplexMatrix c22 = g2 * g2.adjoint();
  const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  for (double r : {1.0, 1.2, 2.0, 3.0, 5.0}) {
    const auto rep = block_norm_inequality_check(c11, zero, c22, r);
    EXPECT_NEAR(rep.gap, 0.0, 1e-10 * std::max(1.0, rep.rhs));
  }
  const ComplexMatrix g = complex_gaussian(4, 4, rng);
  const ComplexMatrix full = g * g.adjoint();
  const auto rep2 = block_norm_inequality_check(full.topLeftCorner(2, 2), full.topRightCorner(2, 2),
                                                full.bottomRightCorner(2, 2), 2.0);
  EXPECT_NEAR(rep2.gap, 0.0, 1e-10);
  ComplexMatrix bad = -ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(block_norm_inequality_check(bad, zero, c22, 3.0), ValidationError);
}

TEST(BlockNorm, RandomSweepHolds) {
  for (const auto& r : sweep_block_norm({0, 400, 2})) EXPECT_TRUE(r.pass) << r.inputs;
}

TEST(Sweeps, DeterministicPerSeed) {
  const auto a = sweep_log_sobolev({0, 30, 4});
  const auto b = sweep_log_sobolev({0, 30, 4});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].lhs, b[i].lhs);
    EXPECT_EQ(a[i].inputs, b[i].inputs);
  }
  for (const auto& r : a) EXPECT_TRUE(r.pass);
  for (const auto& r : sweep_monotonicity({2, 20, 4})) EXPECT_TRUE(r.pass) << r.inputs;
}

TEST(Report, PassMatchesGap) {
  const auto r = InequalityReport::make("x", "", 1.0, 1.0 - 2e-9, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.gap, -2e-9, 1e-15);
  EXPECT_TRUE(InequalityReport::make("x", "", 1.0, 1.0 - 0.5e-9, 1e-9).pass);
}

}  // namespace
}  // namespace hyperq
