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

#include "hyperq/channel_algebra.hpp"
#include "hyperq/random.hpp"

namespace hyperq {
namespace {

TEST(IsCpDiagonal, Examples) {
  EXPECT_TRUE(is_cp_diagonal({{1, 1, 1}}));
  EXPECT_FALSE(is_cp_diagonal({{-0.4, -0.4, -0.4}}));
  EXPECT_FALSE(is_cp_diagonal({{1, 1, -1}}));
  EXPECT_TRUE(is_cp_diagonal({{-1.0 / 3, -1.0 / 3, -1.0 / 3}}));
}

TEST(IsCpDiagonal, AgreesWithChoiMatrix) {
  Rng rng(11);
  int cp = 0;
  for (int i = 0; i < 2000; ++i) {
    const DiagonalChannel c{{uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2)}};
    const bool by_choi = is_cp_transfer(c.transfer());
    EXPECT_EQ(is_cp_diagonal(c), by_choi) << c.lambdas[0] << " " << c.lambdas[1] << " " << c.lambdas[2];
    cp += by_choi;
  }
  EXPECT_GT(cp, 100);
}

TEST(PauliProbabilities, KrausFormReproducesChannel) {
  const DiagonalChannel c{{0.5, -0.2, 0.1}};
  const auto prob = pauli_probabilities(c);
  EXPECT_NEAR(prob[0] + prob[1] + prob[2] + prob[3], 1.0, 1e-15);
  const CpMap m = to_cp_map(c);
  EXPECT_TRUE(m.trace_preserving());
  EXPECT_LE((transfer_of(m) - c.transfer()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(to_cp_map({{1, 1, -1}}), RefusalError);
}

TEST(DecomposeGamma, Examples) {
  auto w = decompose_gamma(uniform_generator());
  EXPECT_EQ(w.a, (std::array<double, 3>{0.5, 0.5, 0.5}));
  w = decompose_gamma(gamma(3));
  EXPECT_EQ(w.a, (std::array<double, 3>{0, 0, 1}));
  w = decompose_gamma({{3, 1, 1}});
  EXPECT_EQ(w.a, (std::array<double, 3>{-0.5, 1.5, 1.5}));
  EXPECT_FALSE(w.nonnegative());
}

TEST(DecomposeGamma, RecompositionExactOnDyadicTriples) {
  Rng rng(3);
  std::uniform_int_distribution<int> grid(-512, 1024);
  for (int i = 0; i < 5000; ++i) {
    const GeneratorTriple h{{grid(rng) / 256.0, grid(rng) / 256.0, grid(rng) / 256.0}};
    EXPECT_EQ(recompose_gamma(decompose_gamma(h)), h);
  }
}

TEST(DecomposeGamma, RecompositionWithinUlpsOnGeneralTriples) {
  Rng rng(4);
  for (int i = 0; i < 5000; ++i) {
    const GeneratorTriple h{{uniform(rng, -2, 4), uniform(rng, -2, 4), uniform(rng, -2, 4)}};
    const auto back = recompose_gamma(decompose_gamma(h));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back.rates[k], h.rates[k], 1e-15 * 8);
  }
}

TEST(Gcp, Examples) {
  EXPECT_TRUE(is_gcp(uniform_generator()));
  EXPECT_DOUBLE_EQ(h_min(uniform_generator()), 1.0);
  EXPECT_TRUE(is_gcp(gamma(3)));
  EXPECT_DOUBLE_EQ(h_min(gamma(3)), 0.0);
  EXPECT_FALSE(is_gcp({{3, 1, 1}}));
}

std::vector<double> lemma_time_grid() {
  // 0 plus 49 log-spaced points in [1e-9, 5].
  std::vector<double> ts{0.0};
  for (int i = 0; i < 49; ++i) ts.push_back(1e-9 * std::pow(5e9, i / 48.0));
  return ts;
}

TEST(Gcp, Lemma3EquivalenceOnRandomTriples) {
  const auto ts = lemma_time_grid();
  Rng rng(2024);
  int in_gcp = 0;
  for (int i = 0; i < 10000; ++i) {
    const GeneratorTriple h{{uniform(rng, -2, 4), uniform(rng, -2, 4), uniform(rng, -2, 4)}};
    bool all_cp = true;
    for (double t : ts) all_cp = all_cp && is_cp_diagonal(exponentiate(h, t));
    EXPECT_EQ(is_gcp(h), all_cp) << h.rates[0] << "," << h.rates[1] << "," << h.rates[2];
    in_gcp += is_gcp(h);
  }
  EXPECT_GT(in_gcp, 500);
}

TEST(Exponentiate, ExamplesAndSemigroupLaw) {
  const auto half = exponentiate(uniform_generator(), std::numbers::ln2);
  for (double l : half.lambdas) EXPECT_NEAR(l, 0.5, 1e-15);
  EXPECT_EQ(exponentiate({{0.3, 2, 5}}, 0.0).lambdas, (std::array<double, 3>{1, 1, 1}));
  const auto pd = exponentiate(gamma(3), 0.7);
  EXPECT_EQ(pd.lambdas, phase_damping(std::exp(-0.7)).lambdas);
  EXPECT_THROW(exponentiate(uniform_generator(), -1.0), DomainError);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const GeneratorTriple h{{uniform(rng, 0, 3), uniform(rng, 0, 3), uniform(rng, 0, 3)}};
    const double s = uniform(rng, 0, 2);
    const double t = uniform(rng, 0, 2);
    const auto a = exponentiate(h, s + t);
    const auto b = exponentiate(h, s);
    const auto c = exponentiate(h, t);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.lambdas[k], b.lambdas[k] * c.lambdas[k], 1e-12);
  }
}

TEST(Exponentiate, GcpChannelsAreUnitalAndTracePreserving) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto h = recompose_gamma({{uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)}});
    const auto c = exponentiate(h, uniform(rng, 0, 3));
    EXPECT_TRUE(is_cp_diagonal(c));
    const TransferMatrix t = c.transfer();
    EXPECT_EQ(t.row(0), Eigen::RowVector4d(1, 0, 0, 0));
    EXPECT_EQ(t.col(0), Eigen::Vector4d(1, 0, 0, 0));
  }
}

TEST(Constructors, Examples) {
  EXPECT_EQ(depolarizing(1).lambdas, (std::array<double, 3>{1, 1, 1}));
  EXPECT_EQ(two_pauli(1).lambdas, (std::array<double, 3>{1, 1, 1}));
  EXPECT_EQ(two_pauli(0.5).lambdas, (std::array<double, 3>{0.5, 0.5, 0}));
  EXPECT_EQ(phase_damping(0.3).lambdas, (std::array<double, 3>{0.3, 0.3, 1}));
  EXPECT_EQ(gamma(1).rates, (std::array<double, 3>{0, 1, 1}));
  EXPECT_EQ(gamma(2).rates, (std::array<double, 3>{1, 0, 1}));
  EXPECT_THROW(depolarizing(-0.4), DomainError);
  EXPECT_THROW(phase_damping(1.1), DomainError);
  EXPECT_THROW(two_pauli(-0.1), DomainError);
  EXPECT_THROW(gamma(4), DomainError);
  EXPECT_NO_THROW(depolarizing(-1.0 / 3));
}

TEST(Constructors, TwoPauliMatchesItsKrausForm) {
  // Theta_l(M) = l M + (1-l)/2 (s1 M s1 + s2 M s2).
  for (double l : {0.0, 0.25, 0.5, 0.9}) {
    const CpMap theta({std::sqrt(l) * pauli_matrix(0), std::sqrt((1 - l) / 2) * pauli_matrix(1),
                       std::sqrt((1 - l) / 2) * pauli_matrix(2)});
    EXPECT_LE((transfer_of(theta) - two_pauli(l).transfer()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(DiagonalizeGenerator, Examples) {
  TransferMatrix s = TransferMatrix::Zero();
  s.bottomRightCorner<3, 3>() = Eigen::Vector3d(1, 2, 3).asDiagonal();
  auto g = diagonalize_generator(s);
  EXPECT_EQ(g.rates.rates, (std::array<double, 3>{1, 2, 3}));
  EXPECT_LE((g.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 0.0);

  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitZ()) *
       Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 1, 0).normalized()))
          .toRotationMatrix();
  s.bottomRightCorner<3, 3>() = rot * Eigen::Vector3d(3, 1, 2).asDiagonal() * rot.transpose();
  g = diagonalize_generator(s);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g.rates.rates[i], i + 1.0, 1e-12);
  const Eigen::Matrix3d back =
      g.rotation * Eigen::Vector3d(g.rates.rates[0], g.rates.rates[1], g.rates.rates[2]).asDiagonal() *
      g.rotation.transpose();
  EXPECT_LE((back - s.bottomRightCorner<3, 3>()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((g.rotation.transpose() * g.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_NEAR(h_min(s), 1.0, 1e-12);

  g = diagonalize_generator(TransferMatrix::Zero());
  EXPECT_EQ(g.rates.rates, (std::array<double, 3>{0, 0, 0}));

  s(1, 2) += 1e-3;
  EXPECT_THROW(diagonalize_generator(s), ValidationError);
  TransferMatrix bad = TransferMatrix::Zero();
  bad(0, 1) = bad(1, 0) = 1.0;
  EXPECT_THROW(diagonalize_generator(bad), ValidationError);
}

TEST(NormalizeRate, Examples) {
  EXPECT_EQ(normalize_rate({{2, 2, 2}}).rates, (std::array<double, 3>{1, 1, 1}));
  EXPECT_EQ(normalize_rate({{2, 4, 6}}).rates, (std::array<double, 3>{1, 2, 3}));
  EXPECT_THROW(normalize_rate(gamma(3)), DomainError);
}

TEST(RandomGenerators, Properties) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto h = random_unit_rate_generator(seed);
    EXPECT_TRUE(is_gcp(h));
    EXPECT_NEAR(h_min(h), 1.0, 1e-12);
  }
  EXPECT_EQ(random_unit_rate_generator(5), random_unit_rate_generator(5));
  EXPECT_EQ(recompose_gamma({{0.5, 0.5, 0.5}}), uniform_generator());
  const CpMap a = random_cp_map(4, 3, 1);
  const CpMap b = random_cp_map(4, 3, 1);
  EXPECT_EQ(a.dim(), 4);
  ASSERT_EQ(a.kraus().size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.kraus()[i], b.kraus()[i]);
  EXPECT_THROW(random_cp_map(3, 1, 0), DomainError);
  EXPECT_THROW(random_cp_map(2, 0, 0), DomainError);
}

TEST(CpMap, AdjointIsDualUnderTraceInnerProduct) {
  const CpMap m = random_cp_map(2, 3, 2);
  Rng rng(6);
  const ComplexMatrix x = complex_gaussian(2, 2, rng);
  const ComplexMatrix y = complex_gaussian(2, 2, rng);
  const Complex lhs = (m.apply(x).adjoint() * y).trace();
  const Complex rhs = (x.adjoint() * m.apply_adjoint(y)).trace();
  EXPECT_LE(std::abs(lhs - rhs), 1e-12);
}

TEST(ProductChannel, ValidationAndApplication) {
  TransferMatrix not_tp = TransferMatrix::Identity();
  not_tp(0, 1) = 0.1;
  EXPECT_THROW(ProductChannel(std::vector<TransferMatrix>{not_tp}), ValidationError);
  TransferMatrix not_unital = TransferMatrix::Identity();
  not_unital(3, 0) = 0.1;
  EXPECT_THROW(ProductChannel(std::vector<TransferMatrix>{not_unital}), ValidationError);
  EXPECT_THROW(ProductChannel(std::vector<TransferMatrix>{}), ValidationError);

  const auto ch = ProductChannel(std::vector<DiagonalChannel>{depolarizing(0.5), phase_damping(0.2)});
  EXPECT_EQ(ch.sites(), 2);
  EXPECT_TRUE(ch.is_cp());
  EXPECT_FALSE(ProductChannel::uniform({{1, 1, -1}}, 1).is_cp());
  const CpMap dense = tensor(to_cp_map(depolarizing(0.5)), to_cp_map(phase_damping(0.2)));
  Rng rng(1);
  const ComplexMatrix x = complex_gaussian(4, 4, rng);
  EXPECT_LE((ch.apply(x) - dense.apply(x)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((ch.apply_adjoint(x) - dense.apply_adjoint(x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProductChannel, LiteralRoundTripsDigits) {
  const auto ch = ProductChannel::uniform(depolarizing(1.0 / 3.0), 2);
  EXPECT_EQ(channel_literal(ch),
            "diag(0.33333333333333331,0.33333333333333331,0.33333333333333331);"
            "diag(0.33333333333333331,0.33333333333333331,0.33333333333333331)");
}

}  // namespace
}  // namespace hyperq
