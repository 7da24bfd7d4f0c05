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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/errors.hpp"
#include "hyperq/pauli_tensor.hpp"
#include "hyperq/random.hpp"
#include "hyperq/spectral.hpp"

// Unital qubit channels and their self-adjoint semigroup generators, both
// written in the Pauli basis: a channel (l1, l2, l3) maps sigma_i to
// l_i sigma_i, a generator (h1, h2, h3) maps sigma_i to h_i sigma_i and kills
// the identity, and exp(-tH) = (e^{-t h1}, e^{-t h2}, e^{-t h3}).

namespace hyperq {

inline constexpr double kCpSlack = 1e-12;

struct DiagonalChannel {
  std::array<double, 3> lambdas{1.0, 1.0, 1.0};

  TransferMatrix transfer() const {
    TransferMatrix t = TransferMatrix::Zero();
    t(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i) t(i + 1, i + 1) = lambdas[i];
    return t;
  }
  bool operator==(const DiagonalChannel&) const = default;
};

struct GeneratorTriple {
  std::array<double, 3> rates{0.0, 0.0, 0.0};

  /** Pauli-basis matrix diag(0, h1, h2, h3). */
  TransferMatrix transfer() const {
    TransferMatrix t = TransferMatrix::Zero();
    for (int i = 0; i < 3; ++i) t(i + 1, i + 1) = rates[i];
    return t;
  }
  bool operator==(const GeneratorTriple&) const = default;
};

/** Coefficients of H = a1 Gamma1 + a2 Gamma2 + a3 Gamma3. */
struct GammaWeights {
  std::array<double, 3> a{0.0, 0.0, 0.0};

  bool nonnegative(double slack = kCpSlack) const {
    return std::all_of(a.begin(), a.end(), [slack](double x) { return x >= -slack; });
  }
};

// --- complete positivity of diagonal channels ------------------------------

/** 1 minus each left-hand side of the four CP inequalities; CP iff all >= 0. */
inline std::array<double, 4> cp_slacks(const DiagonalChannel& c) {
  const auto [l1, l2, l3] = c.lambdas;
  return {1.0 - (l1 + l2 - l3), 1.0 - (l1 - l2 + l3), 1.0 - (-l1 + l2 + l3),
          1.0 - (-l1 - l2 - l3)};
}

inline bool is_cp_diagonal(const DiagonalChannel& c) {
  const auto s = cp_slacks(c);
  return std::all_of(s.begin(), s.end(), [](double x) { return x >= -kCpSlack; });
}

/** Weights of the Pauli-channel form M -> sum_i w_i sigma_i M sigma_i. */
inline std::array<double, 4> pauli_probabilities(const DiagonalChannel& c) {
  const auto [l1, l2, l3] = c.lambdas;
  return {(1 + l1 + l2 + l3) / 4, (1 + l1 - l2 - l3) / 4, (1 - l1 + l2 - l3) / 4,
          (1 - l1 - l2 + l3) / 4};
}

// --- generators -------------------------------------------------------------

inline GammaWeights decompose_gamma(const GeneratorTriple& h) {
  const auto [h1, h2, h3] = h.rates;
  return {{(-h1 + h2 + h3) / 2, (h1 - h2 + h3) / 2, (h1 + h2 - h3) / 2}};
}

inline GeneratorTriple recompose_gamma(const GammaWeights& w) {
  const auto [a1, a2, a3] = w.a;
  return {{a2 + a3, a1 + a3, a1 + a2}};
}

inline bool is_gcp(const GeneratorTriple& h) { return decompose_gamma(h).nonnegative(); }

inline double h_min(const GeneratorTriple& h) {
  return *std::min_element(h.rates.begin(), h.rates.end());
}

/** Least eigenvalue of the traceless block of a symmetric generator matrix. */
inline double h_min(const TransferMatrix& generator) {
  const Eigen::MatrixXd block = generator.bottomRightCorner<3, 3>();
  return jacobi_eigen<double>(block, false).eigenvalues(0);
}

inline DiagonalChannel exponentiate(const GeneratorTriple& h, double t) {
  if (!(t >= 0.0)) throw DomainError("exponentiate: t must be >= 0");
  DiagonalChannel c;
  for (int i = 0; i < 3; ++i) c.lambdas[i] = std::exp(-t * h.rates[i]);
  return c;
}

inline GeneratorTriple normalize_rate(const GeneratorTriple& h) {
  const double m = h_min(h);
  if (!(m > 0.0))
    throw DomainError("normalize_rate: h_min must be > 0 (got " + std::to_string(m) + ")");
  return {{h.rates[0] / m, h.rates[1] / m, h.rates[2] / m}};
}

struct DiagonalizedGenerator {
  GeneratorTriple rates;  // ascending
  Eigen::Matrix3d rotation;  // rotation * diag(rates) * rotation^T = traceless block
};

/** Orthogonal diagonalisation of a symmetric generator with S e0 = 0. */
inline DiagonalizedGenerator diagonalize_generator(const TransferMatrix& s) {
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("diagonalize_generator: matrix is not symmetric");
  if (s.col(0).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("diagonalize_generator: generator does not annihilate the identity");
  const Eigen::MatrixXd block = s.bottomRightCorner<3, 3>();
  const auto sd = jacobi_eigen<double>(block);
  DiagonalizedGenerator out;
  for (int i = 0; i < 3; ++i) out.rates.rates[i] = sd.eigenvalues(i);
  out.rotation = sd.eigenvectors;
  return out;
}

// --- named channels and generators ------------------------------------------

inline DiagonalChannel depolarizing(double lambda) {
  if (!(lambda >= -1.0 / 3.0 - kCpSlack && lambda <= 1.0 + kCpSlack))
    throw DomainError("depolarizing: lambda must lie in [-1/3, 1]");
  return {{lambda, lambda, lambda}};
}

inline DiagonalChannel phase_damping(double lambda) {
  if (!(lambda >= -1.0 && lambda <= 1.0))
    throw DomainError("phase_damping: lambda must lie in [-1, 1]");
  return {{lambda, lambda, 1.0}};
}

/** lambda M + (1-lambda)/2 (X M X + Y M Y), expanded in the Pauli basis. */
inline DiagonalChannel two_pauli(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("two_pauli: lambda must lie in [0, 1]");
  return {{lambda, lambda, 2.0 * lambda - 1.0}};
}

inline GeneratorTriple uniform_generator() { return {{1.0, 1.0, 1.0}}; }

/** Gamma_i has rate 0 on axis i and 1 on the other two. */
inline GeneratorTriple gamma(int i) {
  if (i < 1 || i > 3) throw DomainError("gamma: index must be 1, 2 or 3");
  GeneratorTriple g{{1.0, 1.0, 1.0}};
  g.rates[static_cast<std::size_t>(i - 1)] = 0.0;
  return g;
}

// --- Kraus maps -------------------------------------------------------------

/** Completely positive map A -> sum_i K_i A K_i^*. */
class CpMap {
 public:
  CpMap(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ValidationError("CpMap: no Kraus operators");
    const auto k = kraus_.front().rows();
    for (const auto& op : kraus_)
      if (op.rows() != k || op.cols() != k)
        throw ValidationError("CpMap: Kraus operators must share one square shape");
  }

  Eigen::Index dim() const { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  static constexpr bool is_cp() { return true; }

  bool trace_preserving(double tol = 1e-10) const {
    ComplexMatrix s = ComplexMatrix::Zero(dim(), dim());
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return (s - ComplexMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
  }

  ComplexMatrix apply(const ComplexMatrix& a) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& k : kraus_) out.noalias() += k * a * k.adjoint();
    return out;
  }

  ComplexMatrix apply_adjoint(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& k : kraus_) out.noalias() += k.adjoint() * x * k;
    return out;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
};

/** Omega (x) Phi with Kraus operators K_a (x) L_b. */
inline CpMap tensor(const CpMap& left, const CpMap& right) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(left.kraus().size() * right.kraus().size());
  for (const auto& a : left.kraus())
    for (const auto& b : right.kraus()) ops.push_back(kron(a, b));
  return CpMap(std::move(ops));
}

/** Pauli-channel Kraus form sqrt(w_i) sigma_i; requires the channel to be CP. */
inline CpMap to_cp_map(const DiagonalChannel& c) {
  if (!is_cp_diagonal(c)) throw RefusalError("to_cp_map: channel is not completely positive");
  const auto w = pauli_probabilities(c);
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < 4; ++i)
    if (w[i] > 0.0) ops.push_back(std::sqrt(w[i]) * pauli_matrix(i));
  if (ops.empty()) ops.push_back(ComplexMatrix::Zero(2, 2));
  return CpMap(std::move(ops));
}

inline CpMap random_cp_map(int k, int kraus_count, std::uint64_t seed) {
  if (k != 2 && k != 4) throw DomainError("random_cp_map: k must be 2 or 4");
  if (kraus_count < 1) throw DomainError("random_cp_map: need at least one Kraus operator");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k * kraus_count));
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < kraus_count; ++i) ops.push_back(scale * complex_gaussian(k, k, rng));
  return CpMap(std::move(ops));
}

// --- transfer matrices ------------------------------------------------------

/** Phi applied to an arbitrary 2x2 matrix through its transfer matrix. */
inline ComplexMatrix apply_transfer(const TransferMatrix& t, const ComplexMatrix& x) {
  const std::array<TransferMatrix, 1> one{t};
  return detail::pauli_reconstruct_raw<Complex>(
      detail::apply_product_map_raw<Complex>(one, detail::pauli_expand_raw(x)));
}

/** T_ij = 1/2 Tr sigma_i Phi(sigma_j) for a Kraus map on M_2. */
inline TransferMatrix transfer_of(const CpMap& map) {
  if (map.dim() != 2) throw ValidationError("transfer_of: map must act on 2x2 matrices");
  TransferMatrix t;
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix image = map.apply(pauli_matrix(j));
    for (int i = 0; i < 4; ++i) t(i, j) = 0.5 * (pauli_matrix(i) * image).trace().real();
  }
  return t;
}

/** Choi matrix sum_ab |a><b| (x) Phi(|a><b|). */
inline ComplexMatrix choi_matrix(const TransferMatrix& t) {
  ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(a, b) = 1.0;
      choi.block(2 * a, 2 * b, 2, 2) = apply_transfer(t, unit);
    }
  return choi;
}

/** CP test for a general transfer matrix: Choi matrix PSD to -kCpSlack. */
inline bool is_cp_transfer(const TransferMatrix& t) {
  return jacobi_eigen<Complex>(choi_matrix(t), false).eigenvalues(0) >= -kCpSlack;
}

/**
 * Phi_1 (x) ... (x) Phi_n of unital trace-preserving qubit channels, stored
 * as per-site transfer matrices acting mode-wise on Pauli coefficients.
 */
class ProductChannel {
 public:
  explicit ProductChannel(std::vector<TransferMatrix> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw ValidationError("ProductChannel: no sites");
    if (static_cast<int>(sites_.size()) > kMaxSites)
      throw ValidationError("ProductChannel: more than 8 sites");
    for (const auto& t : sites_) {
      const Eigen::Vector4d e0(1, 0, 0, 0);
      if ((t.row(0).transpose() - e0).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("ProductChannel: site is not trace preserving");
      if ((t.col(0) - e0).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("ProductChannel: non-unital qubit channels are not supported");
    }
  }

  explicit ProductChannel(const std::vector<DiagonalChannel>& sites)
      : ProductChannel(transfers_of(sites)) {}

  static ProductChannel uniform(const DiagonalChannel& c, int n) {
    return ProductChannel(std::vector<DiagonalChannel>(static_cast<std::size_t>(n), c));
  }

  int sites() const { return static_cast<int>(sites_.size()); }
  Eigen::Index dim() const { return Eigen::Index{1} << sites(); }
  const std::vector<TransferMatrix>& transfers() const { return sites_; }

  bool site_is_diagonal(int k) const {
    const TransferMatrix& t = sites_.at(static_cast<std::size_t>(k));
    return (t - TransferMatrix(t.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  }

  DiagonalChannel site_lambdas(int k) const {
    const TransferMatrix& t = sites_.at(static_cast<std::size_t>(k));
    return {{t(1, 1), t(2, 2), t(3, 3)}};
  }

  bool is_cp() const {
    for (int k = 0; k < sites(); ++k) {
      const bool ok = site_is_diagonal(k) ? is_cp_diagonal(site_lambdas(k))
                                          : is_cp_transfer(sites_[static_cast<std::size_t>(k)]);
      if (!ok) return false;
    }
    return true;
  }

  ComplexMatrix apply(const ComplexMatrix& a) const {
    return detail::pauli_reconstruct_raw<Complex>(
        detail::apply_product_map_raw<Complex>(sites_, detail::pauli_expand_raw(a)));
  }

  /** Pauli words are orthogonal with equal norms, so the adjoint is T^T per site. */
  ComplexMatrix apply_adjoint(const ComplexMatrix& x) const {
    std::vector<TransferMatrix> transposed;
    transposed.reserve(sites_.size());
    for (const auto& t : sites_) transposed.push_back(t.transpose());
    return detail::pauli_reconstruct_raw<Complex>(
        detail::apply_product_map_raw<Complex>(transposed, detail::pauli_expand_raw(x)));
  }

  HermitianOperator apply(const HermitianOperator& a) const {
    return HermitianOperator::assume_hermitian(apply(a.matrix()));
  }

 private:
  static std::vector<TransferMatrix> transfers_of(const std::vector<DiagonalChannel>& sites) {
    std::vector<TransferMatrix> out;
    out.reserve(sites.size());
    for (const auto& c : sites) out.push_back(c.transfer());
    return out;
  }

  std::vector<TransferMatrix> sites_;
};

/** Text form "diag(l1,l2,l3);..." (or transfer(16 entries)) with round-trip precision. */
inline std::string channel_literal(const ProductChannel& channel) {
  std::string out;
  char buf[64];
  for (int k = 0; k < channel.sites(); ++k) {
    if (k > 0) out += ';';
    if (channel.site_is_diagonal(k)) {
      const auto l = channel.site_lambdas(k).lambdas;
      out += "diag(";
      for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", l[i]);
        out += (i ? "," : "");
        out += buf;
      }
    } else {
      const TransferMatrix& t = channel.transfers()[static_cast<std::size_t>(k)];
      out += "transfer(";
      for (int i = 0; i < 16; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", t(i / 4, i % 4));
        out += (i ? "," : "");
        out += buf;
      }
    }
    out += ')';
  }
  return out;
}

/** Draws a1, a2, a3 ~ Exp(1), recomposes, and rescales to h_min = 1. */
inline GeneratorTriple random_unit_rate_generator(std::uint64_t seed) {
  Rng rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  for (;;) {
    GammaWeights w{{exp1(rng), exp1(rng), exp1(rng)}};
    const GeneratorTriple h = recompose_gamma(w);
    if (h_min(h) > 0.0) return normalize_rate(h);
  }
}

}  // namespace hyperq
