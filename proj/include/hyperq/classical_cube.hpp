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
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/errors.hpp"
#include "hyperq/norm_estimator.hpp"
#include "hyperq/pauli_tensor.hpp"
#include "hyperq/random.hpp"
#include "hyperq/report.hpp"

// Functions on {0,1}^n. Index i encodes s = (s_1, ..., s_n) with s_1 the most
// significant bit, matching the row order of E_{s_1} (x) ... (x) E_{s_n}.

namespace hyperq {

struct CubeFunction {
  int n = 1;
  Eigen::VectorXd values;

  CubeFunction() = default;
  CubeFunction(int bits, Eigen::VectorXd v) : n(bits), values(std::move(v)) {
    if (bits < 1 || bits > kMaxSites) throw ValidationError("CubeFunction: bits out of range");
    if (values.size() != (Eigen::Index{1} << bits))
      throw ValidationError("CubeFunction: need 2^n values");
  }

  static CubeFunction constant(int bits, double c) {
    return {bits, Eigen::VectorXd::Constant(Eigen::Index{1} << bits, c)};
  }
};

/** T_lambda as n binary convolutions: each bit flips with probability (1-lambda)/2. */
inline CubeFunction noise_apply(const CubeFunction& f, double lambda) {
  if (!(std::abs(lambda) <= 1.0)) throw DomainError("noise_apply: |lambda| must be <= 1");
  const double stay = (1.0 + lambda) / 2.0;
  const double flip = (1.0 - lambda) / 2.0;
  Eigen::VectorXd v = f.values;
  Eigen::VectorXd next(v.size());
  for (int b = 0; b < f.n; ++b) {
    const Eigen::Index bit = Eigen::Index{1} << b;
    for (Eigen::Index i = 0; i < v.size(); ++i) next(i) = stay * v(i) + flip * v(i ^ bit);
    v.swap(next);
  }
  return {f.n, v};
}

inline double lp_norm(const CubeFunction& f, double p, bool normalized) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.values.cwiseAbs().maxCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    if (f.values(i) != 0.0) sum += std::pow(std::abs(f.values(i)), p);
  if (normalized) sum /= static_cast<double>(f.values.size());
  return std::pow(sum, 1.0 / p);
}

/** D = sum_s f(s) E_{s_1} (x) ... (x) E_{s_n}. */
inline HermitianOperator embed_diagonal(const CubeFunction& f) {
  return HermitianOperator::diagonal(f.values);
}

struct Threshold {
  double p = 2.0;
  double q = 2.0;
  double value = 1.0;
};

/** sqrt((p-1)/(q-1)) for 1 < p <= q. */
inline Threshold classical_threshold(double p, double q) {
  if (!(p > 1.0)) throw DomainError("threshold: p must be > 1");
  if (!(q >= p)) throw DomainError("threshold: q must be >= p");
  if (p == q) return {p, q, 1.0};
  return {p, q, std::sqrt((p - 1.0) / (q - 1.0))};
}

/** |||T_lambda f|||_q / |||f|||_p. */
inline double classical_ratio(const CubeFunction& f, double lambda, double p, double q) {
  const double denom = lp_norm(f, p, true);
  if (denom == 0.0) throw DomainError("classical_ratio: zero function");
  return lp_norm(noise_apply(f, lambda), q, true) / denom;
}

inline CubeFunction product_function(int n, double eps) {
  const Eigen::Index size = Eigen::Index{1} << n;
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    double val = 1.0;
    for (int b = 0; b < n; ++b) val *= ((i >> b) & 1) ? 1.0 - eps : 1.0 + eps;
    v(i) = val;
  }
  return {n, v};
}

struct ClassicalVerdict {
  Verdict verdict = Verdict::kContractive;
  double best_ratio = 1.0;
  CubeFunction witness;
};

inline constexpr double kViolationMargin = 1e-9;

/**
 * Searches for f with |||T_lambda f|||_q > (1 + 1e-9) |||f|||_p among the
 * product family prod_j (1 + eps (-1)^{s_j}) (eps on a signed log grid with
 * `resolution` points per sign) and 100 seeded Gaussian functions.
 */
inline ClassicalVerdict classical_hc_check(double lambda, double p, double q, int n,
                                           int resolution = 41, std::uint64_t seed = 0) {
  classical_threshold(p, q);
  if (resolution < 2) throw DomainError("classical_hc_check: resolution must be >= 2");
  ClassicalVerdict out;
  out.witness = CubeFunction::constant(n, 1.0);
  out.best_ratio = classical_ratio(out.witness, lambda, p, q);
  auto consider = [&](const CubeFunction& f) {
    const double r = classical_ratio(f, lambda, p, q);
    if (r > out.best_ratio) {
      out.best_ratio = r;
      out.witness = f;
    }
  };
  for (double eps : signed_log_grid(resolution))
    if (eps != 0.0) consider(product_function(n, eps));
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd v(Eigen::Index{1} << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    consider({n, v});
  }
  out.verdict = out.best_ratio > 1.0 + kViolationMargin ? Verdict::kViolated
                                                          : Verdict::kContractive;
  return out;
}

}  // namespace hyperq
