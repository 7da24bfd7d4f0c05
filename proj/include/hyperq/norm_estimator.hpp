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
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/channel_algebra.hpp"
#include "hyperq/errors.hpp"
#include "hyperq/parallel.hpp"
#include "hyperq/pauli_tensor.hpp"
#include "hyperq/random.hpp"
#include "hyperq/spectral.hpp"

// Lower bounds on |||Phi|||_{p->q} by maximising
//   R(A) = |||Phi(A)|||_q / |||A|||_p
// over witnesses A. For completely positive maps the supremum is attained on
// positive semidefinite A, parametrised here as A = B B^* with B free, so the
// ascent never leaves the cone. R is scale invariant, so B is renormalised to
// unit Frobenius norm after each step.

namespace hyperq {

/** Anything that can be applied to (and adjoint-applied to) dim x dim matrices. */
template <class M>
concept SuperOperator = requires(const M& m, const ComplexMatrix& x) {
  { m.dim() } -> std::convertible_to<Eigen::Index>;
  { m.apply(x) } -> std::convertible_to<ComplexMatrix>;
  { m.apply_adjoint(x) } -> std::convertible_to<ComplexMatrix>;
  { m.is_cp() } -> std::convertible_to<bool>;
};

struct NormQuery {
  double p = 2.0;
  double q = 4.0;
  int restarts = 64;
  int max_iter = 200;
  double step = 1.0;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  /** Optimise over Hermitian rather than PSD witnesses (needed for non-CP maps). */
  bool hermitian_witness = false;
  /** Extra deterministic starting witnesses, tried after the built-in ones. */
  std::vector<HermitianOperator> initial_witnesses;

  void validate() const {
    if (!(p >= 1.0)) throw DomainError("NormQuery: p must be >= 1");
    if (!(q >= p)) throw DomainError("NormQuery: q must be >= p");
    if (!std::isfinite(q)) throw DomainError("NormQuery: p and q must be finite");
    if (restarts < 1) throw DomainError("NormQuery: restarts must be >= 1");
    if (max_iter < 0) throw DomainError("NormQuery: max_iter must be >= 0");
    if (!(step > 0.0)) throw DomainError("NormQuery: step must be > 0");
  }
};

struct NormEstimate {
  double value = 0.0;              // normalised-norm convention
  double unnormalized_value = 0.0; // ||Phi||_{p->q}
  HermitianOperator witness;
  bool converged = false;
  int iterations = 0;
  bool certified = true;           // false when the map is not CP
};

inline constexpr int kBacktrackHalvings = 30;
inline constexpr int kStallIterations = 5;

/** |||L|||_{p->q} = dim^{1/p - 1/q} ||L||_{p->q}. */
inline double unnormalized_from_normalized(double value, Eigen::Index dim, double p, double q) {
  return value * std::pow(static_cast<double>(dim), 1.0 / q - 1.0 / p);
}

namespace detail {

/** ln tau(|X|^p) from eigenvalues; -inf for X = 0. */
inline double log_normalized_power_sum(const Eigen::VectorXd& eig, double p) {
  const double s = power_sum(eig, p);
  return std::log(s / static_cast<double>(eig.size()));
}

/**
 * V diag(sgn(x)|x|^r) V^*. In PSD mode the spectrum is clamped at 0 and
 * 0^0 = 1, matching d Tr A = Tr dA on the cone.
 */
inline ComplexMatrix signed_power(const SpectralDecomposition<Complex>& sd, double r,
                                  bool psd) {
  Eigen::VectorXd w(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double x = clamp_eigenvalue(sd.eigenvalues(i));
    if (psd) {
      const double y = std::max(x, 0.0);
      w(i) = (r == 0.0) ? 1.0 : (y == 0.0 ? 0.0 : std::pow(y, r));
    } else {
      w(i) = x == 0.0 ? 0.0 : (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), r);
    }
  }
  return sd.eigenvectors * w.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
}

/** Spectra of A and X = Phi(A) with ln R, shared by value and gradient. */
struct Evaluation {
  double log_value = -std::numeric_limits<double>::infinity();
  SpectralDecomposition<Complex> a;
  SpectralDecomposition<Complex> x;
};

inline double log_normalized_norm(const Eigen::VectorXd& e, double r) {
  if (std::isinf(r)) return std::log(e.cwiseAbs().maxCoeff());
  return log_normalized_power_sum(e, r) / r;
}

template <SuperOperator Map>
Evaluation evaluate(const Map& map, const ComplexMatrix& a, double p, double q,
                    bool want_vectors) {
  const ComplexMatrix herm_a = 0.5 * (a + a.adjoint());
  const ComplexMatrix x = map.apply(herm_a);
  Evaluation ev;
  ev.a = jacobi_eigen<Complex>(herm_a, want_vectors);
  ev.x = jacobi_eigen<Complex>(0.5 * (x + x.adjoint()), want_vectors);
  ev.log_value = log_normalized_norm(ev.x.eigenvalues, q) - log_normalized_norm(ev.a.eigenvalues, p);
  return ev;
}

template <SuperOperator Map>
double log_ratio(const Map& map, const ComplexMatrix& a, double p, double q) {
  return evaluate(map, a, p, q, false).log_value;
}

/**
 * Gradient of ln R with respect to A (Hermitian):
 *   Phi^*(sgn(X)|X|^{q-1}) / Tr|X|^q - sgn(A)|A|^{p-1} / Tr|A|^p.
 */
template <SuperOperator Map>
ComplexMatrix gradient_from(const Map& map, const Evaluation& ev, double p, double q, bool psd) {
  const double sp = power_sum(ev.a.eigenvalues, p);
  const double sq = power_sum(ev.x.eigenvalues, q);
  const ComplexMatrix gx = map.apply_adjoint(signed_power(ev.x, q - 1.0, psd));
  const ComplexMatrix ga = signed_power(ev.a, p - 1.0, psd);
  const ComplexMatrix g = gx / sq - ga / sp;
  return 0.5 * (g + g.adjoint());
}

template <SuperOperator Map>
ComplexMatrix log_ratio_gradient_a(const Map& map, const ComplexMatrix& a, double p, double q,
                                   bool psd) {
  return gradient_from(map, evaluate(map, a, p, q, true), p, q, psd);
}

struct RestartResult {
  double log_value = -std::numeric_limits<double>::infinity();
  ComplexMatrix witness;
  bool converged = false;
  int iterations = 0;
};

/** B B^* for PSD mode, the Hermitian part of B otherwise. */
inline ComplexMatrix witness_from(const ComplexMatrix& b, bool psd) {
  if (psd) return b * b.adjoint();
  return 0.5 * (b + b.adjoint());
}

template <SuperOperator Map>
RestartResult ascend(const Map& map, ComplexMatrix b, const NormQuery& query, bool psd) {
  RestartResult out;
  const double p = query.p;
  const double q = query.q;
  b /= b.norm();
  Evaluation current = evaluate(map, witness_from(b, psd), p, q, true);
  out.log_value = current.log_value;
  out.witness = witness_from(b, psd);
  if (!std::isfinite(current.log_value)) return out;

  double step = query.step;
  int stall = 0;
  for (int it = 0; it < query.max_iter; ++it) {
    out.iterations = it + 1;
    const ComplexMatrix ga = gradient_from(map, current, p, q, psd);
    const ComplexMatrix grad = psd ? ComplexMatrix(2.0 * ga * b) : ga;
    if (grad.norm() <= 1e-14) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    Evaluation trial_eval;
    ComplexMatrix trial;
    for (int h = 0; h <= kBacktrackHalvings; ++h) {
      trial = b + step * grad;
      const double nrm = trial.norm();
      if (nrm > 0.0) {
        trial /= nrm;
        trial_eval = evaluate(map, witness_from(trial, psd), p, q, true);
        if (std::isfinite(trial_eval.log_value) && trial_eval.log_value > current.log_value) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double improvement = trial_eval.log_value - current.log_value;
    b = trial;
    current = std::move(trial_eval);
    step = std::min(step * 2.0, 1e6);
    stall = improvement < query.tol ? stall + 1 : 0;
    if (stall >= kStallIterations) {
      out.converged = true;
      break;
    }
  }
  out.log_value = current.log_value;
  out.witness = witness_from(b, psd);
  return out;
}

inline ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  return matrix_power(HermitianOperator::assume_hermitian(a), 0.5).matrix();
}

}  // namespace detail

/**
 * Normalised ratio |||Phi(A)|||_q / |||A|||_p for a nonzero Hermitian A.
 * Invariant under A -> cA for c > 0.
 */
template <SuperOperator Map>
double ratio(const Map& map, const HermitianOperator& a, double p, double q) {
  detail::check_norm_order(p);
  detail::check_norm_order(q);
  if (a.dim() != map.dim()) throw ValidationError("ratio: witness dimension mismatch");
  if (a.matrix().cwiseAbs().maxCoeff() == 0.0) throw DomainError("ratio: zero witness");
  return std::exp(detail::log_ratio(map, a.matrix(), p, q));
}

// --- single-qubit oracle ------------------------------------------------------

struct OracleResult {
  double value = 1.0;
  double radius = 0.0;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  HermitianOperator witness;
};

namespace detail {

/** ln of the normalised ratio at witness I + r n.sigma, with |Phi(n)| = s. */
inline double bloch_log_ratio(double r, double s, double p, double q) {
  auto log_norm = [](double x, double e) {
    const double hi = std::pow(1.0 + x, e);
    const double lo = std::pow(std::max(0.0, 1.0 - x), e);
    return std::log(0.5 * (hi + lo)) / e;
  };
  return log_norm(r * s, q) - log_norm(r, p);
}

inline OracleResult bloch_oracle(double s, const Eigen::Vector3d& axis, double p, double q) {
  constexpr int kGrid = 1000;
  int best = 0;
  double best_val = 0.0;  // r = 0 gives ln 1
  for (int i = 1; i <= kGrid; ++i) {
    const double v = bloch_log_ratio(static_cast<double>(i) / kGrid, s, p, q);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
  double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = bloch_log_ratio(x1, s, p, q);
  double f2 = bloch_log_ratio(x2, s, p, q);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = bloch_log_ratio(x2, s, p, q);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = bloch_log_ratio(x1, s, p, q);
    }
  }
  double r = best / static_cast<double>(kGrid);
  double v = best_val;
  const double mid = 0.5 * (lo + hi);
  const double vm = bloch_log_ratio(mid, s, p, q);
  if (vm > v) {
    r = mid;
    v = vm;
  }
  OracleResult out;
  out.value = std::exp(v);
  out.radius = r;
  out.axis = axis;
  ComplexMatrix w = pauli_matrix(0);
  for (int i = 0; i < 3; ++i) w += (r * axis(i)) * pauli_matrix(i + 1);
  out.witness = HermitianOperator::assume_hermitian(w);
  return out;
}

/** Index (0..2) of the largest |lambda|; ties go to the higher axis. */
inline int dominant_axis(const DiagonalChannel& c) {
  int best = 2;
  for (int i = 1; i >= 0; --i)
    if (std::abs(c.lambdas[i]) > std::abs(c.lambdas[best])) best = i;
  return best;
}

}  // namespace detail

/**
 * Exact |||Phi|||_{p->q} for a CP diagonal qubit channel. The PSD witness
 * I + r n.sigma has p-norm depending on r only, while the image norm grows
 * with |Phi(n)|, so n is aligned with the largest |lambda_i| and the search
 * reduces to r in [0, 1]: a 1000-point grid refined by golden section.
 */
inline OracleResult single_qubit_norm_oracle(const DiagonalChannel& c, double p, double q) {
  if (!is_cp_diagonal(c)) throw RefusalError("single_qubit_norm_oracle: channel is not CP");
  if (!(p >= 1.0 && q >= p)) throw DomainError("single_qubit_norm_oracle: need 1 <= p <= q");
  const int axis = detail::dominant_axis(c);
  return detail::bloch_oracle(std::abs(c.lambdas[axis]), Eigen::Vector3d::Unit(axis), p, q);
}

/** Same reduction for a general unital transfer matrix, via its top singular pair. */
inline OracleResult single_qubit_norm_oracle(const TransferMatrix& t, double p, double q) {
  if (!is_cp_transfer(t)) throw RefusalError("single_qubit_norm_oracle: channel is not CP");
  if (!(p >= 1.0 && q >= p)) throw DomainError("single_qubit_norm_oracle: need 1 <= p <= q");
  const Eigen::Matrix3d m = t.bottomRightCorner<3, 3>();
  const Eigen::MatrixXd gram = m.transpose() * m;
  const auto sd = jacobi_eigen<double>(gram);
  const Eigen::Vector3d axis = sd.eigenvectors.col(2);
  return detail::bloch_oracle(std::sqrt(std::max(0.0, sd.eigenvalues(2))), axis, p, q);
}

/** Tensor product of the per-site oracle witnesses. */
inline HermitianOperator product_oracle_witness(const ProductChannel& channel, double p,
                                                double q) {
  ComplexMatrix w = ComplexMatrix::Ones(1, 1);
  for (int k = 0; k < channel.sites(); ++k) {
    const auto site = channel.site_is_diagonal(k)
                          ? single_qubit_norm_oracle(channel.site_lambdas(k), p, q)
                          : single_qubit_norm_oracle(channel.transfers()[static_cast<std::size_t>(k)], p, q);
    w = kron(w, site.witness.matrix());
  }
  return HermitianOperator::assume_hermitian(w);
}

namespace detail {

template <SuperOperator Map>
std::vector<HermitianOperator> builtin_starts(const Map&, double, double) {
  return {};
}

inline std::vector<HermitianOperator> builtin_starts(const ProductChannel& channel, double p,
                                                     double q) {
  if (!channel.is_cp()) return {};
  return {product_oracle_witness(channel, p, q)};
}

}  // namespace detail

/**
 * Best ratio over query.restarts projected-gradient ascents. Restart order:
 * built-in starts (the product of single-site oracle witnesses for a
 * ProductChannel), then I, then query.initial_witnesses, then random
 * factors B seeded by derive_seed(query.seed, restart). In PSD mode every
 * third random restart (every other one when p = 1) uses a rank-one B.
 * Restarts may run concurrently; the merge keeps the largest value and breaks
 * ties by restart index, so the result does not depend on scheduling.
 */
template <SuperOperator Map>
NormEstimate estimate_norm(const Map& map, const NormQuery& query) {
  query.validate();
  const bool cp = map.is_cp();
  if (!cp && !query.hermitian_witness)
    throw RefusalError(
        "estimate_norm: map is not completely positive; PSD witnesses do not certify its "
        "norm (use the hermitian-witness override)");
  const bool psd = !query.hermitian_witness;
  const Eigen::Index d = map.dim();

  std::vector<HermitianOperator> starts = detail::builtin_starts(map, query.p, query.q);
  starts.push_back(HermitianOperator::assume_hermitian(ComplexMatrix::Identity(d, d)));
  for (const auto& w : query.initial_witnesses) {
    if (w.dim() != d) throw ValidationError("estimate_norm: initial witness dimension mismatch");
    starts.push_back(w);
  }

  const auto total = static_cast<std::size_t>(query.restarts);
  std::vector<detail::RestartResult> results(total);
  parallel_for(total, [&](std::size_t r) {
    ComplexMatrix b;
    if (r < starts.size()) {
      b = psd ? detail::psd_sqrt(starts[r].matrix()) : starts[r].matrix();
    } else {
      Rng rng(derive_seed(query.seed, r));
      const std::size_t k = r - starts.size();
      const bool rank_one = psd && ((query.p == 1.0) ? (k % 2 == 0) : (k % 3 == 2));
      b = complex_gaussian(d, rank_one ? 1 : d, rng);
      if (!psd) b = 0.5 * (b + b.adjoint()).eval();
    }
    results[r] = detail::ascend(map, std::move(b), query, psd);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < total; ++r)
    if (results[r].log_value > results[best].log_value) best = r;

  NormEstimate out;
  ComplexMatrix w = results[best].witness;
  const double tr = std::abs(w.trace().real());
  if (psd && tr > 0.0) w /= tr;
  out.witness = HermitianOperator::assume_hermitian(w);
  out.value = ratio(map, out.witness, query.p, query.q);
  out.unnormalized_value = unnormalized_from_normalized(out.value, d, query.p, query.q);
  out.converged = results[best].converged;
  out.iterations = results[best].iterations;
  out.certified = cp;
  return out;
}

// --- diagonal witness scan ---------------------------------------------------

struct WitnessScan {
  double best_ratio = 1.0;
  HermitianOperator witness;
};

/** Signed log grid: 0 and +-10^e for e on an even grid in [-4, 0]. */
inline std::vector<double> signed_log_grid(int per_sign = 41) {
  std::vector<double> eps{0.0};
  for (int i = 0; i < per_sign; ++i) {
    const double e = -4.0 + 4.0 * i / (per_sign - 1);
    eps.push_back(std::pow(10.0, e));
    eps.push_back(-std::pow(10.0, e));
  }
  return eps;
}

/**
 * Lower bound from witnesses diagonal in each site's dominant Pauli axis:
 * site j carries I + eps_j sigma_{a_j}, the image of diag(1+eps_j, 1-eps_j).
 * Tries a shared eps on every site and eps on one site at a time (the rest
 * at the identity), over a signed log grid of eps.
 */
inline WitnessScan diagonal_witness_scan(const ProductChannel& channel, double p, double q) {
  detail::check_norm_order(p);
  detail::check_norm_order(q);
  const int n = channel.sites();
  std::vector<int> axis(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (!channel.site_is_diagonal(k))
      throw ValidationError("diagonal_witness_scan: site " + std::to_string(k) + " is not diagonal");
    axis[static_cast<std::size_t>(k)] = detail::dominant_axis(channel.site_lambdas(k)) + 1;
  }
  auto build = [&](const std::vector<double>& eps) {
    ComplexMatrix w = ComplexMatrix::Ones(1, 1);
    for (int k = 0; k < n; ++k)
      w = kron(w, pauli_matrix(0) + eps[static_cast<std::size_t>(k)] *
                                        pauli_matrix(axis[static_cast<std::size_t>(k)]));
    return HermitianOperator::assume_hermitian(w);
  };

  WitnessScan out;
  out.witness = HermitianOperator::identity(n);
  out.best_ratio = ratio(channel, out.witness, p, q);
  auto consider = [&](const std::vector<double>& eps) {
    const auto w = build(eps);
    const double r = ratio(channel, w, p, q);
    if (r > out.best_ratio) {
      out.best_ratio = r;
      out.witness = w;
    }
  };
  for (double e : signed_log_grid()) {
    if (e == 0.0) continue;
    consider(std::vector<double>(static_cast<std::size_t>(n), e));
    if (n > 1)
      for (int j = 0; j < n; ++j) {
        std::vector<double> eps(static_cast<std::size_t>(n), 0.0);
        eps[static_cast<std::size_t>(j)] = e;
        consider(eps);
      }
  }
  return out;
}

// --- gradient validation -----------------------------------------------------

/** Gradient of R(B) = ratio(B B^*) with respect to B (real inner product Re Tr X^*Y). */
template <SuperOperator Map>
ComplexMatrix ratio_gradient(const Map& map, const ComplexMatrix& b, double p, double q) {
  const ComplexMatrix a = b * b.adjoint();
  const double r = std::exp(detail::log_ratio(map, a, p, q));
  return r * 2.0 * detail::log_ratio_gradient_a(map, a, p, q, true) * b;
}

/**
 * Frechet derivative of X -> f(X) at Hermitian X in direction E
 * (Daleckii-Krein): V (L o V^*EV) V^*, L_ij the first divided differences.
 */
template <class F, class FPrime>
ComplexMatrix frechet_derivative(const ComplexMatrix& x, const ComplexMatrix& e, F&& f,
                                 FPrime&& fprime) {
  const auto sd = jacobi_eigen<Complex>(x);
  const Eigen::Index d = x.rows();
  ComplexMatrix inner = sd.eigenvectors.adjoint() * e * sd.eigenvectors;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double xi = sd.eigenvalues(i);
      const double xj = sd.eigenvalues(j);
      const double l = (xi == xj) ? fprime(xi) : (f(xi) - f(xj)) / (xi - xj);
      inner(i, j) *= l;
    }
  return sd.eigenvectors * inner * sd.eigenvectors.adjoint();
}

struct GradientCheck {
  double max_relative_deviation = 0.0;
  double gradient_norm = 0.0;  // |grad_B R|_F with the radial part removed
  bool fallback = false;
};

inline double min_spectral_gap(const Eigen::VectorXd& eig) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < eig.size(); ++i) gap = std::min(gap, eig(i) - eig(i - 1));
  return gap;
}

/**
 * Compares directional derivatives of R(B) at B = A^{1/2} along 20 seeded
 * random directions: (a) Frechet derivatives of x -> x^p, x -> x^q traced,
 * (b) the optimiser's spectral gradient, against central differences at step
 * 1e-5. Deviations are |analytic - fd| / max(1, |analytic|, |fd|). When A or
 * Phi(A) has a spectral gap below 1e-6 the analytic route is skipped and
 * fallback is reported.
 */
template <SuperOperator Map>
GradientCheck gradient_check(const Map& map, const HermitianOperator& a, double p, double q,
                             std::uint64_t seed = 0) {
  constexpr double kStep = 1e-5;
  constexpr int kDirections = 20;
  const ComplexMatrix b = detail::psd_sqrt(a.matrix());
  const ComplexMatrix am = b * b.adjoint();
  const ComplexMatrix x = map.apply(am);
  const auto ea = jacobi_eigen<Complex>(am, false).eigenvalues;
  const auto ex = jacobi_eigen<Complex>(0.5 * (x + x.adjoint()), false).eigenvalues;

  GradientCheck out;
  out.fallback = min_spectral_gap(ea) < 1e-6 || min_spectral_gap(ex) < 1e-6;

  auto r_of = [&](const ComplexMatrix& bb) {
    return std::exp(detail::log_ratio(map, bb * bb.adjoint(), p, q));
  };
  const double r0 = r_of(b);
  const ComplexMatrix grad = ratio_gradient(map, b, p, q);
  const double radial = (b.adjoint() * grad).trace().real() / b.squaredNorm();
  out.gradient_norm = (grad - radial * b).norm();

  auto pow_f = [](double e) { return [e](double t) { return t <= 0.0 ? 0.0 : std::pow(t, e); }; };
  auto pow_fp = [](double e) {
    return [e](double t) { return t <= 0.0 ? (e == 1.0 ? 1.0 : 0.0) : e * std::pow(t, e - 1.0); };
  };
  const double sp = detail::power_sum(ea, p);
  const double sq = detail::power_sum(ex, q);

  Rng rng(seed);
  for (int k = 0; k < kDirections; ++k) {
    ComplexMatrix dir = complex_gaussian(b.rows(), b.cols(), rng);
    dir /= dir.norm();
    const double fd = (r_of(b + kStep * dir) - r_of(b - kStep * dir)) / (2.0 * kStep);
    const double via_gradient = (grad.adjoint() * dir).trace().real();
    auto deviation = [&](double analytic) {
      return std::abs(analytic - fd) / std::max({1.0, std::abs(analytic), std::abs(fd)});
    };
    out.max_relative_deviation = std::max(out.max_relative_deviation, deviation(via_gradient));
    if (out.fallback) continue;
    const ComplexMatrix da = dir * b.adjoint() + b * dir.adjoint();
    const ComplexMatrix dx = map.apply(da);
    const double dsp = frechet_derivative(am, da, pow_f(p), pow_fp(p)).trace().real();
    const double dsq =
        frechet_derivative(0.5 * (x + x.adjoint()), dx, pow_f(q), pow_fp(q)).trace().real();
    const double via_frechet = r0 * (dsq / (q * sq) - dsp / (p * sp));
    out.max_relative_deviation = std::max(out.max_relative_deviation, deviation(via_frechet));
  }
  return out;
}

}  // namespace hyperq
