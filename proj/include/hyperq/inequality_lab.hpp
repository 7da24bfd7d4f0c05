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
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/channel_algebra.hpp"
#include "hyperq/classical_cube.hpp"
#include "hyperq/errors.hpp"
#include "hyperq/norm_estimator.hpp"
#include "hyperq/parallel.hpp"
#include "hyperq/pauli_tensor.hpp"
#include "hyperq/random.hpp"
#include "hyperq/report.hpp"

// Numerical checks of the hypercontractivity chain: Gross's lemma, monotone
// norms along the semigroup, the log-Sobolev inequality, the derivative of
// the normalised q(t)-norm, certification of the contraction region,
// multiplicativity of p->q norms and King's 2x2 block-norm inequality.
// Sites are 0-based: site k of n is the k-th Kronecker factor.

namespace hyperq {

inline constexpr double kClosedFormTolerance = 1e-9;
inline constexpr double kOptimizerTolerance = 1e-6;
inline constexpr double kSharpnessMargin = 0.05;

namespace detail {

/** Transfer t on one site, identity elsewhere, applied to an n-site matrix. */
inline ComplexMatrix apply_local(const TransferMatrix& t, int site, int n,
                                 const ComplexMatrix& a) {
  std::vector<TransferMatrix> transfers(static_cast<std::size_t>(n), TransferMatrix::Identity());
  transfers.at(static_cast<std::size_t>(site)) = t;
  return pauli_reconstruct_raw<Complex>(apply_product_map_raw<Complex>(transfers, pauli_expand_raw(a)));
}

inline ComplexMatrix apply_product(std::span<const TransferMatrix> transfers, const ComplexMatrix& a) {
  return pauli_reconstruct_raw<Complex>(apply_product_map_raw<Complex>(transfers, pauli_expand_raw(a)));
}

inline double re_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

inline void require_psd(const ComplexMatrix& a, const char* who) {
  const double scale = std::max(1.0, a.norm());
  if (jacobi_eigen<Complex>(a, false).eigenvalues(0) < -1e-10 * scale)
    throw ValidationError(std::string(who) + ": matrix is not positive semidefinite");
}

inline void require_site(int site, int n, const char* who) {
  if (site < 0 || site >= n) throw ValidationError(std::string(who) + ": site out of range");
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string fmt(const GeneratorTriple& h) {
  return fmt(h.rates[0]) + "," + fmt(h.rates[1]) + "," + fmt(h.rates[2]);
}

}  // namespace detail

// --- Gross's lemma, monotonicity, log-Sobolev --------------------------------

/**
 * <A^{p/2}, H_k(A^{p/2})> <= (p/2)^2/(p-1) <A, H_k(A^{p-1})> for H in G^CP
 * acting on one site of A >= 0.
 */
inline InequalityReport gross_gap(const HermitianOperator& a, const GeneratorTriple& h, int site,
                                  double p) {
  if (!(p > 1.0)) throw DomainError("gross_gap: p must be > 1");
  if (!is_gcp(h)) throw RefusalError("gross_gap: generator is not in G^CP");
  const int n = a.sites();
  detail::require_site(site, n, "gross_gap");
  detail::require_psd(a.matrix(), "gross_gap");
  const ComplexMatrix half = matrix_power(a, p / 2.0).matrix();
  const ComplexMatrix pm1 = matrix_power(a, p - 1.0).matrix();
  const TransferMatrix t = h.transfer();
  const double lhs = detail::re_inner(half, detail::apply_local(t, site, n, half));
  const double rhs = (p / 2.0) * (p / 2.0) / (p - 1.0) *
                     detail::re_inner(a.matrix(), detail::apply_local(t, site, n, pm1));
  return InequalityReport::make("gross",
                                "n=" + std::to_string(n) + " site=" + std::to_string(site) +
                                    " p=" + detail::fmt(p) + " H=" + detail::fmt(h),
                                lhs, rhs, kClosedFormTolerance);
}

/** lhs = largest step increase of t -> ||(I (x) e^{-tH})(A)||_q over the grid; rhs = 0. */
inline InequalityReport monotonicity_scan(const HermitianOperator& a, const GeneratorTriple& h,
                                          int site, double q, std::span<const double> t_grid) {
  detail::check_norm_order(q);
  if (!is_gcp(h)) throw RefusalError("monotonicity_scan: generator is not in G^CP");
  const int n = a.sites();
  detail::require_site(site, n, "monotonicity_scan");
  double prev = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const ComplexMatrix image =
        detail::apply_local(exponentiate(h, t_grid[i]).transfer(), site, n, a.matrix());
    const double v = schatten_norm(HermitianOperator::assume_hermitian(image), q);
    if (i > 0) worst = std::max(worst, v - prev);
    prev = v;
  }
  if (t_grid.size() < 2) worst = 0.0;
  return InequalityReport::make("monotonicity",
                                "n=" + std::to_string(n) + " site=" + std::to_string(site) +
                                    " q=" + detail::fmt(q) + " H=" + detail::fmt(h) +
                                    " points=" + std::to_string(t_grid.size()),
                                worst, 0.0, 1e-10);
}

/** -tau(A^2) ln tau(A^2) + tau(A^2 ln A^2) <= 2 sum_k tau(A H_k(A)). */
inline InequalityReport log_sobolev_gap(const HermitianOperator& a,
                                        std::span<const GeneratorTriple> generators) {
  const int n = a.sites();
  if (static_cast<int>(generators.size()) != n)
    throw ValidationError("log_sobolev_gap: need one generator per site");
  for (const auto& h : generators) {
    if (!is_gcp(h)) throw RefusalError("log_sobolev_gap: generator is not in G^CP");
    if (h_min(h) < 1.0 - 1e-9)
      throw RefusalError("log_sobolev_gap: generator rate below 1 (needs G^CP_1)");
  }
  detail::require_psd(a.matrix(), "log_sobolev_gap");
  const double d = static_cast<double>(a.dim());
  const HermitianOperator sq = HermitianOperator::assume_hermitian(a.matrix() * a.matrix());
  const double tau_sq = sq.matrix().trace().real() / d;
  const double entropy = matrix_function(sq, xlogx).matrix().trace().real() / d;
  const double lhs = -xlogx(tau_sq) + entropy;
  double energy = 0.0;
  std::string gens;
  for (int k = 0; k < n; ++k) {
    const auto& h = generators[static_cast<std::size_t>(k)];
    energy += detail::re_inner(a.matrix(), detail::apply_local(h.transfer(), k, n, a.matrix())) / d;
    gens += (k ? ";" : "") + detail::fmt(h);
  }
  return InequalityReport::make("logsobolev", "n=" + std::to_string(n) + " H=" + gens, lhs,
                                2.0 * energy, kClosedFormTolerance);
}

/** tau(A H_u^{(k)}(A)) <= tau(A H^{(k)}(A)) for unit-rate H. */
inline InequalityReport unit_rate_domination(const HermitianOperator& a, const GeneratorTriple& h,
                                             int site) {
  if (h_min(h) < 1.0 - 1e-9) throw RefusalError("unit_rate_domination: needs h_min >= 1");
  const int n = a.sites();
  detail::require_site(site, n, "unit_rate_domination");
  const double d = static_cast<double>(a.dim());
  const double with_h =
      detail::re_inner(a.matrix(), detail::apply_local(h.transfer(), site, n, a.matrix())) / d;
  const double with_u = detail::re_inner(
      a.matrix(), detail::apply_local(uniform_generator().transfer(), site, n, a.matrix())) / d;
  return InequalityReport::make("domination",
                                "n=" + std::to_string(n) + " site=" + std::to_string(site) +
                                    " H=" + detail::fmt(h),
                                with_u, with_h, 1e-10);
}

// --- g'(t) along q(t) = 1 + e^{2t}(p-1) ---------------------------------------

struct GDerivative {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double q = 0.0;
};

namespace detail {

inline std::vector<TransferMatrix> semigroup_transfers(std::span<const GeneratorTriple> generators,
                                                       double t) {
  std::vector<TransferMatrix> out;
  for (const auto& h : generators) {
    TransferMatrix m = TransferMatrix::Zero();
    m(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i) m(i + 1, i + 1) = std::exp(-t * h.rates[i]);
    out.push_back(m);
  }
  return out;
}

inline double q_of_t(double p, double t) { return 1.0 + std::exp(2.0 * t) * (p - 1.0); }

/** g(t) = ln(2^{-n/q} ||B||_q) with B = e^{-tH_1} (x) ... (x) e^{-tH_n}(A). */
inline double g_value(const HermitianOperator& a, std::span<const GeneratorTriple> generators,
                      double p, double t) {
  const int n = a.sites();
  const double q = q_of_t(p, t);
  const ComplexMatrix b = apply_product(semigroup_transfers(generators, t), a.matrix());
  const Eigen::VectorXd eig = jacobi_eigen<Complex>(0.5 * (b + b.adjoint()), false).eigenvalues;
  double trace_bq = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double x = clamp_eigenvalue(eig(i));
    if (x > 0.0) trace_bq += std::pow(x, q);
  }
  return -n * std::numbers::ln2 / q + std::log(trace_bq) / q;
}

}  // namespace detail

/**
 * Closed-form g'(t) next to a finite difference of g (central at step 1e-5,
 * or a second-order forward difference when t < 1e-5). B^{q-1}, B^q and
 * ln B^q come from a single spectral decomposition of B.
 */
inline GDerivative g_derivative(const HermitianOperator& a,
                                std::span<const GeneratorTriple> generators, double p, double t) {
  if (!(p > 1.0)) throw DomainError("g_derivative: p must be > 1");
  if (!(t >= 0.0)) throw DomainError("g_derivative: t must be >= 0");
  const int n = a.sites();
  if (static_cast<int>(generators.size()) != n)
    throw ValidationError("g_derivative: need one generator per site");
  detail::require_psd(a.matrix(), "g_derivative");

  const double q = detail::q_of_t(p, t);
  const ComplexMatrix b_raw = detail::apply_product(detail::semigroup_transfers(generators, t), a.matrix());
  const ComplexMatrix b = 0.5 * (b_raw + b_raw.adjoint());
  const auto sd = jacobi_eigen<Complex>(b);
  Eigen::VectorXd pow_qm1(sd.eigenvalues.size());
  double trace_bq = 0.0;
  double trace_bq_log_bq = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double x = std::max(0.0, detail::clamp_eigenvalue(sd.eigenvalues(i)));
    pow_qm1(i) = x > 0.0 ? std::pow(x, q - 1.0) : 0.0;
    if (x > 0.0) {
      const double xq = std::pow(x, q);
      trace_bq += xq;
      trace_bq_log_bq += xq * q * std::log(x);
    }
  }
  if (!(trace_bq > 0.0)) throw DomainError("g_derivative: Tr B^q vanishes");
  const ComplexMatrix b_qm1 =
      sd.eigenvectors * pow_qm1.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
  double energy = 0.0;
  for (int k = 0; k < n; ++k)
    energy += detail::re_inner(
        b_qm1, detail::apply_local(generators[static_cast<std::size_t>(k)].transfer(), k, n, b));

  GDerivative out;
  out.q = q;
  out.analytic = 2.0 / trace_bq * (q - 1.0) / (q * q) *
                 (n * std::numbers::ln2 * trace_bq - trace_bq * std::log(trace_bq) +
                  trace_bq_log_bq - q * q / (2.0 * (q - 1.0)) * energy);

  constexpr double h = 1e-5;
  auto g = [&](double s) { return detail::g_value(a, generators, p, s); };
  if (t >= h)
    out.finite_difference = (g(t + h) - g(t - h)) / (2.0 * h);
  else
    out.finite_difference = (-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h);
  return out;
}

// --- certification of the contraction region -----------------------------------

struct CertificatePoint {
  std::string channel;            // per-site literal, re-parsable by the CLI
  double p = 0.0;
  double q = 0.0;
  std::vector<double> times;      // as supplied, before any rate normalisation
  double threshold = 0.0;
  double estimate = 0.0;
  double witness_ratio = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  Verdict expected = Verdict::kUnknown;
  bool converged = false;
  HermitianOperator witness;
};

struct Certificate {
  std::string channel;
  std::vector<CertificatePoint> points;
  std::vector<std::string> notes;
};

inline double threshold_value(double p, double q) { return classical_threshold(p, q).value; }

/**
 * VIOLATED when the estimator or the diagonal scan exceeds 1 + 1e-9;
 * CONTRACTIVE when the estimate stays within 1 + 1e-6 and contraction is
 * expected; INCONCLUSIVE otherwise (the estimator only gives lower bounds).
 */
inline CertificatePoint certify_channel(const ProductChannel& channel, double p, double q,
                                        std::vector<double> times, Verdict expected,
                                        const NormQuery& base_query) {
  NormQuery query = base_query;
  query.p = p;
  query.q = q;
  CertificatePoint pt;
  pt.channel = channel_literal(channel);
  pt.p = p;
  pt.q = q;
  pt.times = std::move(times);
  pt.threshold = threshold_value(p, q);
  pt.expected = expected;

  const NormEstimate est = estimate_norm(channel, query);
  pt.estimate = est.value;
  pt.converged = est.converged;
  pt.witness = est.witness;
  pt.witness_ratio = est.value;

  bool all_diagonal = true;
  for (int k = 0; k < channel.sites(); ++k) all_diagonal = all_diagonal && channel.site_is_diagonal(k);
  if (all_diagonal) {
    const WitnessScan scan = diagonal_witness_scan(channel, p, q);
    if (scan.best_ratio > pt.witness_ratio) {
      pt.witness_ratio = scan.best_ratio;
      pt.witness = scan.witness;
    }
  }
  if (pt.witness_ratio > 1.0 + kViolationMargin)
    pt.verdict = Verdict::kViolated;
  else if (est.value <= 1.0 + kOptimizerTolerance && expected == Verdict::kContractive)
    pt.verdict = Verdict::kContractive;
  else
    pt.verdict = Verdict::kInconclusive;
  return pt;
}

/**
 * Certifies e^{-t_1 H_1} (x) ... (x) e^{-t_n H_n} at (p, q). Generators must
 * lie in G^CP with h_min > 0; rates other than 1 are normalised with the
 * time rescaled to t h_min, and each rescaling is noted in the certificate.
 */
inline Certificate hc_certify(std::span<const GeneratorTriple> generators,
                              std::span<const double> times, double p, double q,
                              const NormQuery& query) {
  if (!(p > 1.0)) throw DomainError("hc_certify: p must be > 1");
  if (!(q >= p)) throw DomainError("hc_certify: q must be >= p");
  if (generators.empty()) throw ValidationError("hc_certify: no generators");
  if (generators.size() != times.size())
    throw ValidationError("hc_certify: need one time per generator");

  Certificate cert;
  std::vector<DiagonalChannel> sites;
  double max_lambda = 0.0;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    GeneratorTriple h = generators[k];
    double t = times[k];
    if (!(t >= 0.0)) throw DomainError("hc_certify: times must be >= 0");
    if (!is_gcp(h)) throw RefusalError("hc_certify: generator " + detail::fmt(h) + " is not in G^CP");
    const double m = h_min(h);
    if (!(m > 0.0))
      throw RefusalError("hc_certify: generator " + detail::fmt(h) + " has h_min = 0");
    if (std::abs(m - 1.0) > 1e-12) {
      cert.notes.push_back("site " + std::to_string(k) + ": rates " + detail::fmt(h) +
                           " normalised by h_min=" + detail::fmt(m) + ", t " + detail::fmt(t) +
                           " -> " + detail::fmt(t * m));
      h = normalize_rate(h);
      t *= m;
    }
    max_lambda = std::max(max_lambda, std::exp(-t));
    sites.push_back(exponentiate(h, t));
  }
  const ProductChannel channel(sites);
  cert.channel = channel_literal(channel);
  const double theta = threshold_value(p, q);
  const Verdict expected =
      max_lambda <= theta * (1.0 + 1e-12) ? Verdict::kContractive : Verdict::kViolated;
  cert.points.push_back(certify_channel(channel, p, q,
                                        std::vector<double>(times.begin(), times.end()), expected,
                                        query));
  return cert;
}

/** One-parameter channel families scanned by region(). */
struct ChannelFamily {
  enum class Kind { kDepolarizing, kPhaseDamping, kTwoPauli, kGenerator } kind = Kind::kDepolarizing;
  GeneratorTriple generator = uniform_generator();

  std::string name() const {
    switch (kind) {
      case Kind::kDepolarizing: return "depolarizing";
      case Kind::kPhaseDamping: return "phase-damping";
      case Kind::kTwoPauli: return "two-pauli";
      case Kind::kGenerator: return "gen(" + detail::fmt(generator) + ")";
    }
    return "";
  }

  /** Site channel at time t (lambda = e^{-t} for the named families). */
  DiagonalChannel at(double t) const {
    switch (kind) {
      case Kind::kDepolarizing: return depolarizing(std::exp(-t));
      case Kind::kPhaseDamping: return phase_damping(std::exp(-t));
      case Kind::kTwoPauli: return two_pauli(std::exp(-t));
      case Kind::kGenerator: return exponentiate(generator, t);
    }
    return {};
  }

  /** Expected verdict from the threshold; UNKNOWN outside unit-rate G^CP semigroups. */
  Verdict expected(double p, double q, double t) const {
    double rate = 0.0;
    if (kind == Kind::kDepolarizing) rate = 1.0;
    if (kind == Kind::kGenerator && is_gcp(generator)) rate = h_min(generator);
    if (!(rate > 0.0)) return Verdict::kUnknown;
    return std::exp(-t * rate) <= threshold_value(p, q) * (1.0 + 1e-12) ? Verdict::kContractive
                                                                         : Verdict::kViolated;
  }
};

/** Certificate over every (p, q, t) with p <= q; n identical sites. */
inline Certificate region_scan(const ChannelFamily& family, int n, std::span<const double> ps,
                               std::span<const double> qs, std::span<const double> ts,
                               const NormQuery& query) {
  Certificate cert;
  cert.channel = family.name() + "^" + std::to_string(n);
  for (double p : ps)
    for (double q : qs) {
      if (q < p) continue;
      for (double t : ts) {
        const auto channel = ProductChannel::uniform(family.at(t), n);
        cert.points.push_back(certify_channel(channel, p, q,
                                              std::vector<double>(static_cast<std::size_t>(n), t),
                                              family.expected(p, q, t), query));
      }
    }
  return cert;
}

// --- multiplicativity and the block-norm inequality ------------------------------

/**
 * ||Omega (x) Phi||_{p->q} against ||Omega||_{p->q} ||Phi||_{p->q} for
 * 1 <= p <= 2 <= q. The left side is seeded with the product of the two
 * factor witnesses, so it can only fall short of the right side by rounding.
 */
inline InequalityReport multiplicativity_gap(const CpMap& omega, const DiagonalChannel& phi,
                                             double p, double q, const NormQuery& base_query) {
  if (!(p >= 1.0 && p <= 2.0 && q >= 2.0))
    throw RefusalError("multiplicativity_gap: requires 1 <= p <= 2 <= q");
  if (!is_cp_diagonal(phi)) throw RefusalError("multiplicativity_gap: Phi is not CP");
  NormQuery query = base_query;
  query.p = p;
  query.q = q;
  query.initial_witnesses.clear();

  const NormEstimate est_omega = estimate_norm(omega, query);
  const NormEstimate est_phi = estimate_norm(ProductChannel(std::vector<DiagonalChannel>{phi}), query);
  const CpMap joint = tensor(omega, to_cp_map(phi));
  NormQuery joint_query = query;
  joint_query.initial_witnesses.push_back(HermitianOperator::assume_hermitian(
      kron(est_omega.witness.matrix(), est_phi.witness.matrix())));
  const NormEstimate est_joint = estimate_norm(joint, joint_query);

  const double lhs = est_joint.unnormalized_value;
  const double rhs = est_omega.unnormalized_value * est_phi.unnormalized_value;
  auto report = InequalityReport::make(
      "multiplicativity",
      "k=" + std::to_string(omega.dim()) + " kraus=" + std::to_string(omega.kraus().size()) +
          " phi=(" + detail::fmt(phi.lambdas[0]) + "," + detail::fmt(phi.lambdas[1]) + "," +
          detail::fmt(phi.lambdas[2]) + ") p=" + detail::fmt(p) + " q=" + detail::fmt(q),
      lhs, rhs, 1e-4 * rhs);
  report.pass = std::abs(lhs - rhs) <= 1e-4 * rhs && lhs >= rhs - 1e-8;
  return report;
}

/**
 * For PSD [[C11, C12], [C12^*, C22]]: its r-norm is at most the r-norm of the
 * 2x2 matrix of block r-norms when r >= 2, and at least when r <= 2.
 * lhs/rhs are ordered so that pass means the inequality holds.
 */
inline InequalityReport block_norm_inequality_check(const ComplexMatrix& c11,
                                                    const ComplexMatrix& c12,
                                                    const ComplexMatrix& c22, double r) {
  if (!(r >= 1.0)) throw DomainError("block_norm_inequality_check: r must be >= 1");
  const Eigen::Index k = c11.rows();
  if (c11.cols() != k || c12.rows() != k || c12.cols() != k || c22.rows() != k || c22.cols() != k)
    throw ValidationError("block_norm_inequality_check: blocks must be k x k");
  ComplexMatrix full(2 * k, 2 * k);
  full << c11, c12, c12.adjoint(), c22;
  if ((full - full.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
    throw ValidationError("block_norm_inequality_check: assembled matrix is not Hermitian");
  detail::require_psd(full, "block_norm_inequality_check");
  const double big = detail::schatten_from_eigenvalues(
      jacobi_eigen<Complex>(0.5 * (full + full.adjoint()), false).eigenvalues, r);
  const double n11 = schatten_norm_general(c11, r);
  const double n12 = schatten_norm_general(c12, r);
  const double n22 = schatten_norm_general(c22, r);
  Eigen::MatrixXd small(2, 2);
  small << n11, n12, n12, n22;
  const double reduced =
      detail::schatten_from_eigenvalues(jacobi_eigen<double>(small, false).eigenvalues, r);
  const std::string inputs = "k=" + std::to_string(k) + " r=" + detail::fmt(r);
  if (r >= 2.0)
    return InequalityReport::make("blocknorm", inputs, big, reduced, kClosedFormTolerance);
  return InequalityReport::make("blocknorm", inputs, reduced, big, kClosedFormTolerance);
}

// --- seeded random sweeps -----------------------------------------------------------

/** random_psd scaled to unit trace. */
inline HermitianOperator random_unit_trace_psd(int n, std::uint64_t seed) {
  const HermitianOperator a = random_psd(n, seed);
  return HermitianOperator::assume_hermitian(a.matrix() / a.matrix().trace().real());
}

/** G^CP generator with Exp(1) Gamma weights; one draw in eight is a bare Gamma_i. */
inline GeneratorTriple random_gcp_generator(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 7);
  const int choice = pick(rng);
  if (choice < 3) return gamma(choice + 1);
  std::exponential_distribution<double> exp1(1.0);
  return recompose_gamma({{exp1(rng), exp1(rng), exp1(rng)}});
}

/** Instance site count: fixed n, or cycling 1, 2, 3 when n == 0. */
inline int sweep_sites(int n, std::size_t index) {
  return n > 0 ? n : static_cast<int>(index % 3) + 1;
}

struct SweepSpec {
  int n = 0;            // 0 cycles 1..3
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

inline std::vector<InequalityReport> sweep_gross(const SweepSpec& spec) {
  static constexpr std::array<double, 4> kPs{1.5, 2.0, 2.5, 4.0};
  std::vector<InequalityReport> out(spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const int n = sweep_sites(spec.n, i);
    const auto a = random_unit_trace_psd(n, rng());
    const auto h = random_gcp_generator(rng);
    const int site = std::uniform_int_distribution<int>(0, n - 1)(rng);
    out[i] = gross_gap(a, h, site, kPs[i % kPs.size()]);
  });
  return out;
}

inline std::vector<InequalityReport> sweep_log_sobolev(const SweepSpec& spec) {
  std::vector<InequalityReport> out(spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const int n = sweep_sites(spec.n, i);
    const auto a = random_unit_trace_psd(n, rng());
    std::vector<GeneratorTriple> gens;
    for (int k = 0; k < n; ++k) gens.push_back(random_unit_rate_generator(rng()));
    out[i] = log_sobolev_gap(a, gens);
  });
  return out;
}

inline std::vector<InequalityReport> sweep_domination(const SweepSpec& spec) {
  std::vector<InequalityReport> out(spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const int n = sweep_sites(spec.n, i);
    const auto a = random_unit_trace_psd(n, rng());
    const auto h = random_unit_rate_generator(rng());
    const int site = std::uniform_int_distribution<int>(0, n - 1)(rng);
    out[i] = unit_rate_domination(a, h, site);
  });
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

inline std::vector<InequalityReport> sweep_monotonicity(const SweepSpec& spec) {
  const std::vector<double> grid = linear_grid(0.0, 2.0, 50);
  std::vector<InequalityReport> out(spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const int n = sweep_sites(spec.n, i);
    const auto a = random_unit_trace_psd(n, rng());
    const auto h = random_gcp_generator(rng);
    const int site = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const double q = (i % 5 == 0) ? 1.0 : uniform(rng, 1.0, 6.0);
    out[i] = monotonicity_scan(a, h, site, q, grid);
  });
  return out;
}

/**
 * Two reports per instance: "gderiv" (analytic g'(t) <= 1e-9) and
 * "gderiv_fd" (|analytic - fd| <= 1e-5 max(1, |analytic|)).
 */
inline std::vector<InequalityReport> sweep_g_derivative(const SweepSpec& spec) {
  std::vector<InequalityReport> out(2 * spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const int n = sweep_sites(spec.n, i);
    const auto a = random_unit_trace_psd(n, rng());
    std::vector<GeneratorTriple> gens;
    std::string gtext;
    for (int k = 0; k < n; ++k) {
      gens.push_back(random_unit_rate_generator(rng()));
      gtext += (k ? ";" : "") + detail::fmt(gens.back());
    }
    const double p = uniform(rng, 1.1, 4.0);
    const double t = uniform(rng, 0.0, 2.0);
    const auto g = g_derivative(a, gens, p, t);
    const std::string inputs = "n=" + std::to_string(n) + " p=" + detail::fmt(p) +
                               " t=" + detail::fmt(t) + " H=" + gtext;
    out[2 * i] = InequalityReport::make("gderiv", inputs, g.analytic, 0.0, kClosedFormTolerance);
    const double err = std::abs(g.analytic - g.finite_difference);
    out[2 * i + 1] = InequalityReport::make("gderiv_fd", inputs, err,
                                            1e-5 * std::max(1.0, std::abs(g.analytic)), 0.0);
  });
  return out;
}

inline std::vector<InequalityReport> sweep_block_norm(const SweepSpec& spec) {
  static constexpr std::array<double, 4> kRs{1.2, 2.0, 3.0, 5.0};
  std::vector<InequalityReport> out(spec.samples);
  parallel_for(spec.samples, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(i % 4);
    const Eigen::Index rank = 1 + std::uniform_int_distribution<Eigen::Index>(0, 2 * k - 1)(rng);
    const ComplexMatrix g = complex_gaussian(2 * k, rank, rng);
    ComplexMatrix full = g * g.adjoint();
    full /= full.trace().real();
    out[i] = block_norm_inequality_check(full.topLeftCorner(k, k), full.topRightCorner(k, k),
                                         full.bottomRightCorner(k, k), kRs[i % kRs.size()]);
  });
  return out;
}

}  // namespace hyperq
