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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/errors.hpp"
#include "hyperq/random.hpp"
#include "hyperq/spectral.hpp"

// Dense operator arithmetic on (C^2)^{(x)n}.
//
// Conventions used throughout hyperq:
//  * Pauli letters 0..3 are sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
//  * A Pauli word s = (s_1, ..., s_n) is stored at index sum_k s_k 4^(k-1),
//    i.e. base 4 little-endian with site 1 the least significant digit.
//  * The matrix of sigma_{s_1} (x) ... (x) sigma_{s_n} is the Kronecker
//    product in site order, so site 1 owns the most significant bit of a
//    row/column index.

namespace hyperq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using TransferMatrix = Eigen::Matrix4d;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kZeroClamp = 1e-12;
inline constexpr int kMaxSites = 8;

inline std::size_t dim_for_sites(int n) { return std::size_t{1} << n; }

/** Number of qubits for a power-of-two dimension; ValidationError otherwise. */
inline int sites_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim))
    throw ValidationError("dimension " + std::to_string(dim) +
                          " is not a power of two >= 2");
  const int n = std::countr_zero(dim);
  if (n > kMaxSites) throw ValidationError("more than 8 sites not supported");
  return n;
}

class PauliWord {
 public:
  explicit PauliWord(std::vector<int> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw ValidationError("PauliWord: no sites");
    for (int l : letters_)
      if (l < 0 || l > 3) throw ValidationError("PauliWord: letter not in 0..3");
  }

  static PauliWord from_index(int n, std::size_t index) {
    std::vector<int> letters(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) letters[k] = static_cast<int>((index >> (2 * k)) & 3u);
    if ((index >> (2 * n)) != 0) throw ValidationError("PauliWord: index out of range");
    return PauliWord(std::move(letters));
  }

  int sites() const { return static_cast<int>(letters_.size()); }
  int letter(int site) const { return letters_.at(static_cast<std::size_t>(site)); }
  const std::vector<int>& letters() const { return letters_; }

  std::size_t index() const {
    std::size_t s = 0;
    for (int k = sites() - 1; k >= 0; --k) s = s * 4 + static_cast<std::size_t>(letters_[k]);
    return s;
  }

 private:
  std::vector<int> letters_;
};

/** Complex matrix validated Hermitian to kHermitianTolerance on construction. */
class HermitianOperator {
 public:
  HermitianOperator() = default;

  static HermitianOperator from_matrix(const ComplexMatrix& m,
                                       double tol = kHermitianTolerance) {
    if (m.rows() != m.cols()) throw ValidationError("operator is not square");
    sites_for_dim(static_cast<std::size_t>(m.rows()));
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol)
      throw ValidationError("operator is not Hermitian (defect " +
                            std::to_string(defect) + ")");
    return assume_hermitian(m);
  }

  /** Symmetrises without the tolerance check; for internal results. */
  static HermitianOperator assume_hermitian(const ComplexMatrix& m) {
    HermitianOperator h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
  }

  static HermitianOperator identity(int n) {
    const auto d = static_cast<Eigen::Index>(dim_for_sites(n));
    return assume_hermitian(ComplexMatrix::Identity(d, d));
  }

  static HermitianOperator diagonal(const Eigen::VectorXd& values) {
    return from_matrix(values.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  Eigen::Index dim() const { return m_.rows(); }
  int sites() const { return sites_for_dim(static_cast<std::size_t>(m_.rows())); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/** Real expansion of a Hermitian operator over the 4^n Pauli words. */
class PauliCoefficients {
 public:
  PauliCoefficients() = default;

  explicit PauliCoefficients(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
    const auto len = static_cast<std::size_t>(coeffs_.size());
    if (len < 4 || !std::has_single_bit(len) || (std::countr_zero(len) % 2) != 0)
      throw ValidationError("coefficient length " + std::to_string(len) +
                            " is not a power of 4");
    n_ = std::countr_zero(len) / 2;
    if (n_ > kMaxSites) throw ValidationError("more than 8 sites not supported");
  }

  int sites() const { return n_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](const PauliWord& w) const {
    return coeffs_(static_cast<Eigen::Index>(w.index()));
  }

 private:
  int n_ = 0;
  Eigen::VectorXd coeffs_;
};

namespace detail {

struct WordPattern {
  std::size_t xmask = 0;
  std::size_t zmask = 0;
  Complex prefactor = 1.0;  // (-i)^(number of sigma_2 letters)
};

inline WordPattern word_pattern(std::size_t word, int n) {
  WordPattern w;
  int y_count = 0;
  for (int k = 0; k < n; ++k) {
    const auto letter = (word >> (2 * k)) & 3u;
    const std::size_t bit = std::size_t{1} << (n - 1 - k);
    if (letter == 1 || letter == 2) w.xmask |= bit;
    if (letter == 2 || letter == 3) w.zmask |= bit;
    if (letter == 2) ++y_count;
  }
  static const Complex kMinusIPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  w.prefactor = kMinusIPowers[y_count % 4];
  return w;
}

inline double row_sign(std::size_t row, std::size_t zmask) {
  return (std::popcount(row & zmask) & 1) ? -1.0 : 1.0;
}

/** coeffs[s] = 2^-n Tr(P_s A) for an arbitrary square matrix A. */
inline Eigen::VectorXcd pauli_expand_raw(const ComplexMatrix& a) {
  const auto d = static_cast<std::size_t>(a.rows());
  const int n = sites_for_dim(d);
  const std::size_t words = std::size_t{1} << (2 * n);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(words));
  for (std::size_t s = 0; s < words; ++s) {
    const auto w = word_pattern(s, n);
    Complex trace = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t c = r ^ w.xmask;
      trace += row_sign(r, w.zmask) * a(static_cast<Eigen::Index>(c),
                                        static_cast<Eigen::Index>(r));
    }
    out(static_cast<Eigen::Index>(s)) = w.prefactor * trace / static_cast<double>(d);
  }
  return out;
}

template <class Scalar>
ComplexMatrix pauli_reconstruct_raw(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& coeffs) {
  const auto words = static_cast<std::size_t>(coeffs.size());
  const int n = std::countr_zero(words) / 2;
  const std::size_t d = dim_for_sites(n);
  ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < words; ++s) {
    const Complex c = coeffs(static_cast<Eigen::Index>(s));
    if (c == Complex(0.0)) continue;
    const auto w = word_pattern(s, n);
    const Complex base = w.prefactor * c;
    for (std::size_t r = 0; r < d; ++r)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ w.xmask)) +=
          row_sign(r, w.zmask) * base;
  }
  return a;
}

/** Mode-wise contraction: out[..i_k..] = sum_j T_k(i, j) in[..j..] for every k. */
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply_product_map_raw(
    std::span<const TransferMatrix> transfers,
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c) {
  const std::size_t n = transfers.size();
  if (c.size() != (Eigen::Index{1} << (2 * n)))
    throw ValidationError("apply_product_map: coefficient length does not match " +
                          std::to_string(n) + " transfer matrices");
  const auto total = static_cast<std::size_t>(c.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next(c.size());
  for (std::size_t k = 0; k < n; ++k) {
    const TransferMatrix& t = transfers[k];
    if (t.isIdentity(0.0)) continue;
    const std::size_t stride = std::size_t{1} << (2 * k);
    for (std::size_t base = 0; base < total; ++base) {
      if (((base / stride) & 3u) != 0) continue;
      Scalar in[4];
      for (std::size_t j = 0; j < 4; ++j) in[j] = c(static_cast<Eigen::Index>(base + j * stride));
      for (std::size_t i = 0; i < 4; ++i) {
        Scalar acc = Scalar(0);
        for (std::size_t j = 0; j < 4; ++j) acc += t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * in[j];
        next(static_cast<Eigen::Index>(base + i * stride)) = acc;
      }
    }
    c.swap(next);
  }
  return c;
}

inline double clamp_eigenvalue(double x) {
  return std::abs(x) <= kZeroClamp ? 0.0 : x;
}

/** |x|^p summed; helper shared by the norm routines and the estimator. */
inline double power_sum(const Eigen::VectorXd& eigenvalues, double p) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double a = std::abs(eigenvalues(i));
    if (a != 0.0) sum += std::pow(a, p);
  }
  return sum;
}

inline double schatten_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double p) {
  if (std::isinf(p)) return eigenvalues.cwiseAbs().maxCoeff();
  return std::pow(power_sum(eigenvalues, p), 1.0 / p);
}

inline void check_norm_order(double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten order p must be >= 1");
}

}  // namespace detail

inline PauliCoefficients pauli_expand(const HermitianOperator& a) {
  const Eigen::VectorXcd c = detail::pauli_expand_raw(a.matrix());
  if (c.imag().cwiseAbs().maxCoeff() > kHermitianTolerance)
    throw ValidationError("pauli_expand: coefficients are not real");
  return PauliCoefficients(c.real());
}

inline PauliCoefficients pauli_expand(const ComplexMatrix& a) {
  return pauli_expand(HermitianOperator::from_matrix(a));
}

inline HermitianOperator pauli_reconstruct(const PauliCoefficients& c) {
  return HermitianOperator::assume_hermitian(detail::pauli_reconstruct_raw(c.coeffs()));
}

/** 2x2 Pauli matrix sigma_letter. */
inline ComplexMatrix pauli_matrix(int letter) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (letter) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw ValidationError("Pauli letter not in 0..3");
  }
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline SpectralDecomposition<Complex> eigen_hermitian(const HermitianOperator& a) {
  return jacobi_eigen<Complex>(a.matrix());
}

/**
 * f applied to the spectrum. Eigenvalues within kZeroClamp of zero are
 * clamped to zero first. A non-finite f(lambda) is a DomainError.
 */
template <class F>
HermitianOperator matrix_function(const HermitianOperator& a, F&& f) {
  const auto sd = eigen_hermitian(a);
  Eigen::VectorXd mapped(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    const double x = detail::clamp_eigenvalue(sd.eigenvalues(i));
    mapped(i) = f(x);
    if (!std::isfinite(mapped(i)))
      throw DomainError("matrix_function: f undefined at eigenvalue " + std::to_string(x));
  }
  return HermitianOperator::assume_hermitian(
      sd.eigenvectors * mapped.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint());
}

/**
 * A^r with 0^r = 0 for r > 0 and A^0 = I. Non-integer r requires A PSD
 * (after clamping); integer r accepts any Hermitian A.
 */
inline HermitianOperator matrix_power(const HermitianOperator& a, double r) {
  const bool integral = std::floor(r) == r;
  return matrix_function(a, [r, integral](double x) {
    if (r == 0.0) return 1.0;
    if (x == 0.0) return r > 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0 && !integral) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(x, r);
  });
}

/** x ln x with 0 ln 0 = 0; x < 0 is outside the domain. */
inline double xlogx(double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return x * std::log(x);
}

inline double schatten_norm(const HermitianOperator& a, double p) {
  detail::check_norm_order(p);
  return detail::schatten_from_eigenvalues(
      jacobi_eigen<Complex>(a.matrix(), false).eigenvalues, p);
}

/** (tau |A|^p)^(1/p) with tau = Tr / dim. */
inline double normalized_norm(const HermitianOperator& a, double p) {
  detail::check_norm_order(p);
  const double unnormalized = schatten_norm(a, p);
  if (std::isinf(p)) return unnormalized;
  return std::pow(static_cast<double>(a.dim()), -1.0 / p) * unnormalized;
}

/** Schatten p-norm of an arbitrary square matrix through the spectrum of M*M. */
inline double schatten_norm_general(const ComplexMatrix& m, double p) {
  detail::check_norm_order(p);
  Eigen::VectorXd sv = jacobi_eigen<Complex>(m.adjoint() * m, false).eigenvalues;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sv(i) = std::sqrt(std::max(0.0, sv(i)));
  return detail::schatten_from_eigenvalues(sv, p);
}

inline Complex hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("hs_inner: dimension mismatch");
  return (a.matrix().adjoint() * b.matrix()).trace();
}

inline PauliCoefficients apply_product_map(std::span<const TransferMatrix> transfers,
                                           const PauliCoefficients& c) {
  if (static_cast<int>(transfers.size()) != c.sites())
    throw ValidationError("apply_product_map: " + std::to_string(transfers.size()) +
                          " transfer matrices for " + std::to_string(c.sites()) + " sites");
  return PauliCoefficients(detail::apply_product_map_raw<double>(transfers, c.coeffs()));
}

/** G G* for G with i.i.d. standard complex Gaussian entries. */
inline HermitianOperator random_psd(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_psd: need at least one site");
  Rng rng(seed);
  const auto d = static_cast<Eigen::Index>(dim_for_sites(n));
  const ComplexMatrix g = complex_gaussian(d, d, rng);
  return HermitianOperator::assume_hermitian(g * g.adjoint());
}

}  // namespace hyperq
