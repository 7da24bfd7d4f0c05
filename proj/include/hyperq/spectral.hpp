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
#include <complex>
#include <numeric>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hyperq/errors.hpp"

namespace hyperq {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/** Eigenvalues ascending; eigenvectors as the columns of a unitary matrix. */
template <class Scalar>
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  DenseMatrix<Scalar> eigenvectors;
};

inline constexpr double kJacobiTolerance = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

inline double conj_if(double x) { return x; }
inline std::complex<double> conj_if(std::complex<double> x) {
  return std::conj(x);
}

inline double mul(double a, double b) { return a * b; }
// Plain product; skips the inf/nan recovery of the library operator.
inline std::complex<double> mul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

template <class Scalar>
double off_diagonal_mass(const DenseMatrix<Scalar>& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace detail

/**
 * Cyclic Jacobi diagonalisation of a real symmetric or complex Hermitian
 * matrix. Each rotation first removes the phase of a(p,q) and then applies
 * the classical real rotation, so the same kernel serves both scalar types.
 *
 * Stops when the off-diagonal Frobenius mass drops below
 * kJacobiTolerance * max(1, |A|_F); throws NumericalError after
 * kJacobiMaxSweeps sweeps. Only the lower/upper symmetric part is trusted;
 * callers validate Hermiticity.
 */
template <class Scalar>
SpectralDecomposition<Scalar> jacobi_eigen(DenseMatrix<Scalar> a,
                                           bool want_vectors = true) {
  const Eigen::Index d = a.rows();
  if (a.cols() != d) throw ValidationError("jacobi_eigen: matrix not square");
  DenseMatrix<Scalar> v;
  if (want_vectors) v = DenseMatrix<Scalar>::Identity(d, d);

  const double threshold = kJacobiTolerance * std::max(1.0, a.norm());
  int sweep = 0;
  for (;; ++sweep) {
    if (detail::off_diagonal_mass(a) <= threshold) break;
    if (sweep >= kJacobiMaxSweeps)
      throw NumericalError("jacobi_eigen: no convergence within sweep cap");
    for (Eigen::Index p = 0; p + 1 < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const Scalar apq = a(p, q);
        const double mag = std::sqrt(std::norm(apq));
        if (mag == 0.0) continue;
        const double alpha = std::real(a(p, p));
        const double gamma = std::real(a(q, q));
        const double theta = (gamma - alpha) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar e = detail::conj_if(apq / mag);
        // Columns p, q of A and V go to (c x - s e y, s x + c e y); the rows
        // are the conjugates by Hermiticity.
        for (Eigen::Index k = 0; k < d; ++k) {
          const Scalar x = a(k, p);
          const Scalar ey = detail::mul(e, a(k, q));
          a(k, p) = c * x - s * ey;
          a(k, q) = s * x + c * ey;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          a(p, k) = detail::conj_if(a(k, p));
          a(q, k) = detail::conj_if(a(k, q));
        }
        a(p, p) = alpha - t * mag;
        a(q, q) = gamma + t * mag;
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        if (want_vectors) {
          for (Eigen::Index k = 0; k < d; ++k) {
            const Scalar x = v(k, p);
            const Scalar ey = detail::mul(e, v(k, q));
            v(k, p) = c * x - s * ey;
            v(k, q) = s * x + c * ey;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return std::real(a(i, i)) < std::real(a(j, j));
                   });
  SpectralDecomposition<Scalar> out;
  out.eigenvalues.resize(d);
  if (want_vectors) out.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = std::real(a(src, src));
    if (want_vectors) out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace hyperq
