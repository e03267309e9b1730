#pragma once

// Reference implementations used only to check the library: each one takes
// a different route from the code it checks.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>

#include "fint/core.hpp"
#include "fint/ode.hpp"

namespace fint::oracles {

/// Pfaffian by expansion along the first row (exponential cost; n <= 12).
template <typename Scalar>
Scalar pfaffian_expansion(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A) {
  const Eigen::Index n = A.rows();
  if (n == 0) return Scalar(1);
  if (n % 2 == 1) return Scalar(0);
  Scalar acc(0);
  for (Eigen::Index j = 1; j < n; ++j) {
    if (A(0, j) == Scalar(0)) continue;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> minor(n - 2, n - 2);
    for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
      if (r == 0 || r == j) continue;
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c == 0 || c == j) continue;
        minor(rr, cc++) = A(r, c);
      }
      ++rr;
    }
    const Scalar sign = (j % 2 == 1) ? Scalar(1) : Scalar(-1);
    acc += sign * A(0, j) * pfaffian_expansion<Scalar>(minor);
  }
  return acc;
}

/// gamma(a, z) from the continued fraction
///   z^a e^{-z} / (a - a z/(a+1 + z/(a+2 - (a+1) z/(a+3 + 2z/(a+4 - ...)))))
/// evaluated by the modified Lentz method.
inline cdouble lower_gamma_cf(cdouble a, cdouble z, int max_terms = 5000) {
  if (z == cdouble(0.0)) return 0.0;
  constexpr double tiny = 1e-300;
  cdouble f = a;
  cdouble C = f, D = 0.0;
  for (int k = 1; k <= max_terms; ++k) {
    const int m = (k + 1) / 2;
    const cdouble num = (k % 2 == 1) ? -(a + double(m - 1)) * z : double(m) * z;
    const cdouble den = a + double(k);
    D = den + num * D;
    if (std::abs(D) < tiny) D = tiny;
    C = den + num / C;
    if (std::abs(C) < tiny) C = tiny;
    D = 1.0 / D;
    const cdouble delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(z) - z) / f;
}

/// sum_{k >= n} e^{-c} c^k / k! by direct summation (real c > 0).
inline double poisson_tail_direct(int n, double c) {
  double sum = 0.0;
  for (int k = n; k < n + 2000; ++k) {
    const double term = std::exp(-c + k * std::log(c) - std::lgamma(k + 1.0));
    sum += term;
    if (k > c && term < 1e-20 * sum) break;
  }
  return sum;
}

/// exp(i T H) for Hermitian H by eigendecomposition.
inline Eigen::MatrixXcd exp_i_hermitian(const Eigen::MatrixXcd& H, double T) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXcd phases =
      (cdouble(0.0, T) * es.eigenvalues().cast<cdouble>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// U' = i H(t) U, U(t0) = Id, integrated with adaptive Dormand-Prince.
template <typename HFn>
Eigen::MatrixXcd evolution_ode(const HFn& H, int dim, double t0, double t1) {
  using M = Eigen::MatrixXcd;
  const M id = M::Identity(dim, dim);
  return ode::dopri5([&](double t, const M& u) { return M(cdouble(0.0, 1.0) * H(t) * u); }, t0, t1, id,
                     ode::Tolerance{1e-13, 1e-15, 20'000'000});
}

/// det(-d^2 + w^2) / det(-d^2) on [0, T] with Dirichlet ends.
inline double sinh_ratio(double omega, double T) {
  const double x = omega * T;
  return x == 0.0 ? 1.0 : std::sinh(x) / x;
}

}  // namespace fint::oracles
