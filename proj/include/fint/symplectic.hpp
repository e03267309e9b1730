#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>

#include "fint/core.hpp"
#include "fint/gaussian.hpp"

namespace fint::symplectic {

/// Pfaffian of an antisymmetric matrix (real or complex) by Parlett-Reid
/// L T L^T reduction with partial pivoting. Sign convention:
/// Pf([[0, 1], [-1, 0]]) = +1.
template <typename Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = M.rows();
  require(M.cols() == n, "pfaffian: matrix must be square");
  if (n == 0) return Scalar(1);
  const double scale = std::max(1.0, static_cast<double>(M.cwiseAbs().maxCoeff()));
  require(static_cast<double>((M + M.transpose()).cwiseAbs().maxCoeff()) <= 1e-12 * scale,
          "pfaffian: matrix is not antisymmetric within 1e-12");
  require(n % 2 == 0, "pfaffian: odd dimension " + std::to_string(n) +
                          " (the Pfaffian vanishes identically)");

  Matrix A = M;
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index rel;
    A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&rel);
    const Eigen::Index kp = k + 1 + rel;
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    if (A(k + 1, k) == Scalar(0)) return Scalar(0);
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = A.row(k).tail(m).transpose() / A(k, k + 1);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = A.col(k + 1).tail(m);
      A.bottomRightCorner(m, m) += tau * v.transpose() - v * tau.transpose();
    }
  }
  return pf;
}

/// Skew-Hermitian form Omega = i A, stored through its Hermitian part A.
/// The form value on a path is Omega(eta) := -i eta^dagger Omega eta = eta^dagger A eta,
/// and the inverse form is M = A^{-1}, so the fiducial Omega = i Id has
/// M(eta') = |eta'|^2 and Pf(s M) = s^{d/2}.
struct SkewFormSpec {
  Eigen::MatrixXcd omega;
  cdouble scale{1.0, 0.0};
  Eigen::VectorXcd mean;
  cdouble boundary_value{0.0, 0.0};
  gaussian::Coordinates coordinates = gaussian::Coordinates::real;

  static SkewFormSpec from_hermitian(const Eigen::MatrixXcd& A, cdouble s = 1.0);

  int dim() const { return static_cast<int>(omega.rows()); }
  Eigen::MatrixXcd hermitian_part() const;
  /// Omega + Omega^dagger = 0 within 1e-12.
  bool is_skew_hermitian() const;
  bool is_positive() const;
  void validate() const;
};

struct SymplecticCharPair {
  IntegralResult theta;           // lebesgue_theta times the measure factor
  cdouble z_closed;               // Pf(sM)^{-1} e^{-pi s M(eta')} e^{(pi/s) B}
  IntegralResult lebesgue_theta;  // plain Lebesgue integral of Theta
  cdouble measure_factor;         // Pf(sM)^{-2}
};

/// Pf(sM) := exp(1/2 tr log(sM)) on the principal branch, in the form's
/// integration coordinates.
cdouble scaled_pfaffian(const SkewFormSpec& spec, cdouble s);

cdouble symplectic_characteristic(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime);

/// The primitive symplectic integrator on a projection carries the factor
/// Pf(sM)^{-2} relative to Lebesgue measure; with it the numerical Theta
/// integral reproduces Z. The Lebesgue part coincides with the Gaussian
/// family's Theta integral for Q = A.
SymplecticCharPair symplectic_char_pair(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime,
                                        int order = 0);

/// Same report layout as the Gaussian family. The dual column holds
/// Det(s A)^{1/2} e^{-(pi/s) M(eta')}; expected_power is -n/2 for both ends.
gaussian::DeltaLimitReport symplectic_delta_limits(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime,
                                                   std::span<const cdouble> s_sequence);

/// Real antisymmetric 2d x 2d matrix of the symplectic form Im(u^dagger A v)
/// in interleaved coordinates (x_1, y_1, x_2, y_2, ...).
Eigen::MatrixXd interleaved_real_form(const Eigen::MatrixXd& A);

}  // namespace fint::symplectic
