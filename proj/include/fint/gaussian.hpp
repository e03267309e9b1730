#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <span>
#include <vector>

#include "fint/core.hpp"

namespace fint::gaussian {

enum class Boundary { dirichlet, neumann_at_tb };

/// Continuum operator behind a discretized quadratic form.
struct Continuum {
  enum class Kind { free, harmonic, custom };
  Kind kind = Kind::free;
  double omega = 0.0;  // harmonic only

  static Continuum free() { return {Kind::free, 0.0}; }
  static Continuum harmonic(double omega) { return {Kind::harmonic, omega}; }
};

/// Integration coordinates of a projected slice. Complex coordinates are
/// realified: C^d is integrated as R^{2d} with the realified form.
enum class Coordinates { real, complex };

/// Discretized operator D (Hermitian, positive-definite) with its boundary
/// data. The quadratic form is Q(x) = x^T D x on the projected coordinates.
struct QuadraticFormSpec {
  Eigen::SparseMatrix<cdouble> D;
  Boundary boundary = Boundary::dirichlet;
  std::optional<TimeGrid> grid;
  Continuum continuum = {Continuum::Kind::custom, 0.0};

  int dim() const { return static_cast<int>(D.rows()); }
  bool is_real(double tol = 0.0) const;

  /// Checks Hermiticity (1e-12) and positive-definiteness.
  void validate() const;

  static QuadraticFormSpec custom(const Eigen::MatrixXcd& D);
};

/// Second-difference operator on the grid. Unknowns are the path values at
/// the grid points; the basepoint t_a is pinned at zero. With the dirichlet
/// tag the endpoint t_b is pinned as well, so the last grid point is dropped
/// and D is (n-1)x(n-1). With neumann_at_tb the endpoint is free and D is
/// n x n.
///
///   free:         sum_k (x_k - x_{k-1})^2 / h_k
///   harmonic(w):  free + w^2 sum_k (h_k + h_{k+1}) / 2 x_k^2
QuadraticFormSpec build_operator(const Continuum& kind, const TimeGrid& grid, Boundary boundary);

/// W = D^{-1}, rejected when the condition number exceeds 1e14.
Eigen::MatrixXcd covariance(const QuadraticFormSpec& spec);

/// log det D via sparse LDL^T (D must be Hermitian positive-definite).
double log_det(const QuadraticFormSpec& spec);

/// det(a) / det(b), evaluated through log-determinants.
double det_ratio(const QuadraticFormSpec& a, const QuadraticFormSpec& b);

/// Realification of a Hermitian matrix: Q = A + iB  ->  [[A, -B], [B, A]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& hermitian);
/// z = x + iy  ->  (x, y).
Eigen::VectorXcd realify_vector(const Eigen::VectorXcd& z);

/// det(s M)^{1/2} as exp(1/2 tr log(s M)) with principal logarithms, for
/// Hermitian positive-definite M and Re(s) >= 0.
cdouble sqrt_det_scaled(cdouble s, const Eigen::MatrixXcd& M);

/// One member of the Gaussian integrator family.
struct GaussianSpec {
  Eigen::VectorXcd mean;
  QuadraticFormSpec form;
  cdouble scale{1.0, 0.0};
  cdouble boundary_value{0.0, 0.0};
  Coordinates coordinates = Coordinates::real;

  /// Dimension of the real integration space.
  int real_dim() const { return coordinates == Coordinates::real ? form.dim() : 2 * form.dim(); }
  void validate() const;
};

struct CharPair {
  IntegralResult theta;  // numerical integral of Theta(., z')
  cdouble z_closed;      // Det(sW)^{1/2} e^{-pi s W(z')} e^{(pi/s) B}
};

/// Closed-form Z(z').
cdouble characteristic(const GaussianSpec& spec, const Eigen::VectorXcd& zprime);

/// Numerical integral of Theta(x, z') over the real projected coordinates
/// next to the closed form. order <= 0 picks a tensor order from a node budget.
CharPair char_pair(const GaussianSpec& spec, const Eigen::VectorXcd& zprime, int order = 0);

/// Det(sW)^{1/2} e^{(pi/s) B(mean)}.
cdouble normalization(const GaussianSpec& spec);

/// Continuum determinant ratio det(-d^2 + w^2)/det(-d^2) on [0, T] with
/// Dirichlet ends, from the initial-value problem u'' = w^2 u, u(0) = 0,
/// u'(0) = 1, normalized by the free solution u_0(T) = T.
double det_gelfand_yaglom(double omega, double T);

struct PropagatorKind {
  enum class Kind { free, harmonic };
  Kind kind = Kind::free;
  double mass = 1.0;
  double omega = 0.0;

  static PropagatorKind free(double mass = 1.0) { return {Kind::free, mass, 0.0}; }
  static PropagatorKind harmonic(double mass, double omega) { return {Kind::harmonic, mass, omega}; }
};

/// Gaussian kernel K(x, y) = norm * exp(-(pi/s) (a x^2 - 2 b x y + c y^2)).
struct SliceKernel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  cdouble norm{1.0, 0.0};

  cdouble operator()(cdouble s, double x, double y) const;
};

/// Single-slice kernel of width h, normalized so that free kernels form an
/// exact semigroup.
SliceKernel slice_kernel(const PropagatorKind& kind, cdouble s, double h);

/// Closed-form convolution over the middle variable: (first ∘ second)(x, y).
SliceKernel compose(const SliceKernel& first, const SliceKernel& second, cdouble s);

/// Time-sliced propagator K(x_a, x_b) composed slice by slice over the grid.
/// Pure-imaginary s (Feynman regime) is only accepted with continuation set;
/// the value is then the boundary value of the analytic function on Re(s) > 0.
IntegralResult propagator(const PropagatorKind& kind, cdouble s, const TimeGrid& grid, double x_a,
                          double x_b, bool continuation = false);

/// Continuum kernel: free heat kernel or the Mehler kernel.
cdouble propagator_closed_form(const PropagatorKind& kind, cdouble s, double T, double x_a, double x_b);

struct DeltaLimitReport {
  enum class Direction { to_zero, to_infinity };
  Direction direction = Direction::to_zero;
  std::vector<cdouble> s;
  std::vector<cdouble> z;             // Z(z'; s)
  std::vector<double> log_abs_z;      // log |Z(z'; s)|, finite even when Z underflows
  std::vector<cdouble> normalized;    // Z(z')/Z(0) = e^{-pi s W(z')}
  std::vector<double> log_abs_dual;   // log |Det(sQ)^{-1/2} e^{-(pi/s) W(z')}|
  // Least-squares fit of log|Z| (to_infinity) or log|dual| (to_zero) against
  // [r, log r, 1] with r = |s| (to_infinity) or r = 1/|s| (to_zero).
  double fitted_rate = 0.0;
  double expected_rate = 0.0;
  double fitted_power = 0.0;
  double expected_power = 0.0;
};

/// Tracks Z along a sequence of scales heading to 0 or infinity inside the
/// right half-plane.
DeltaLimitReport delta_limits(const GaussianSpec& spec, const Eigen::VectorXcd& zprime,
                              std::span<const cdouble> s_sequence);

namespace detail {

/// Shared engine for Gaussian-type characteristic integrals over R^n:
///   int exp(2 pi i z'.(x - m) - (pi/s)[(x - m)^T Q (x - m) - B]) dx
/// with Q real symmetric positive-definite.
IntegralResult gaussian_theta_integral(const Eigen::MatrixXd& Q, const Eigen::VectorXcd& mean,
                                       const Eigen::VectorXcd& zprime, cdouble s, cdouble B,
                                       int order);

int default_order(int real_dim);

/// Least-squares fit y ~ c0 r + c1 log r + c2; returns (c0, c1).
std::pair<double, double> fit_rate_power(const std::vector<double>& r, const std::vector<double>& y);

void check_scale_sequence(std::span<const cdouble> s_sequence, DeltaLimitReport::Direction& dir);

}  // namespace detail

}  // namespace fint::gaussian
