#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fint/core.hpp"

namespace fint::gamma_poisson {

/// real_positive: tau takes values in R_+ and each Re(beta_i) > 0.
/// imaginary: <beta', tau> is imaginary (delta-functional regime).
enum class Mode { real_positive, imaginary };

struct GammaSpec {
  cdouble alpha{1.0, 0.0};
  Eigen::VectorXcd beta;          // one weight per projected slice
  std::optional<cdouble> cutoff;  // empty means infinity
  Mode mode = Mode::real_positive;

  int dim() const { return static_cast<int>(beta.size()); }
  void validate() const;
};

/// prod_i (1/Gamma(alpha)) int_0^inf tau^alpha e^{-beta_i tau} dtau/tau, by
/// generalized Gauss-Laguerre in x = Re(beta_i) tau. The error estimate
/// compares order against order/2.
IntegralResult gamma_normalization(const GammaSpec& spec, int order = 64);

/// gamma(alpha, c) = c^alpha e^{-c} sum_n c^n / (alpha (alpha+1) ... (alpha+n)),
/// principal branch for c^alpha. Summation stops once a term falls below
/// 1e-16 of the running sum.
IntegralResult lower_incomplete(cdouble alpha, cdouble c);

/// Gamma(alpha, c) = Gamma(alpha) - gamma(alpha, c).
IntegralResult upper_incomplete(cdouble alpha, cdouble c);

struct PrincipalValue {
  cdouble value;                 // 1 / beta
  std::vector<double> cutoffs;
  std::vector<cdouble> partial;  // (1 - e^{-c}) / beta at each cutoff
  bool monotone = true;          // |partial - value| strictly decreasing
};

PrincipalValue principal_value(cdouble beta, std::vector<double> cutoffs = {10.0, 20.0, 30.0, 40.0});

/// Test function on the dual line. Values beyond support_radius are treated
/// as zero; smoothness is the number of available derivatives.
struct TestFunction {
  std::function<cdouble(double)> f;
  double support_radius = 8.0;
  int smoothness = std::numeric_limits<int>::max();
  std::string label;
};

/// <delta_L, f> = int f(w) K_L(w) dw with the damped truncated kernel
///   K_L(w) = int_{-U}^{U} e^{-2 pi i w u} e^{-pi u^2 / L} du,  U = min(L, 8 sqrt(L)).
IntegralResult delta_functional(const TestFunction& f, double cutoff);

struct DerivativePairing {
  IntegralResult pairing;     // (i^{m-1}/Gamma(m)) int f K_{L,m}
  cdouble constant;           // calibrated on f = w^{m-1} e^{-pi w^2}
  cdouble analytic_constant;  // (-i / 2pi)^{m-1} / (m-1)!
  cdouble reduced;            // pairing / constant, approximates (-1)^{m-1} f^{(m-1)}(0)
};

/// Shadow of delta^{(m-1)} through the alpha = m gamma integrand: the kernel
/// carries the extra factor (i u)^{m-1}.
DerivativePairing delta_derivative_pairing(int m, const TestFunction& f, double cutoff = 1e3);

/// P(n, c) = gamma(n, c) / Gamma(n), with P(0, c) = 1.
IntegralResult poisson_tail(int n, cdouble c);

/// e^{-c} times the volume of {0 <= tau_1 < ... < tau_k <= c}, by uniform
/// Monte Carlo on the cube [0, c]^k.
IntegralResult waiting_time_volume(int k, double c, std::int64_t samples = 100000, std::uint64_t seed = 0);

struct PoissonAverage {
  IntegralResult value;          // sum_n (i I)^n / n!
  cdouble exponent_integral;     // I = int beta' dt over the grid
  cdouble reference;             // exp(i I)
  int terms = 0;
  cdouble fd_derivative;         // central difference in t_b
  cdouble expected_derivative;   // i beta'(t_b) value
};

PoissonAverage poisson_average(const std::function<cdouble(double)>& beta, const TimeGrid& grid,
                               double fd_step = 1e-4);

struct OperatorHamiltonian {
  int dim = 1;
  std::function<Eigen::MatrixXcd(double)> H;

  static OperatorHamiltonian constant(const Eigen::MatrixXcd& H);
  /// sigma_z + t sigma_x
  static OperatorHamiltonian sz_plus_t_sx();
};

struct DysonResult {
  Eigen::MatrixXcd value;
  double quadrature_error = 0.0;  // max entry change between 64 and 32 nodes per slice
  double truncation_bound = 0.0;  // (max ||H|| T)^{N+1} / (N+1)!
  double unitarity_drift = 0.0;   // ||U^dagger U - Id||_2
  int order = 0;
};

/// sum_{n<=N} i^n int_{t_a <= t_1 < ... < t_n <= t_b} H(t_n)...H(t_1), built
/// from U_n(t) = int_{t_a}^t i H U_{n-1} with Chebyshev-Lobatto cumulative
/// integration on every grid slice. A truncation bound above tolerance is a
/// NumericalError.
DysonResult dyson_evolution(const OperatorHamiltonian& H, int order, const TimeGrid& grid,
                            double tolerance = std::numeric_limits<double>::infinity());

}  // namespace fint::gamma_poisson
