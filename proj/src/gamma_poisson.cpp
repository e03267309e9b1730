#include "fint/gamma_poisson.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <numbers>

#include "fint/quad.hpp"
#include "fint/special.hpp"

namespace fint::gamma_poisson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
const cdouble kI(0.0, 1.0);

// (1/Gamma(alpha)) int_0^inf tau^{alpha-1} e^{-beta tau} dtau with an
// order-n generalized Laguerre rule.
cdouble gamma_slice(cdouble alpha, cdouble beta, const quad::GaussRule& rule, double& abs_sum) {
  const double br = beta.real();
  const double theta = beta.imag() / br;
  const double im_alpha = alpha.imag();
  std::vector<cdouble> terms(static_cast<std::size_t>(rule.nodes.size()));
  abs_sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes(i);
    const cdouble v = rule.weights(i) * std::exp(kI * (im_alpha * std::log(x) - theta * x));
    terms[static_cast<std::size_t>(i)] = v;
    abs_sum += std::abs(v);
  }
  const cdouble scale = std::exp(-alpha * std::log(cdouble(br))) / gamma_fn(alpha);
  abs_sum *= std::abs(scale);
  return scale * quad::pairwise_sum(std::span<const cdouble>(terms));
}

// Damped kernel K(w) = int_{-U}^{U} (i u)^k e^{-2 pi i w u} e^{-pi u^2/L} du
// on a fixed inner rule.
cdouble damped_kernel(double w, int k, double L, const quad::GaussRule& inner) {
  std::vector<cdouble> terms(static_cast<std::size_t>(inner.nodes.size()));
  for (Eigen::Index j = 0; j < inner.nodes.size(); ++j) {
    const double u = inner.nodes(j);
    cdouble v = inner.weights(j) * std::exp(cdouble(-kPi * u * u / L, -2.0 * kPi * w * u));
    if (k > 0) v *= std::pow(kI * u, k);
    terms[static_cast<std::size_t>(j)] = v;
  }
  return quad::pairwise_sum(std::span<const cdouble>(terms));
}

// int f(w) K_k(w) dw over |w| <= W with outer panels, returning value and
// the change against half the panels.
IntegralResult kernel_pairing(const TestFunction& tf, int k, double L) {
  require(static_cast<bool>(tf.f), "delta: test function is empty");
  require(std::isfinite(L) && L > 0.0, "delta: cutoff must be finite and positive");
  require(tf.support_radius > 0.0 && std::isfinite(tf.support_radius),
          "delta: test function needs a finite support radius");
  const double R = tf.support_radius;
  const double W = std::min(R, 12.0 / std::sqrt(L));
  const double U = std::min(L, 8.0 * std::sqrt(L));
  constexpr int kOrder = 16;
  const int inner_panels = 32 + static_cast<int>(std::ceil(2.0 * U * W));
  const int outer_panels = 2 * (16 + static_cast<int>(std::ceil(2.0 * W * std::sqrt(L))));
  const quad::GaussRule inner = quad::composite_legendre(-U, U, inner_panels, kOrder);

  double fmax = 0.0;
  auto integrate = [&](int panels) {
    const quad::GaussRule outer = quad::composite_legendre(-W, W, panels, kOrder);
    std::vector<cdouble> terms(static_cast<std::size_t>(outer.nodes.size()));
    for (Eigen::Index i = 0; i < outer.nodes.size(); ++i) {
      const double w = outer.nodes(i);
      const cdouble fw = tf.f(w);
      if (!std::isfinite(fw.real()) || !std::isfinite(fw.imag()))
        throw ValidationError("delta: test function is not finite at w = " + std::to_string(w));
      fmax = std::max(fmax, std::abs(fw));
      terms[static_cast<std::size_t>(i)] = outer.weights(i) * fw * damped_kernel(w, k, L, inner);
    }
    return quad::pairwise_sum(std::span<const cdouble>(terms));
  };

  IntegralResult r;
  r.value = integrate(outer_panels);
  const cdouble coarse = integrate(outer_panels / 2);
  const double edge = std::max(std::abs(tf.f(R)), std::abs(tf.f(-R)));
  require(edge <= 1e-8 * std::max(1.0, fmax),
          "delta: test function does not decay at its support radius (nonintegrable)");
  r.abs_error_estimate = std::abs(r.value - coarse) + 64.0 * kEps * std::abs(r.value);
  r.method = Method::quadrature;
  r.samples_or_order = static_cast<std::int64_t>(outer_panels) * kOrder;
  return r;
}

// Cumulative integration matrix on Chebyshev-Lobatto nodes x_j = -cos(j pi/M):
// (S v)_j = int_{-1}^{x_j} p(x) dx for the interpolant p of v.
struct ChebyshevRule {
  Eigen::VectorXd x;
  Eigen::MatrixXd S;
};

ChebyshevRule chebyshev_rule(int M) {
  ChebyshevRule rule;
  rule.x.resize(M + 1);
  for (int j = 0; j <= M; ++j) rule.x(j) = -std::cos(j * kPi / M);
  Eigen::MatrixXd V(M + 1, M + 1), Sint(M + 1, M + 1);
  auto T = [](int n, double x) { return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0))); };
  auto Tm1 = [](int n) { return n % 2 == 0 ? 1.0 : -1.0; };
  for (int j = 0; j <= M; ++j) {
    const double x = rule.x(j);
    for (int k = 0; k <= M; ++k) {
      V(j, k) = T(k, x);
      double val;
      if (k == 0) {
        val = x + 1.0;
      } else if (k == 1) {
        val = 0.5 * (x * x - 1.0);
      } else {
        auto prim = [k](double tp, double tm) { return 0.5 * (tp / (k + 1) - tm / (k - 1)); };
        val = prim(T(k + 1, x), T(k - 1, x)) - prim(Tm1(k + 1), Tm1(k - 1));
      }
      Sint(j, k) = val;
    }
  }
  rule.S = Sint * V.partialPivLu().inverse();
  return rule;
}

double hermitian_norm(const Eigen::MatrixXcd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct DysonCore {
  Eigen::MatrixXcd value;
  double hmax = 0.0;
};

DysonCore dyson_core(const OperatorHamiltonian& H, int N, const TimeGrid& grid, int M) {
  const ChebyshevRule rule = chebyshev_rule(M);
  const int d = H.dim;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  // U_n at the start of the current slice
  std::vector<Eigen::MatrixXcd> start(static_cast<std::size_t>(N + 1), Eigen::MatrixXcd::Zero(d, d));
  start[0] = id;
  DysonCore core;
  for (int s = 0; s < grid.size(); ++s) {
    const double a = s == 0 ? grid.t_a() : grid[s - 1];
    const double b = grid[s];
    const double half = 0.5 * (b - a);
    std::vector<Eigen::MatrixXcd> iH(static_cast<std::size_t>(M + 1));
    for (int j = 0; j <= M; ++j) {
      const double t = a + half * (rule.x(j) + 1.0);
      const Eigen::MatrixXcd h = H.H(t);
      require(h.rows() == d && h.cols() == d, "dyson: H(t) has wrong shape");
      require((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()),
              "dyson: H(t) is not Hermitian at t = " + std::to_string(t));
      core.hmax = std::max(core.hmax, hermitian_norm(h));
      iH[static_cast<std::size_t>(j)] = kI * h;
    }
    std::vector<Eigen::MatrixXcd> prev(static_cast<std::size_t>(M + 1), id);  // U_0 on the nodes
    for (int n = 1; n <= N; ++n) {
      std::vector<Eigen::MatrixXcd> integrand(static_cast<std::size_t>(M + 1));
      for (int j = 0; j <= M; ++j)
        integrand[static_cast<std::size_t>(j)] = iH[static_cast<std::size_t>(j)] * prev[static_cast<std::size_t>(j)];
      std::vector<Eigen::MatrixXcd> cur(static_cast<std::size_t>(M + 1));
      for (int j = 0; j <= M; ++j) {
        Eigen::MatrixXcd acc = start[static_cast<std::size_t>(n)];
        for (int k = 0; k <= M; ++k) acc += (half * rule.S(j, k)) * integrand[static_cast<std::size_t>(k)];
        cur[static_cast<std::size_t>(j)] = std::move(acc);
      }
      prev = std::move(cur);
      start[static_cast<std::size_t>(n)] = prev.back();
    }
  }
  core.value = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& u : start) core.value += u;
  return core;
}

cdouble exponent_series(cdouble I, int& terms, double& abs_sum) {
  const cdouble z = kI * I;
  cdouble term = 1.0, sum = 1.0;
  abs_sum = 1.0;
  for (int n = 1; n <= 200; ++n) {
    term *= z / double(n);
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) <= kEps * std::abs(sum) && n > std::abs(z)) {
      terms = n + 1;
      return sum;
    }
  }
  throw NumericalError("poisson_average: exponential series did not converge in 200 terms (|I| = " +
                       std::to_string(std::abs(I)) + ")");
}

cdouble integrate_interval(const std::function<cdouble(double)>& f, double a, double b, int panels) {
  const quad::GaussRule r = quad::composite_legendre(a, b, panels, 16);
  std::vector<cdouble> terms(static_cast<std::size_t>(r.nodes.size()));
  for (Eigen::Index i = 0; i < r.nodes.size(); ++i) {
    const cdouble v = f(r.nodes(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("poisson_average: beta' is not finite at t = " + std::to_string(r.nodes(i)));
    terms[static_cast<std::size_t>(i)] = r.weights(i) * v;
  }
  return quad::pairwise_sum(std::span<const cdouble>(terms));
}

}  // namespace

void GammaSpec::validate() const {
  require(beta.size() >= 1, "GammaSpec: beta must be nonempty");
  if (mode == Mode::real_positive)
    for (Eigen::Index i = 0; i < beta.size(); ++i)
      require(beta(i).real() > 0.0, "GammaSpec: real_positive mode needs Re(beta_i) > 0");
  if (cutoff) require(cutoff->real() > 0.0, "GammaSpec: cutoff must lie in the right half-plane");
}

IntegralResult gamma_normalization(const GammaSpec& spec, int order) {
  spec.validate();
  require(spec.mode == Mode::real_positive, "gamma_normalization: needs real_positive mode");
  require(!spec.cutoff, "gamma_normalization: cutoff must be infinite (use lower_incomplete for finite c)");
  require(spec.alpha.real() > 0.0,
          "gamma_normalization: Re(alpha) <= 0 diverges at tau = 0 with infinite cutoff");
  require(order >= 4, "gamma_normalization: order must be >= 4");
  const double a = spec.alpha.real() - 1.0;
  const quad::GaussRule full = quad::gauss_laguerre(order, a);
  const quad::GaussRule half = quad::gauss_laguerre(order / 2, a);
  cdouble prod_full = 1.0, prod_half = 1.0;
  double rounding = 0.0;
  for (Eigen::Index i = 0; i < spec.beta.size(); ++i) {
    double abs_full = 0.0, abs_half = 0.0;
    const cdouble vf = gamma_slice(spec.alpha, spec.beta(i), full, abs_full);
    const cdouble vh = gamma_slice(spec.alpha, spec.beta(i), half, abs_half);
    prod_full *= vf;
    prod_half *= vh;
    rounding += 64.0 * kEps * abs_full / std::max(std::abs(vf), 1e-300);
  }
  IntegralResult r;
  r.value = prod_full;
  r.abs_error_estimate = std::abs(prod_full - prod_half) + rounding * std::abs(prod_full);
  r.method = Method::quadrature;
  r.samples_or_order = order;
  return r;
}

IntegralResult lower_incomplete(cdouble alpha, cdouble c) {
  require(alpha.real() > 0.0, "lower_incomplete: needs Re(alpha) > 0");
  require(std::isfinite(c.real()) && std::isfinite(c.imag()), "lower_incomplete: c must be finite");
  IntegralResult r;
  r.method = Method::series;
  if (c == cdouble(0.0)) return r;
  cdouble term = 1.0 / alpha;
  cdouble sum = term;
  double largest = std::abs(term);
  constexpr int kMaxTerms = 100000;
  int n = 1;
  for (; n < kMaxTerms; ++n) {
    term *= c / (alpha + double(n));
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (std::abs(term) <= 1e-16 * std::abs(sum) && std::abs(c) < std::abs(alpha + double(n))) break;
  }
  if (n == kMaxTerms)
    throw NumericalError("lower_incomplete: series did not converge in 100000 terms (|c| = " +
                         std::to_string(std::abs(c)) + ")");
  const double cancellation = largest / std::abs(sum);
  if (cancellation > 1e8)
    throw NumericalError("lower_incomplete: series cancellation loses " +
                         std::to_string(static_cast<int>(std::log10(cancellation))) +
                         " digits at c = (" + std::to_string(c.real()) + ", " + std::to_string(c.imag()) + ")");
  const cdouble prefactor = std::exp(alpha * std::log(c) - c);
  r.value = prefactor * sum;
  r.abs_error_estimate = std::abs(prefactor) * largest * (n + 1) * kEps;
  r.samples_or_order = n + 1;
  return r;
}

IntegralResult upper_incomplete(cdouble alpha, cdouble c) {
  IntegralResult r = lower_incomplete(alpha, c);
  const cdouble g = gamma_fn(alpha);
  r.value = g - r.value;
  r.abs_error_estimate += 16.0 * kEps * std::abs(g);
  return r;
}

PrincipalValue principal_value(cdouble beta, std::vector<double> cutoffs) {
  require(beta.real() > 0.0, "principal_value: needs Re(beta) > 0");
  require(!cutoffs.empty(), "principal_value: need at least one cutoff");
  PrincipalValue pv;
  pv.value = 1.0 / beta;
  pv.cutoffs = std::move(cutoffs);
  double last = std::numeric_limits<double>::infinity();
  double last_c = -std::numeric_limits<double>::infinity();
  for (const double c : pv.cutoffs) {
    require(c > last_c, "principal_value: cutoffs must increase");
    last_c = c;
    const cdouble v = -std::expm1(-c) / beta;
    pv.partial.push_back(v);
    const double gap = std::exp(-c) / std::abs(beta);
    if (!(gap < last)) pv.monotone = false;
    last = gap;
  }
  return pv;
}

IntegralResult delta_functional(const TestFunction& f, double cutoff) {
  return kernel_pairing(f, 0, cutoff);
}

DerivativePairing delta_derivative_pairing(int m, const TestFunction& f, double cutoff) {
  require(m >= 1, "delta_derivative_pairing: m must be >= 1");
  require(f.smoothness >= m - 1, "delta_derivative_pairing: test function lacks " + std::to_string(m - 1) +
                                     " derivatives");
  const int k = m - 1;
  const cdouble prefactor = std::pow(kI, k) / gamma_fn(double(m));
  DerivativePairing out;
  out.pairing = kernel_pairing(f, k, cutoff);
  out.pairing.value *= prefactor;
  out.pairing.abs_error_estimate *= std::abs(prefactor);

  const TestFunction cal{[k](double w) { return cdouble(std::pow(w, k) * std::exp(-kPi * w * w)); }, 8.0,
                         std::numeric_limits<int>::max(), "calibration"};
  const cdouble cal_pairing = prefactor * kernel_pairing(cal, k, cutoff).value;
  // (-1)^k d^k/dw^k [w^k e^{-pi w^2}] at 0 is (-1)^k k!
  double kfact = 1.0;
  for (int j = 2; j <= k; ++j) kfact *= j;
  out.constant = cal_pairing / ((k % 2 == 0 ? 1.0 : -1.0) * kfact);
  out.analytic_constant = std::pow(cdouble(0.0, -1.0 / (2.0 * kPi)), k) / kfact;
  out.reduced = out.pairing.value / out.constant;
  return out;
}

IntegralResult poisson_tail(int n, cdouble c) {
  require(n >= 0, "poisson_tail: n must be >= 0");
  IntegralResult r;
  r.method = Method::series;
  if (n == 0) {
    r.value = 1.0;
    r.method = Method::closed_form;
    return r;
  }
  r = lower_incomplete(double(n), c);
  const double g = std::tgamma(double(n));
  r.value /= g;
  r.abs_error_estimate /= g;
  return r;
}

IntegralResult waiting_time_volume(int k, double c, std::int64_t samples, std::uint64_t seed) {
  require(k >= 0, "waiting_time_volume: k must be >= 0");
  require(c > 0.0 && std::isfinite(c), "waiting_time_volume: c must be positive");
  IntegralResult r;
  if (k == 0) {
    r.value = std::exp(-c);
    r.method = Method::closed_form;
    return r;
  }
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(k);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(k, c);
  quad::McConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.proposal = quad::UniformProposal{lo, hi};
  auto ordered = [](const Eigen::VectorXd& x) {
    for (Eigen::Index i = 1; i < x.size(); ++i)
      if (!(x(i - 1) < x(i))) return cdouble(0.0);
    return cdouble(1.0);
  };
  r = quad::integrate_mc(ordered, quad::Domain::box(lo, hi), cfg);
  const double damp = std::exp(-c);
  r.value *= damp;
  r.abs_error_estimate *= damp;
  return r;
}

PoissonAverage poisson_average(const std::function<cdouble(double)>& beta, const TimeGrid& grid, double fd_step) {
  require(static_cast<bool>(beta), "poisson_average: beta' is empty");
  require(fd_step > 0.0, "poisson_average: fd_step must be positive");
  constexpr int kPanels = 4;
  cdouble I = 0.0, I_coarse = 0.0;
  for (int s = 0; s < grid.size(); ++s) {
    const double a = s == 0 ? grid.t_a() : grid[s - 1];
    I += integrate_interval(beta, a, grid[s], kPanels);
    I_coarse += integrate_interval(beta, a, grid[s], kPanels / 2);
  }
  PoissonAverage out;
  out.exponent_integral = I;
  double abs_sum = 0.0;
  out.value.value = exponent_series(I, out.terms, abs_sum);
  out.value.method = Method::series;
  out.value.samples_or_order = out.terms;
  out.value.abs_error_estimate = std::abs(out.value.value) * std::abs(I - I_coarse) + 8.0 * kEps * abs_sum;
  out.reference = std::exp(kI * I);

  const double tb = grid.t_b();
  const cdouble I_plus = I + integrate_interval(beta, tb, tb + fd_step, 1);
  const cdouble I_minus = I - integrate_interval(beta, tb - fd_step, tb, 1);
  int unused = 0;
  double unused_abs = 0.0;
  const cdouble v_plus = exponent_series(I_plus, unused, unused_abs);
  const cdouble v_minus = exponent_series(I_minus, unused, unused_abs);
  out.fd_derivative = (v_plus - v_minus) / (2.0 * fd_step);
  out.expected_derivative = kI * beta(tb) * out.value.value;
  return out;
}

OperatorHamiltonian OperatorHamiltonian::constant(const Eigen::MatrixXcd& H) {
  require(H.rows() == H.cols() && H.rows() >= 1, "OperatorHamiltonian: matrix must be square");
  return {static_cast<int>(H.rows()), [H](double) { return H; }};
}

OperatorHamiltonian OperatorHamiltonian::sz_plus_t_sx() {
  return {2, [](double t) {
            Eigen::MatrixXcd h(2, 2);
            h << 1.0, t, t, -1.0;
            return h;
          }};
}

DysonResult dyson_evolution(const OperatorHamiltonian& H, int order, const TimeGrid& grid, double tolerance) {
  require(order >= 0, "dyson: order must be >= 0");
  require(H.dim >= 1 && static_cast<bool>(H.H), "dyson: Hamiltonian is empty");
  const DysonCore fine = dyson_core(H, order, grid, 64);
  const DysonCore coarse = dyson_core(H, order, grid, 32);
  DysonResult r;
  r.order = order;
  r.value = fine.value;
  r.quadrature_error = (fine.value - coarse.value).cwiseAbs().maxCoeff();
  const double x = fine.hmax * (grid.t_b() - grid.t_a());
  // x^{N+1}/(N+1)! in log space
  r.truncation_bound = x == 0.0 ? 0.0 : std::exp((order + 1) * std::log(x) - std::lgamma(order + 2.0));
  const Eigen::MatrixXcd gram = r.value.adjoint() * r.value - Eigen::MatrixXcd::Identity(H.dim, H.dim);
  r.unitarity_drift = hermitian_norm(0.5 * (gram + gram.adjoint()));
  if (r.truncation_bound > tolerance)
    throw NumericalError("dyson: truncation bound " + std::to_string(r.truncation_bound) +
                         " exceeds tolerance " + std::to_string(tolerance));
  return r;
}

}  // namespace fint::gamma_poisson
