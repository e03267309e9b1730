#include "fint/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>

#include "fint/ode.hpp"
#include "fint/quad.hpp"

namespace fint::gaussian {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  return es.eigenvalues();
}

// Effective real-coordinate covariance, with z' mapped to the same coordinates.
struct Effective {
  Eigen::MatrixXcd W;
  Eigen::VectorXcd zprime;
};

Effective effective(const GaussianSpec& spec, const Eigen::VectorXcd& zprime) {
  require(zprime.size() == spec.form.dim(), "gaussian: z' has wrong dimension");
  const Eigen::MatrixXcd W = covariance(spec.form);
  if (spec.coordinates == Coordinates::real) return {W, zprime};
  return {realify(W).cast<cdouble>(), realify_vector(zprime)};
}

cdouble bilinear(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& v) {
  return (v.transpose() * (M * v))(0, 0);
}

}  // namespace

bool QuadraticFormSpec::is_real(double tol) const {
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(D, k); it; ++it)
      if (std::abs(it.value().imag()) > tol) return false;
  return true;
}

void QuadraticFormSpec::validate() const {
  require(D.rows() == D.cols() && D.rows() >= 1, "QuadraticFormSpec: D must be square and nonempty");
  const Eigen::SparseMatrix<cdouble> diff = D - Eigen::SparseMatrix<cdouble>(D.adjoint());
  double scale = 1.0, worst = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(D, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  require(worst <= 1e-12 * scale, "QuadraticFormSpec: D is not Hermitian within 1e-12");
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<cdouble>> ldlt(D);
  require(ldlt.info() == Eigen::Success, "QuadraticFormSpec: factorization failed");
  require((ldlt.vectorD().real().array() > 0.0).all(), "QuadraticFormSpec: D is not positive-definite");
}

QuadraticFormSpec QuadraticFormSpec::custom(const Eigen::MatrixXcd& D) {
  QuadraticFormSpec spec;
  spec.D = D.sparseView();
  spec.continuum = {Continuum::Kind::custom, 0.0};
  spec.validate();
  return spec;
}

QuadraticFormSpec build_operator(const Continuum& kind, const TimeGrid& grid, Boundary boundary) {
  require(grid.size() >= 2, "build_operator: need at least two slices");
  require(kind.kind != Continuum::Kind::custom, "build_operator: custom forms come from QuadraticFormSpec::custom");
  require(kind.kind == Continuum::Kind::free || kind.omega > 0.0,
          "build_operator: harmonic frequency must be positive");
  if (boundary == Boundary::neumann_at_tb)
    require(grid.is_uniform(), "build_operator: nonuniform grid with neumann_at_tb is unsupported");

  const int n = grid.size();
  const int dim = boundary == Boundary::dirichlet ? n - 1 : n;
  const double w2 = kind.kind == Continuum::Kind::harmonic ? kind.omega * kind.omega : 0.0;
  std::vector<Eigen::Triplet<cdouble>> entries;
  for (int j = 0; j < dim; ++j) {
    const double left = grid.width(j);
    const bool has_right = j + 1 < n;
    const double right = has_right ? grid.width(j + 1) : 0.0;
    // neumann_at_tb: the last unknown has no right neighbour
    const bool last_free = boundary == Boundary::neumann_at_tb && j == n - 1;
    double diag = 1.0 / left + (last_free ? 0.0 : 1.0 / right);
    diag += w2 * 0.5 * (left + (last_free ? 0.0 : right));
    entries.emplace_back(j, j, diag);
    if (j + 1 < dim) {
      entries.emplace_back(j, j + 1, -1.0 / right);
      entries.emplace_back(j + 1, j, -1.0 / right);
    }
  }
  QuadraticFormSpec spec;
  spec.D.resize(dim, dim);
  spec.D.setFromTriplets(entries.begin(), entries.end());
  spec.boundary = boundary;
  spec.grid = grid;
  spec.continuum = kind;
  return spec;
}

Eigen::MatrixXcd covariance(const QuadraticFormSpec& spec) {
  const Eigen::MatrixXcd D(spec.D);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D);
  if (es.info() != Eigen::Success) throw NumericalError("covariance: eigenvalue solver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  require(lam(0) > 0.0, "covariance: D is not positive-definite");
  const double cond = lam(lam.size() - 1) / lam(0);
  if (cond > 1e14) throw NumericalError("covariance: D is ill-conditioned (condition number > 1e14)");
  const Eigen::MatrixXcd& V = es.eigenvectors();
  Eigen::MatrixXcd W = V * lam.cwiseInverse().asDiagonal() * V.adjoint();
  return 0.5 * (W + W.adjoint().eval());
}

double log_det(const QuadraticFormSpec& spec) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<cdouble>> ldlt(spec.D);
  if (ldlt.info() != Eigen::Success) throw NumericalError("log_det: factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD().real();
  require((d.array() > 0.0).all(), "log_det: D is not positive-definite");
  return d.array().log().sum();
}

double det_ratio(const QuadraticFormSpec& a, const QuadraticFormSpec& b) {
  return std::exp(log_det(a) - log_det(b));
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& h) {
  const int d = static_cast<int>(h.rows());
  Eigen::MatrixXd r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = h.real();
  r.topRightCorner(d, d) = -h.imag();
  r.bottomLeftCorner(d, d) = h.imag();
  r.bottomRightCorner(d, d) = h.real();
  return r;
}

Eigen::VectorXcd realify_vector(const Eigen::VectorXcd& z) {
  const int d = static_cast<int>(z.size());
  Eigen::VectorXcd out(2 * d);
  out.head(d) = z.real().cast<cdouble>();
  out.tail(d) = z.imag().cast<cdouble>();
  return out;
}

cdouble sqrt_det_scaled(cdouble s, const Eigen::MatrixXcd& M) {
  require(s.real() >= 0.0 && s != 0.0, "sqrt_det_scaled: s must lie in the closed right half-plane");
  const Eigen::VectorXd lam = hermitian_eigenvalues(M);
  require(lam(0) > 0.0, "sqrt_det_scaled: M is not positive-definite");
  cdouble tr_log = 0.0;
  for (int i = 0; i < lam.size(); ++i) tr_log += std::log(s * lam(i));
  return std::exp(0.5 * tr_log);
}

void GaussianSpec::validate() const {
  form.validate();
  require(mean.size() == form.dim(), "GaussianSpec: mean has wrong dimension");
  require(scale.real() > 0.0, "GaussianSpec: scale must satisfy Re(s) > 0");
  if (coordinates == Coordinates::real)
    require(form.is_real(1e-14), "GaussianSpec: a complex Hermitian form needs complex coordinates");
}

cdouble characteristic(const GaussianSpec& spec, const Eigen::VectorXcd& zprime) {
  spec.validate();
  const Effective eff = effective(spec, zprime);
  const cdouble s = spec.scale;
  return sqrt_det_scaled(s, eff.W) * std::exp(-kPi * s * bilinear(eff.W, eff.zprime)) *
         std::exp(kPi / s * spec.boundary_value);
}

cdouble normalization(const GaussianSpec& spec) {
  spec.validate();
  const cdouble s = spec.scale;
  Eigen::MatrixXcd W = covariance(spec.form);
  if (spec.coordinates == Coordinates::complex) W = realify(W).cast<cdouble>();
  return sqrt_det_scaled(s, W) * std::exp(kPi / s * spec.boundary_value);
}

CharPair char_pair(const GaussianSpec& spec, const Eigen::VectorXcd& zprime, int order) {
  spec.validate();
  require(zprime.size() == spec.form.dim(), "char_pair: z' has wrong dimension");
  const Eigen::MatrixXcd D(spec.form.D);
  Eigen::MatrixXd Q;
  Eigen::VectorXcd mean, zp;
  if (spec.coordinates == Coordinates::real) {
    Q = D.real();
    mean = spec.mean;
    zp = zprime;
  } else {
    Q = realify(D);
    mean = realify_vector(spec.mean);
    zp = realify_vector(zprime);
  }
  if (order <= 0) order = detail::default_order(static_cast<int>(Q.rows()));
  CharPair out;
  out.theta = detail::gaussian_theta_integral(Q, mean, zp, spec.scale, spec.boundary_value, order);
  out.z_closed = characteristic(spec, zprime);
  return out;
}

double det_gelfand_yaglom(double omega, double T) {
  require(omega >= 0.0 && std::isfinite(omega), "det_gelfand_yaglom: omega must be nonnegative");
  require(T > 0.0 && std::isfinite(T), "det_gelfand_yaglom: T must be positive");
  const double w2 = omega * omega;
  auto rhs = [w2](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y(1), w2 * y(0)); };
  const Eigen::Vector2d end = ode::dopri5(rhs, 0.0, T, Eigen::Vector2d(0.0, 1.0), {1e-13, 1e-15});
  return end(0) / T;
}

cdouble SliceKernel::operator()(cdouble s, double x, double y) const {
  return norm * std::exp(-(kPi / s) * (a * x * x - 2.0 * b * x * y + c * y * y));
}

SliceKernel slice_kernel(const PropagatorKind& kind, cdouble s, double h) {
  require(h > 0.0, "slice_kernel: slice width must be positive");
  const double m = kind.mass;
  const double pot = kind.kind == PropagatorKind::Kind::harmonic ? 0.5 * m * kind.omega * kind.omega * h : 0.0;
  SliceKernel k;
  k.a = m / h + pot;
  k.b = m / h;
  k.c = m / h + pot;
  k.norm = std::sqrt(m / (s * h));
  return k;
}

SliceKernel compose(const SliceKernel& first, const SliceKernel& second, cdouble s) {
  // int exp(-(pi/s)(p z^2 - 2 z q)) dz = (s/p)^{1/2} exp((pi/s) q^2 / p)
  const double p = first.c + second.a;
  require(p > 0.0, "compose: kernels are not integrable over the middle variable");
  SliceKernel out;
  out.a = first.a - first.b * first.b / p;
  out.b = first.b * second.b / p;
  out.c = second.c - second.b * second.b / p;
  out.norm = first.norm * second.norm * std::sqrt(s / p);
  return out;
}

namespace {

void check_propagator_scale(cdouble s, bool continuation) {
  require(s != 0.0, "propagator: scale must be nonzero");
  require(s.real() >= 0.0, "propagator: scale must lie in the right half-plane");
  if (s.real() == 0.0)
    require(continuation,
            "propagator: pure-imaginary scale (oscillatory regime) needs the continuation flag");
}

void check_kind(const PropagatorKind& kind) {
  require(kind.mass > 0.0 && std::isfinite(kind.mass), "propagator: mass must be positive");
  require(kind.omega >= 0.0 && std::isfinite(kind.omega), "propagator: omega must be nonnegative");
}

}  // namespace

IntegralResult propagator(const PropagatorKind& kind, cdouble s, const TimeGrid& grid, double x_a,
                          double x_b, bool continuation) {
  check_propagator_scale(s, continuation);
  check_kind(kind);
  SliceKernel k = slice_kernel(kind, s, grid.width(0));
  for (int i = 1; i < grid.size(); ++i) k = compose(k, slice_kernel(kind, s, grid.width(i)), s);
  IntegralResult r;
  r.value = k(s, x_a, x_b);
  r.abs_error_estimate = 8.0 * grid.size() * std::numeric_limits<double>::epsilon() * std::abs(r.value);
  r.method = Method::closed_form;
  r.samples_or_order = grid.size();
  return r;
}

cdouble propagator_closed_form(const PropagatorKind& kind, cdouble s, double T, double x_a, double x_b) {
  check_propagator_scale(s, true);
  check_kind(kind);
  require(T > 0.0, "propagator_closed_form: T must be positive");
  const double m = kind.mass;
  if (kind.kind == PropagatorKind::Kind::free || kind.omega == 0.0) {
    const double dx = x_b - x_a;
    return std::sqrt(m / (s * T)) * std::exp(-(kPi / s) * m * dx * dx / T);
  }
  const double w = kind.omega;
  const double sh = std::sinh(w * T), ch = std::cosh(w * T);
  const double action = m * w * ((x_a * x_a + x_b * x_b) * ch - 2.0 * x_a * x_b) / sh;
  return std::sqrt(m * w / (s * sh)) * std::exp(-(kPi / s) * action);
}

DeltaLimitReport delta_limits(const GaussianSpec& spec, const Eigen::VectorXcd& zprime,
                              std::span<const cdouble> s_sequence) {
  DeltaLimitReport rep;
  detail::check_scale_sequence(s_sequence, rep.direction);
  GaussianSpec probe = spec;
  probe.scale = s_sequence.front();
  probe.validate();
  const Effective eff = effective(spec, zprime);
  const Eigen::VectorXd w = hermitian_eigenvalues(eff.W);
  const cdouble q = bilinear(eff.W, eff.zprime);
  const int n = static_cast<int>(w.size());

  std::vector<double> r, y;
  for (const cdouble s : s_sequence) {
    cdouble log_sqrt_det = 0.0, log_sqrt_det_q = 0.0;
    for (int i = 0; i < n; ++i) {
      log_sqrt_det += 0.5 * std::log(s * w(i));
      log_sqrt_det_q += 0.5 * std::log(s / w(i));
    }
    const cdouble log_z = log_sqrt_det - kPi * s * q + kPi / s * spec.boundary_value;
    const cdouble log_dual = -log_sqrt_det_q - (kPi / s) * q;
    rep.s.push_back(s);
    rep.z.push_back(std::exp(log_z));
    rep.log_abs_z.push_back(log_z.real());
    rep.normalized.push_back(std::exp(-kPi * s * q));
    rep.log_abs_dual.push_back(log_dual.real());
    if (rep.direction == DeltaLimitReport::Direction::to_infinity) {
      r.push_back(std::abs(s));
      y.push_back(log_z.real());
    } else {
      r.push_back(1.0 / std::abs(s));
      y.push_back(log_dual.real());
    }
  }
  const cdouble unit = s_sequence.back() / std::abs(s_sequence.back());
  if (rep.direction == DeltaLimitReport::Direction::to_infinity) {
    rep.expected_rate = -kPi * (unit * q).real();
  } else {
    rep.expected_rate = -kPi * (q / unit).real();
  }
  rep.expected_power = 0.5 * n;
  std::tie(rep.fitted_rate, rep.fitted_power) = detail::fit_rate_power(r, y);
  return rep;
}

namespace detail {

int default_order(int real_dim) {
  switch (real_dim) {
    case 1: return 96;
    case 2: return 64;
    case 3: return 40;
    case 4: return 20;
    case 5: return 12;
    default: return 8;
  }
}

IntegralResult gaussian_theta_integral(const Eigen::MatrixXd& Q, const Eigen::VectorXcd& mean,
                                       const Eigen::VectorXcd& zprime, cdouble s, cdouble B,
                                       int order) {
  const int n = static_cast<int>(Q.rows());
  require(mean.size() == n && zprime.size() == n, "theta integral: dimension mismatch");
  const double kappa = (1.0 / s).real();
  require(kappa > 0.0, "theta integral: integrability needs Re(1/s) > 0");
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  require(llt.info() == Eigen::Success, "theta integral: quadratic form is not positive-definite");
  const Eigen::MatrixXd L = llt.matrixL();
  // x = Re(mean) + T y with kappa (x - m)^T Q (x - m) = |y|^2
  const Eigen::MatrixXd T =
      L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n)) / std::sqrt(kappa);
  const double log_jacobian = -L.diagonal().array().log().sum() - 0.5 * n * std::log(kappa);
  const Eigen::MatrixXcd Qc = Q.cast<cdouble>();
  const Eigen::VectorXcd offset = cdouble(0.0, -1.0) * mean.imag().cast<cdouble>();
  const cdouble two_pi_i(0.0, 2.0 * kPi);

  auto integrand = [&](const Eigen::VectorXd& yv) -> cdouble {
    const Eigen::VectorXcd u = offset + (T * yv).cast<cdouble>();
    const cdouble quadratic = (u.transpose() * (Qc * u))(0, 0);
    const cdouble phase = two_pi_i * (zprime.transpose() * u)(0, 0);
    return std::exp(phase - (kPi / s) * (quadratic - B) + kPi * yv.squaredNorm() + log_jacobian);
  };
  return quad::integrate_quad(integrand, quad::Domain::full_space(n, quad::Weight::gaussian), order);
}

std::pair<double, double> fit_rate_power(const std::vector<double>& r, const std::vector<double>& y) {
  const int k = static_cast<int>(r.size());
  if (k < 3) return {std::nan(""), std::nan("")};
  Eigen::MatrixXd A(k, 3);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    A(i, 0) = r[static_cast<std::size_t>(i)];
    A(i, 1) = std::log(r[static_cast<std::size_t>(i)]);
    A(i, 2) = 1.0;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return {c(0), c(1)};
}

void check_scale_sequence(std::span<const cdouble> s_sequence, DeltaLimitReport::Direction& dir) {
  require(!s_sequence.empty(), "delta_limits: empty scale sequence");
  for (const cdouble s : s_sequence)
    require(s.real() > 0.0, "delta_limits: scale sequence leaves the right half-plane");
  if (s_sequence.size() == 1) {
    dir = std::abs(s_sequence.front()) < 1.0 ? DeltaLimitReport::Direction::to_zero
                                              : DeltaLimitReport::Direction::to_infinity;
    return;
  }
  const bool up = std::abs(s_sequence[1]) > std::abs(s_sequence[0]);
  for (std::size_t i = 1; i < s_sequence.size(); ++i) {
    const double prev = std::abs(s_sequence[i - 1]), cur = std::abs(s_sequence[i]);
    require(up ? cur > prev : cur < prev, "delta_limits: |s| must be strictly monotone");
  }
  dir = up ? DeltaLimitReport::Direction::to_infinity : DeltaLimitReport::Direction::to_zero;
}

}  // namespace detail

}  // namespace fint::gaussian
