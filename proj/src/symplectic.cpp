#include "fint/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>

namespace fint::symplectic {

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble kI(0.0, 1.0);

// Hermitian part and eta' in the integration coordinates.
struct Effective {
  Eigen::MatrixXd A;         // real symmetric positive-definite
  Eigen::MatrixXcd M;        // A^{-1}
  Eigen::VectorXcd mean;
  Eigen::VectorXcd etaprime;
};

Effective effective(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime) {
  require(etaprime.size() == spec.dim(), "symplectic: eta' has wrong dimension");
  const Eigen::MatrixXcd H = spec.hermitian_part();
  Effective eff;
  if (spec.coordinates == gaussian::Coordinates::real) {
    eff.A = H.real();
    eff.mean = spec.mean;
    eff.etaprime = etaprime;
  } else {
    eff.A = gaussian::realify(H);
    eff.mean = gaussian::realify_vector(spec.mean);
    eff.etaprime = gaussian::realify_vector(etaprime);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(eff.A);
  require(llt.info() == Eigen::Success, "symplectic: Hermitian part is not positive-definite");
  eff.M = llt.solve(Eigen::MatrixXd::Identity(eff.A.rows(), eff.A.cols())).cast<cdouble>();
  eff.M = 0.5 * (eff.M + eff.M.adjoint().eval());
  return eff;
}

cdouble bilinear(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& v) {
  return (v.transpose() * (M * v))(0, 0);
}

}  // namespace

SkewFormSpec SkewFormSpec::from_hermitian(const Eigen::MatrixXcd& A, cdouble s) {
  SkewFormSpec spec;
  spec.omega = kI * A;
  spec.scale = s;
  spec.mean = Eigen::VectorXcd::Zero(A.rows());
  return spec;
}

Eigen::MatrixXcd SkewFormSpec::hermitian_part() const {
  Eigen::MatrixXcd A = -kI * omega;
  return 0.5 * (A + A.adjoint().eval());
}

bool SkewFormSpec::is_skew_hermitian() const {
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  return (omega + omega.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

bool SkewFormSpec::is_positive() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(), Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues()(0) > 0.0;
}

void SkewFormSpec::validate() const {
  require(omega.rows() == omega.cols() && omega.rows() >= 1, "SkewFormSpec: Omega must be square");
  require(is_skew_hermitian(), "SkewFormSpec: Omega + Omega^dagger != 0 within 1e-12");
  require(mean.size() == dim(), "SkewFormSpec: mean has wrong dimension");
  require(scale.real() > 0.0, "SkewFormSpec: scale must satisfy Re(s) > 0");
  require(is_positive(), "SkewFormSpec: -i Omega is not positive-definite (nonintegrable)");
  if (coordinates == gaussian::Coordinates::real)
    require(hermitian_part().imag().cwiseAbs().maxCoeff() <= 1e-14,
            "SkewFormSpec: a complex Hermitian part needs complex coordinates");
}

cdouble scaled_pfaffian(const SkewFormSpec& spec, cdouble s) {
  const Effective eff = effective(spec, Eigen::VectorXcd::Zero(spec.dim()));
  return gaussian::sqrt_det_scaled(s, eff.M);
}

cdouble symplectic_characteristic(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime) {
  spec.validate();
  const Effective eff = effective(spec, etaprime);
  const cdouble s = spec.scale;
  return std::exp(-kPi * s * bilinear(eff.M, eff.etaprime)) / gaussian::sqrt_det_scaled(s, eff.M) *
         std::exp(kPi / s * spec.boundary_value);
}

SymplecticCharPair symplectic_char_pair(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime, int order) {
  spec.validate();
  const Effective eff = effective(spec, etaprime);
  if (order <= 0) order = gaussian::detail::default_order(static_cast<int>(eff.A.rows()));
  SymplecticCharPair out;
  out.lebesgue_theta = gaussian::detail::gaussian_theta_integral(eff.A, eff.mean, eff.etaprime, spec.scale,
                                                                 spec.boundary_value, order);
  const cdouble pf = gaussian::sqrt_det_scaled(spec.scale, eff.M);
  out.measure_factor = 1.0 / (pf * pf);
  out.theta = out.lebesgue_theta;
  out.theta.value *= out.measure_factor;
  out.theta.abs_error_estimate *= std::abs(out.measure_factor);
  out.z_closed = symplectic_characteristic(spec, etaprime);
  return out;
}

gaussian::DeltaLimitReport symplectic_delta_limits(const SkewFormSpec& spec, const Eigen::VectorXcd& etaprime,
                                                   std::span<const cdouble> s_sequence) {
  using Direction = gaussian::DeltaLimitReport::Direction;
  gaussian::DeltaLimitReport rep;
  gaussian::detail::check_scale_sequence(s_sequence, rep.direction);
  SkewFormSpec probe = spec;
  probe.scale = s_sequence.front();
  probe.validate();
  const Effective eff = effective(spec, etaprime);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(eff.M, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd mu = es.eigenvalues();
  const cdouble q = bilinear(eff.M, eff.etaprime);
  const int n = static_cast<int>(mu.size());

  std::vector<double> r, y;
  for (const cdouble s : s_sequence) {
    cdouble log_pf = 0.0, log_pf_a = 0.0;
    for (int i = 0; i < n; ++i) {
      log_pf += 0.5 * std::log(s * mu(i));
      log_pf_a += 0.5 * std::log(s / mu(i));
    }
    const cdouble log_z = -log_pf - kPi * s * q + kPi / s * spec.boundary_value;
    const cdouble log_dual = log_pf_a - (kPi / s) * q;
    rep.s.push_back(s);
    rep.z.push_back(std::exp(log_z));
    rep.log_abs_z.push_back(log_z.real());
    rep.normalized.push_back(std::exp(-kPi * s * q));
    rep.log_abs_dual.push_back(log_dual.real());
    if (rep.direction == Direction::to_infinity) {
      r.push_back(std::abs(s));
      y.push_back(log_z.real());
    } else {
      r.push_back(1.0 / std::abs(s));
      y.push_back(log_dual.real());
    }
  }
  const cdouble unit = s_sequence.back() / std::abs(s_sequence.back());
  rep.expected_rate = rep.direction == Direction::to_infinity ? -kPi * (unit * q).real()
                                                              : -kPi * (q / unit).real();
  rep.expected_power = -0.5 * n;
  std::tie(rep.fitted_rate, rep.fitted_power) = gaussian::detail::fit_rate_power(r, y);
  return rep;
}

Eigen::MatrixXd interleaved_real_form(const Eigen::MatrixXd& A) {
  const Eigen::Index d = A.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      w(2 * i, 2 * j + 1) = A(i, j);
      w(2 * i + 1, 2 * j) = -A(j, i);
    }
  return w;
}

}  // namespace fint::symplectic
