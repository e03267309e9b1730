#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fint/gaussian.hpp"
#include "fint/oracles.hpp"

using namespace fint;
using namespace fint::gaussian;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianSpec unit_spec(int d, cdouble s) {
  GaussianSpec spec;
  spec.form = QuadraticFormSpec::custom(Eigen::MatrixXcd::Identity(d, d));
  spec.mean = Eigen::VectorXcd::Zero(d);
  spec.scale = s;
  return spec;
}

Eigen::MatrixXcd random_spd(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = u(rng);
  return (B * B.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d)).cast<cdouble>();
}

}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("free second-difference stencil") {
    // three unit slices with both ends pinned leave two unknowns
    const auto spec = build_operator(Continuum::free(), TimeGrid::uniform(0.0, 3.0, 3), Boundary::dirichlet);
    Eigen::MatrixXcd expected(2, 2);
    expected << 2.0, -1.0, -1.0, 2.0;
    CHECK((Eigen::MatrixXcd(spec.D) - expected).norm() < 1e-15);
  }

  TEST_CASE("harmonic with vanishing frequency is rejected, free is the omega -> 0 operator") {
    const TimeGrid g(0.0, 1.0, {0.2, 0.5, 0.7, 1.0});
    CHECK_THROWS_AS(build_operator(Continuum::harmonic(0.0), g, Boundary::dirichlet), ValidationError);
    const auto f = build_operator(Continuum::free(), g, Boundary::dirichlet);
    const auto h = build_operator(Continuum::harmonic(1e-9), g, Boundary::dirichlet);
    CHECK((Eigen::MatrixXcd(f.D) - Eigen::MatrixXcd(h.D)).norm() < 1e-17);
  }

  TEST_CASE("neumann on a nonuniform grid is unsupported") {
    CHECK_THROWS_AS(build_operator(Continuum::free(), TimeGrid(0.0, 1.0, {0.3, 1.0}), Boundary::neumann_at_tb),
                    ValidationError);
  }

  TEST_CASE("covariance of simple forms") {
    CHECK((covariance(QuadraticFormSpec::custom(Eigen::MatrixXcd::Identity(3, 3))) -
           Eigen::MatrixXcd::Identity(3, 3))
              .norm() < 1e-15);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 4.0;
    const Eigen::MatrixXcd W = covariance(QuadraticFormSpec::custom(D));
    CHECK(std::abs(W(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(W(1, 1) - 0.25) < 1e-15);
    CHECK(std::abs(W(0, 1)) < 1e-15);
  }

  TEST_CASE("free covariance is the Brownian pattern") {
    // free endpoint: W_ij = min(t_i, t_j); pinned endpoint: the bridge min - t_i t_j / T
    const TimeGrid g = TimeGrid::uniform(0.0, 1.5, 3);
    const Eigen::MatrixXcd Wn = covariance(build_operator(Continuum::free(), g, Boundary::neumann_at_tb));
    const Eigen::MatrixXcd Wd = covariance(build_operator(Continuum::free(), g, Boundary::dirichlet));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(Wn(i, j) - std::min(g[i], g[j])) < 1e-12);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(Wd(i, j) - (std::min(g[i], g[j]) - g[i] * g[j] / 1.5)) < 1e-12);
  }

  TEST_CASE("covariance inverts D") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXcd D = random_spd(4, rng);
    const Eigen::MatrixXcd W = covariance(QuadraticFormSpec::custom(D));
    CHECK((D * W - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10);
    CHECK((W * D - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10);
    CHECK((W - W.adjoint()).norm() < 1e-12);
  }

  TEST_CASE("ill-conditioned and indefinite forms") {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(2, 2);
    D(1, 1) = 1e-15;
    CHECK_THROWS_AS(covariance(QuadraticFormSpec::custom(D)), NumericalError);
    D(1, 1) = -1.0;
    CHECK_THROWS_AS(QuadraticFormSpec::custom(D), ValidationError);
  }

  TEST_CASE("unit Gaussian characteristic pair") {
    const auto pair = char_pair(unit_spec(1, 1.0), Eigen::VectorXcd::Zero(1));
    CHECK(std::abs(pair.theta.value - 1.0) < 1e-12);
    CHECK(std::abs(pair.z_closed - 1.0) < 1e-15);
  }

  TEST_CASE("Fourier transform of the unit Gaussian") {
    for (const double k : {0.3, 0.7, 1.1}) {
      const auto pair = char_pair(unit_spec(1, 1.0), Eigen::VectorXcd::Constant(1, k));
      const double exact = std::exp(-kPi * k * k);
      CHECK(std::abs(pair.z_closed - exact) < 1e-15);
      CHECK(std::abs(pair.theta.value - exact) <= pair.theta.abs_error_estimate + 1e-15);
    }
  }

  TEST_CASE("random 2x2 form at s = 2") {
    std::mt19937_64 rng(17);
    GaussianSpec spec = unit_spec(2, 2.0);
    spec.form = QuadraticFormSpec::custom(random_spd(2, rng));
    spec.mean << 0.2, -0.4;
    Eigen::VectorXcd zp(2);
    zp << 0.35, -0.15;
    const auto pair = char_pair(spec, zp);
    CHECK(std::abs(pair.theta.value - pair.z_closed) <= pair.theta.abs_error_estimate + 1e-14);
  }

  TEST_CASE("complex coordinates are realified") {
    Eigen::MatrixXcd Q(2, 2);
    Q << 2.0, cdouble(0.5, 0.4), cdouble(0.5, -0.4), 1.5;
    GaussianSpec spec;
    spec.form = QuadraticFormSpec::custom(Q);
    spec.coordinates = Coordinates::complex;
    spec.mean = Eigen::VectorXcd::Zero(2);
    spec.scale = cdouble(1.0, 0.5);
    Eigen::VectorXcd zp(2);
    zp << cdouble(0.2, -0.1), cdouble(0.0, 0.15);
    const auto pair = char_pair(spec, zp, 12);
    CHECK(std::abs(pair.theta.value - pair.z_closed) <= pair.theta.abs_error_estimate + 1e-13);
    // the real form of a complex Hermitian matrix is symmetric with doubled spectrum
    const Eigen::MatrixXd R = realify(Q);
    CHECK((R - R.transpose()).norm() == 0.0);
    CHECK(std::abs(R.determinant() - std::pow(Q.determinant().real(), 2)) < 1e-12);
  }

  TEST_CASE("a complex form in real coordinates is rejected") {
    Eigen::MatrixXcd Q(2, 2);
    Q << 2.0, cdouble(0.0, 0.5), cdouble(0.0, -0.5), 2.0;
    GaussianSpec spec = unit_spec(2, 1.0);
    spec.form = QuadraticFormSpec::custom(Q);
    CHECK_THROWS_AS(characteristic(spec, Eigen::VectorXcd::Zero(2)), ValidationError);
  }

  TEST_CASE("scale outside the right half-plane is rejected") {
    CHECK_THROWS_AS(char_pair(unit_spec(1, cdouble(0.0, 1.0)), Eigen::VectorXcd::Zero(1)), ValidationError);
    CHECK_THROWS_AS(normalization(unit_spec(1, -1.0)), ValidationError);
  }

  TEST_CASE("normalization examples") {
    CHECK(std::abs(normalization(unit_spec(1, 4.0)) - 2.0) < 1e-15);
    CHECK(std::abs(normalization(unit_spec(3, 1.0)) - 1.0) < 1e-15);
    GaussianSpec spec = unit_spec(2, 1.0);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(2, 2);
    D(1, 1) = 2.0;
    spec.form = QuadraticFormSpec::custom(D);
    CHECK(std::abs(normalization(spec) - 1.0 / std::sqrt(2.0)) < 1e-15);
    // quadrature of the zero-frequency Theta is an independent route
    const auto pair = char_pair(spec, Eigen::VectorXcd::Zero(2));
    CHECK(std::abs(pair.theta.value - 1.0 / std::sqrt(2.0)) < 1e-12);
  }

  TEST_CASE("det(sW)^{1/2} det(sQ)^{1/2} s^{-d} = 1") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXcd Q = random_spd(3, rng);
    const Eigen::MatrixXcd W = Q.inverse();
    for (const cdouble s : {cdouble(1.0), cdouble(0.3, 2.0), cdouble(5.0, -4.0), cdouble(1e-3, 1.0)})
      CHECK(std::abs(sqrt_det_scaled(s, W) * sqrt_det_scaled(s, Q) / std::pow(s, 3) - 1.0) < 1e-10);
  }

  TEST_CASE("branch continuity along an arc in the right half-plane") {
    std::mt19937_64 rng(9);
    const Eigen::MatrixXcd W = random_spd(3, rng).inverse();
    cdouble prev = sqrt_det_scaled(std::polar(2.0, -1.5), W);
    double worst = 0.0;
    for (int k = 1; k <= 120; ++k) {
      // steps of 1.5 degrees
      const cdouble cur = sqrt_det_scaled(std::polar(2.0, -1.5 + k * 0.025), W);
      worst = std::max(worst, std::abs(std::arg(cur / prev)));
      prev = cur;
    }
    CHECK(worst < 0.1);
  }

  TEST_CASE("shifting the mean leaves Theta unchanged") {
    std::mt19937_64 rng(21);
    GaussianSpec spec = unit_spec(2, cdouble(1.2, 0.3));
    spec.form = QuadraticFormSpec::custom(random_spd(2, rng));
    Eigen::VectorXcd zp(2);
    zp << 0.2, 0.1;
    const auto a = char_pair(spec, zp);
    const cdouble n0 = normalization(spec);
    spec.mean << 1.5, -0.75;
    const auto b = char_pair(spec, zp);
    CHECK(std::abs(a.theta.value - b.theta.value) < 1e-10);
    CHECK(std::abs(normalization(spec) - n0) < 1e-10);
  }

  TEST_CASE("Gelfand-Yaglom examples") {
    CHECK(det_gelfand_yaglom(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(det_gelfand_yaglom(1.0, 1.0) - 1.1752011936438014) < 1e-9);
    CHECK(std::abs(det_gelfand_yaglom(2.0, 0.5) - std::sinh(1.0)) < 1e-9);
  }

  TEST_CASE("discrete determinant ratio approaches sinh(wT)/(wT)") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 2000);
    const auto f = build_operator(Continuum::free(), g, Boundary::dirichlet);
    const auto h = build_operator(Continuum::harmonic(1.0), g, Boundary::dirichlet);
    CHECK(std::abs(det_ratio(h, f) - oracles::sinh_ratio(1.0, 1.0)) < 1e-3);
  }

  TEST_CASE("free kernel semigroup") {
    const auto kind = PropagatorKind::free(1.3);
    for (const cdouble s : {cdouble(1.0), cdouble(2.0, -1.0)}) {
      const cdouble one = propagator(kind, s, TimeGrid::uniform(0.0, 2.0, 1), 0.4, -0.3).value;
      const cdouble many = propagator(kind, s, TimeGrid::uniform(0.0, 2.0, 64), 0.4, -0.3).value;
      const cdouble irregular = propagator(kind, s, TimeGrid(0.0, 2.0, {0.1, 0.7, 0.75, 1.9, 2.0}), 0.4, -0.3).value;
      CHECK(std::abs(many - one) <= 1e-12 * std::abs(one));
      CHECK(std::abs(irregular - one) <= 1e-12 * std::abs(one));
      CHECK(std::abs(one - propagator_closed_form(kind, s, 2.0, 0.4, -0.3)) <= 1e-12 * std::abs(one));
    }
  }

  TEST_CASE("harmonic amplitude prefactor") {
    const auto h = PropagatorKind::harmonic(1.0, 1.0);
    const auto f = PropagatorKind::free(1.0);
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 2000);
    const cdouble ratio = propagator(h, 1.0, g, 0.0, 0.0).value / propagator(f, 1.0, g, 0.0, 0.0).value;
    CHECK(std::abs(ratio - std::pow(std::sinh(1.0), -0.5)) < 1e-3);
    // and the Mehler kernel at endpoints away from zero
    const cdouble k = propagator(h, 0.7, g, 0.3, -0.5).value;
    CHECK(std::abs(k - propagator_closed_form(h, 0.7, 1.0, 0.3, -0.5)) < 1e-3 * std::abs(k));
  }

  TEST_CASE("oscillatory scale needs the continuation flag") {
    const auto kind = PropagatorKind::free();
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 4);
    CHECK_THROWS_AS(propagator(kind, cdouble(0.0, 1.0), g, 0.0, 0.5), ValidationError);
    const cdouble v = propagator(kind, cdouble(0.0, 1.0), g, 0.0, 0.5, true).value;
    const cdouble near = propagator(kind, cdouble(1e-9, 1.0), g, 0.0, 0.5).value;
    CHECK(std::abs(v - near) < 1e-7);
  }

  TEST_CASE("small-scale limit normalizes to one") {
    std::vector<cdouble> seq;
    for (int k = 1; k <= 6; ++k) seq.push_back(std::pow(10.0, -k));
    const auto rep = delta_limits(unit_spec(1, 1.0), Eigen::VectorXcd::Zero(1), seq);
    CHECK(rep.direction == DeltaLimitReport::Direction::to_zero);
    for (const cdouble v : rep.normalized) CHECK(v == cdouble(1.0));
  }

  TEST_CASE("large-scale decay rate") {
    std::vector<cdouble> seq;
    for (int k = 0; k < 10; ++k) seq.push_back(std::polar(std::pow(10.0, 0.5 + 0.2 * k), 0.3));
    Eigen::VectorXcd zp(1);
    zp << 0.5;
    const auto rep = delta_limits(unit_spec(1, 1.0), zp, seq);
    CHECK(rep.direction == DeltaLimitReport::Direction::to_infinity);
    CHECK(std::abs(rep.fitted_rate - rep.expected_rate) < 0.05 * std::abs(rep.expected_rate));
    CHECK(std::abs(rep.fitted_power - rep.expected_power) < 0.05);
    CHECK(rep.log_abs_z.back() < rep.log_abs_z.front());
  }

  TEST_CASE("scale sequences must stay in the half-plane and be monotone") {
    const std::vector<cdouble> out = {1.0, cdouble(-0.1, 0.5)};
    CHECK_THROWS_AS(delta_limits(unit_spec(1, 1.0), Eigen::VectorXcd::Zero(1), out), ValidationError);
    const std::vector<cdouble> zigzag = {1.0, 0.5, 0.7};
    CHECK_THROWS_AS(delta_limits(unit_spec(1, 1.0), Eigen::VectorXcd::Zero(1), zigzag), ValidationError);
  }
}
