#include <doctest.h>

#include <random>

#include "fint/gaussian.hpp"
#include "fint/oracles.hpp"
#include "fint/symplectic.hpp"

using namespace fint;
using namespace fint::symplectic;

namespace {

Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = u(rng);
  return R - R.transpose();
}

Eigen::MatrixXcd random_positive(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = u(rng);
  return (B * B.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d)).cast<cdouble>();
}

}  // namespace

TEST_SUITE("symplectic") {
  TEST_CASE("canonical blocks") {
    Eigen::Matrix2d b;
    b << 0.0, 3.5, -3.5, 0.0;
    CHECK(pfaffian(b) == 3.5);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    m(2, 3) = 2.0;
    m(3, 2) = -2.0;
    CHECK(pfaffian(m) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pfaffian(Eigen::MatrixXd(0, 0)) == 1.0);
  }

  TEST_CASE("Pf^2 = det on random 8x8 and agreement with row expansion") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5; ++k) {
      const Eigen::MatrixXd M = random_skew(8, rng);
      const double pf = pfaffian(M);
      CHECK(std::abs(pf * pf - M.determinant()) <= 1e-10 * std::abs(M.determinant()));
      CHECK(std::abs(pf - oracles::pfaffian_expansion<double>(M)) <= 1e-12 * std::max(1.0, std::abs(pf)));
    }
  }

  TEST_CASE("complex antisymmetric matrices") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd R(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) R(i, j) = cdouble(u(rng), u(rng));
    const Eigen::MatrixXcd M = R - R.transpose();
    const cdouble pf = pfaffian(M);
    CHECK(std::abs(pf - oracles::pfaffian_expansion<cdouble>(M)) < 1e-12 * std::abs(pf));
  }

  TEST_CASE("congruence covariance") {
    std::mt19937_64 rng(4);
    const Eigen::MatrixXd M = random_skew(10, rng);
    Eigen::MatrixXd Q = random_skew(10, rng) + 2.0 * Eigen::MatrixXd::Identity(10, 10);
    const Eigen::MatrixXd C = Q.transpose() * M * Q;
    const double lhs = pfaffian(Eigen::MatrixXd(0.5 * (C - C.transpose())));
    const double rhs = Q.determinant() * pfaffian(M);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
  }

  TEST_CASE("odd dimension and non-antisymmetric input") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    CHECK_THROWS_WITH_AS(pfaffian(m), doctest::Contains("vanishes identically"), ValidationError);
    Eigen::Matrix2d s;
    s << 0.0, 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(pfaffian(s), ValidationError);
  }

  TEST_CASE("interleaved real form of A has Pfaffian det A") {
    std::mt19937_64 rng(6);
    const Eigen::MatrixXd A = random_positive(3, rng).real();
    CHECK(std::abs(pfaffian(interleaved_real_form(A)) - A.determinant()) < 1e-12);
  }

  TEST_CASE("fiducial symplectic values") {
    auto spec = SkewFormSpec::from_hermitian(Eigen::MatrixXcd::Identity(1, 1), 1.0);
    CHECK(std::abs(symplectic_characteristic(spec, Eigen::VectorXcd::Zero(1)) - 1.0) < 1e-15);
    spec.scale = 4.0;
    CHECK(std::abs(symplectic_characteristic(spec, Eigen::VectorXcd::Zero(1)) - 0.5) < 1e-15);
    const auto pair = symplectic_char_pair(spec, Eigen::VectorXcd::Zero(1));
    CHECK(std::abs(pair.theta.value - 0.5) < 1e-12);
  }

  TEST_CASE("random positive A: quadrature against closed form") {
    std::mt19937_64 rng(8);
    auto spec = SkewFormSpec::from_hermitian(random_positive(2, rng), 1.0);
    Eigen::VectorXcd ep(2);
    ep << 0.3, -0.2;
    const auto pair = symplectic_char_pair(spec, ep);
    CHECK(std::abs(pair.theta.value - pair.z_closed) <= pair.theta.abs_error_estimate + 1e-14);
  }

  TEST_CASE("overlap with the Gaussian family on Q = A") {
    std::mt19937_64 rng(10);
    const Eigen::MatrixXcd A = random_positive(2, rng);
    const cdouble s(1.5, 0.4);
    auto sspec = SkewFormSpec::from_hermitian(A, s);
    gaussian::GaussianSpec gspec;
    gspec.form = gaussian::QuadraticFormSpec::custom(A);
    gspec.mean = Eigen::VectorXcd::Zero(2);
    gspec.scale = s;
    Eigen::VectorXcd ep(2);
    ep << -0.25, 0.4;
    const auto sp = symplectic_char_pair(sspec, ep);
    const auto gp = gaussian::char_pair(gspec, ep);
    CHECK(std::abs(sp.lebesgue_theta.value - gp.theta.value) < 1e-10);
    // Pf(sM)^{-2} Det(sW)^{1/2} = Pf(sM)^{-1}: the two prefactor exponents reconcile
    CHECK(std::abs(sp.measure_factor * gp.z_closed - sp.z_closed) < 1e-12);
  }

  TEST_CASE("non-skew and non-positive forms are rejected") {
    SkewFormSpec spec = SkewFormSpec::from_hermitian(Eigen::MatrixXcd::Identity(2, 2));
    spec.omega(0, 1) = 1.0;
    CHECK_FALSE(spec.is_skew_hermitian());
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = SkewFormSpec::from_hermitian(-Eigen::MatrixXcd::Identity(2, 2));
    CHECK_THROWS_AS(symplectic_char_pair(spec, Eigen::VectorXcd::Zero(2)), ValidationError);
  }

  TEST_CASE("symplectic delta limits") {
    const auto spec = SkewFormSpec::from_hermitian(Eigen::MatrixXcd::Identity(1, 1));
    std::vector<cdouble> down, up;
    for (int k = 1; k <= 6; ++k) down.push_back(std::pow(10.0, -k));
    for (int k = 0; k < 10; ++k) up.push_back(std::pow(10.0, 0.25 * k));
    const auto small = symplectic_delta_limits(spec, Eigen::VectorXcd::Zero(1), down);
    for (const cdouble v : small.normalized) CHECK(v == cdouble(1.0));
    const auto large = symplectic_delta_limits(spec, Eigen::VectorXcd::Ones(1), up);
    CHECK(std::abs(large.z.back()) < 1e-10);
    CHECK(std::abs(large.fitted_rate - large.expected_rate) < 0.05 * std::abs(large.expected_rate));
  }
}
