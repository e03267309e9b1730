#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fint/gamma_poisson.hpp"
#include "fint/oracles.hpp"

using namespace fint;
using namespace fint::gamma_poisson;

namespace {

constexpr double kPi = std::numbers::pi;

GammaSpec gamma_spec(cdouble alpha, std::initializer_list<cdouble> beta) {
  GammaSpec s;
  s.alpha = alpha;
  s.beta.resize(static_cast<Eigen::Index>(beta.size()));
  Eigen::Index i = 0;
  for (cdouble b : beta) s.beta(i++) = b;
  return s;
}

TestFunction gaussian_test() {
  return {[](double w) { return cdouble(std::exp(-kPi * w * w)); }, 8.0, std::numeric_limits<int>::max(), "gaussian"};
}

}  // namespace

TEST_SUITE("gamma_poisson") {
  TEST_CASE("gamma normalization examples") {
    CHECK(std::abs(gamma_normalization(gamma_spec(1.0, {1.0})).value - 1.0) < 1e-12);
    CHECK(std::abs(gamma_normalization(gamma_spec(2.5, {2.0})).value - std::pow(2.0, -2.5)) < 1e-12);
    CHECK(std::abs(gamma_normalization(gamma_spec(0.5, {1.0, 4.0})).value - 0.5) < 1e-12);
  }

  TEST_CASE("gamma normalization with complex beta") {
    const cdouble b(1.2, 0.4);
    const auto r = gamma_normalization(gamma_spec(1.5, {b}));
    CHECK(std::abs(r.value - std::pow(b, -1.5)) < 1e-10);
  }

  TEST_CASE("multiplicative rescaling") {
    const auto a = gamma_normalization(gamma_spec(2.5, {0.7, 1.3, 2.0})).value;
    const auto b = gamma_normalization(gamma_spec(2.5, {0.7 * 3.0, 1.3 * 3.0, 2.0 * 3.0})).value;
    CHECK(std::abs(b - std::pow(3.0, -2.5 * 3) * a) < 1e-8 * std::abs(b));
  }

  TEST_CASE("gamma normalization preconditions") {
    CHECK_THROWS_AS(gamma_normalization(gamma_spec(0.0, {1.0})), ValidationError);
    CHECK_THROWS_AS(gamma_normalization(gamma_spec(1.0, {-1.0})), ValidationError);
    auto finite = gamma_spec(1.0, {1.0});
    finite.cutoff = cdouble(3.0);
    CHECK_THROWS_AS(gamma_normalization(finite), ValidationError);
  }

  TEST_CASE("lower incomplete gamma examples") {
    CHECK(std::abs(lower_incomplete(1.0, 2.0).value - (1.0 - std::exp(-2.0))) < 1e-15);
    CHECK(lower_incomplete(3.0, 0.0).value == cdouble(0.0));
    CHECK(std::abs(lower_incomplete(2.0, 1.0).value - (1.0 - 2.0 * std::exp(-1.0))) < 1e-15);
  }

  TEST_CASE("series agrees with the continued fraction") {
    for (const cdouble a : {cdouble(0.3), cdouble(1.7), cdouble(3.0, 0.5)})
      for (const cdouble c : {cdouble(0.2), cdouble(3.0), cdouble(7.5), cdouble(2.0, 1.0)}) {
        const cdouble ref = oracles::lower_gamma_cf(a, c);
        CHECK(std::abs(lower_incomplete(a, c).value - ref) <= 1e-10 * std::abs(ref));
      }
  }

  TEST_CASE("upper incomplete gamma") {
    CHECK(std::abs(upper_incomplete(1.0, 0.0).value - 1.0) < 1e-15);
    CHECK(std::abs(upper_incomplete(1.0, 2.0).value - std::exp(-2.0)) < 1e-15);
    for (const double c : {0.1, 1.0, 4.0, 9.0})
      CHECK(std::abs(upper_incomplete(3.0, c).value + lower_incomplete(3.0, c).value - 2.0) < 1e-12);
  }

  TEST_CASE("series failure is a numerical error") {
    CHECK_THROWS_AS(lower_incomplete(0.5, -60.0), NumericalError);
    CHECK_THROWS_AS(lower_incomplete(-0.5, 1.0), ValidationError);
  }

  TEST_CASE("principal value") {
    CHECK(std::abs(principal_value(2.0).value - 0.5) < 1e-15);
    const auto pv = principal_value(cdouble(1.0, 1.0));
    CHECK(std::abs(pv.value - cdouble(0.5, -0.5)) < 1e-15);
    CHECK(pv.monotone);
    const auto tail = principal_value(2.0, {30.0, 40.0});
    CHECK(std::abs(tail.partial[0] - tail.partial[1]) <= 1e-12);
    CHECK_THROWS_AS(principal_value(cdouble(-1.0, 0.0)), ValidationError);
  }

  TEST_CASE("delta functional") {
    CHECK(std::abs(delta_functional(gaussian_test(), 1e3).value - 1.0) < 1e-2);
    const TestFunction away{[](double w) {
                              const double x = w - 3.0;
                              return std::abs(x) < 1.0 ? cdouble(std::exp(-1.0 / (1.0 - x * x))) : cdouble(0.0);
                            },
                            4.5, std::numeric_limits<int>::max(), "bump"};
    CHECK(std::abs(delta_functional(away, 1e3).value) < 1e-2);
  }

  TEST_CASE("delta functional is linear") {
    const TestFunction g{[](double w) { return cdouble(std::cos(w) * std::exp(-w * w)); }, 8.0};
    const TestFunction f = gaussian_test();
    const cdouble a(2.0, -1.0), b(-0.5, 0.3);
    const TestFunction h{[&](double w) { return a * f.f(w) + b * g.f(w); }, 8.0};
    const cdouble lhs = delta_functional(h, 50.0).value;
    const cdouble rhs = a * delta_functional(f, 50.0).value + b * delta_functional(g, 50.0).value;
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  TEST_CASE("delta derivative pairings") {
    const auto m1 = delta_derivative_pairing(1, gaussian_test());
    CHECK(std::abs(m1.pairing.value - delta_functional(gaussian_test(), 1e3).value) < 1e-12);

    const TestFunction odd{[](double w) { return cdouble(w * std::exp(-w * w)); }, 8.0};
    const auto m2 = delta_derivative_pairing(2, odd);
    // -f'(0) = -1 for f = w e^{-w^2}
    CHECK(std::abs(m2.reduced - (-1.0)) < 1e-2);
    CHECK(std::abs(m2.constant - m2.analytic_constant) < 1e-2 * std::abs(m2.analytic_constant));

    CHECK(std::abs(delta_derivative_pairing(2, gaussian_test()).reduced) < 1e-2);

    const TestFunction rough{[](double w) { return cdouble(std::abs(w)); }, 8.0, 0, "abs"};
    CHECK_THROWS_AS(delta_derivative_pairing(2, rough), ValidationError);
  }

  TEST_CASE("Poisson tail") {
    CHECK(poisson_tail(0, 3.7).value == cdouble(1.0));
    CHECK(std::abs(poisson_tail(1, 2.0).value - (1.0 - std::exp(-2.0))) < 1e-15);
    CHECK(std::abs(poisson_tail(3, 1.5).value - oracles::poisson_tail_direct(3, 1.5)) < 1e-14);
    double prev = 1.0;
    for (int n = 1; n <= 15; ++n) {
      const double p = poisson_tail(n, 4.0).value.real();
      CHECK(p <= prev);
      CHECK(p >= 0.0);
      prev = p;
    }
    CHECK_THROWS_AS(poisson_tail(-1, 1.0), ValidationError);
  }

  TEST_CASE("waiting-time volumes") {
    CHECK(std::abs(waiting_time_volume(0, 1.3).value - std::exp(-1.3)) < 1e-15);
    CHECK(std::abs(waiting_time_volume(1, 2.0).value - 2.0 * std::exp(-2.0)) < 1e-12);
    const auto r = waiting_time_volume(3, 1.0, 100000, 12);
    CHECK(std::abs(r.value - std::exp(-1.0) / 6.0) <= 3.0 * r.abs_error_estimate);
    CHECK(r.method == Method::monte_carlo);
  }

  TEST_CASE("Poisson averages") {
    const auto zero = poisson_average([](double) { return cdouble(0.0); }, TimeGrid::uniform(0.0, 1.0, 2));
    CHECK(zero.value.value == cdouble(1.0));
    const auto cst = poisson_average([](double) { return cdouble(1.7); }, TimeGrid::uniform(0.0, 2.0, 4));
    CHECK(std::abs(cst.value.value - std::exp(cdouble(0.0, 3.4))) < 1e-12);
    const auto lin = poisson_average([](double t) { return cdouble(t); }, TimeGrid::uniform(0.0, 1.0, 1));
    CHECK(std::abs(lin.value.value - std::exp(cdouble(0.0, 0.5))) < 1e-12);
    CHECK(std::abs(lin.fd_derivative - lin.expected_derivative) < 1e-6);
  }

  TEST_CASE("Dyson series of the zero Hamiltonian") {
    const auto r = dyson_evolution(OperatorHamiltonian::constant(Eigen::MatrixXcd::Zero(3, 3)), 5,
                                   TimeGrid::uniform(0.0, 1.0, 1));
    CHECK((r.value - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
  }

  TEST_CASE("Dyson series of a constant Hamiltonian") {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2, 2);
    H(0, 0) = 1.0;
    H(1, 1) = -1.0;
    const auto r = dyson_evolution(OperatorHamiltonian::constant(H), 20, TimeGrid::uniform(0.0, 1.0, 1));
    CHECK(std::abs(r.value(0, 0) - std::exp(cdouble(0.0, 1.0))) < 1e-12);
    CHECK(std::abs(r.value(1, 1) - std::exp(cdouble(0.0, -1.0))) < 1e-12);
    CHECK(std::abs(r.value(0, 1)) < 1e-15);
  }

  TEST_CASE("Dyson series against the ODE oracle") {
    const auto H = OperatorHamiltonian::sz_plus_t_sx();
    const auto r = dyson_evolution(H, 12, TimeGrid::uniform(0.0, 1.0, 1));
    CHECK((r.value - oracles::evolution_ode(H.H, 2, 0.0, 1.0)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(r.unitarity_drift <= r.truncation_bound);
    // refining the grid must not change the answer beyond quadrature error
    const auto fine = dyson_evolution(H, 12, TimeGrid::uniform(0.0, 1.0, 4));
    CHECK((fine.value - r.value).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("ordered simplex equals the symmetrized cube over n!") {
    // second-order term: int_{t1<t2} H(t2) H(t1) + int_{t2<t1} H(t1) H(t2) = T[(int H)^2]
    // For commuting values (a scalar H) the ordered part is (int h)^2 / 2.
    const OperatorHamiltonian h{1, [](double t) { return Eigen::MatrixXcd::Constant(1, 1, cdouble(std::cos(t))); }};
    const auto r1 = dyson_evolution(h, 1, TimeGrid::uniform(0.0, 1.0, 1));
    const auto r2 = dyson_evolution(h, 2, TimeGrid::uniform(0.0, 1.0, 1));
    const double I = std::sin(1.0);
    const cdouble second = r2.value(0, 0) - r1.value(0, 0);
    CHECK(std::abs(second - cdouble(-I * I / 2.0)) < 1e-13);
  }

  TEST_CASE("unitarity drift obeys the remainder bound at every order") {
    // ||U_N^dagger U_N - Id|| <= 2 r + r^2 with r = e^x x^{N+1}/(N+1)!, the tail of the
    // exponential series; the raw x^{N+1}/(N+1)! alone is not an upper bound.
    Eigen::MatrixXcd Hc = Eigen::MatrixXcd::Zero(2, 2);
    Hc(0, 0) = 1.0;
    Hc(1, 1) = -1.0;
    for (const auto& H : {OperatorHamiltonian::constant(Hc), OperatorHamiltonian::sz_plus_t_sx()})
      for (int N = 1; N <= 24; ++N) {
        const auto r = dyson_evolution(H, N, TimeGrid::uniform(0.0, 1.0, 1));
        const double x = std::pow(r.truncation_bound * std::tgamma(N + 2.0), 1.0 / (N + 1));
        const double rem = std::exp(x) * r.truncation_bound;
        CHECK(r.unitarity_drift <= 2.0 * rem + rem * rem + 1e-14);
      }
  }

  TEST_CASE("truncation bound above tolerance is reported") {
    const auto H = OperatorHamiltonian::sz_plus_t_sx();
    CHECK_THROWS_WITH_AS(dyson_evolution(H, 2, TimeGrid::uniform(0.0, 1.0, 1), 1e-6), doctest::Contains("bound"),
                         NumericalError);
  }
}
