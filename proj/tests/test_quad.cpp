#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fint/quad.hpp"

using namespace fint;
using namespace fint::quad;

TEST_SUITE("quad") {
  TEST_CASE("unit gaussian weight integrates to one") {
    const auto r = integrate_quad([](const Eigen::VectorXd&) { return cdouble(1.0); }, Domain::full_space(1), 16);
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    CHECK(r.method == Method::quadrature);
  }

  TEST_CASE("x^2 against e^{-x} gives Gamma(3)") {
    const auto r =
        integrate_quad([](const Eigen::VectorXd& x) { return cdouble(x(0) * x(0)); }, Domain::positive_orthant(1), 8);
    CHECK(std::abs(r.value - std::tgamma(3.0)) < 1e-12);
  }

  TEST_CASE("unit box volume") {
    const auto r = integrate_quad([](const Eigen::VectorXd&) { return cdouble(1.0); },
                                  Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)), 4);
    CHECK(std::abs(r.value - 1.0) < 1e-14);
  }

  TEST_CASE("polynomials are exact once the order exceeds the degree") {
    // int_0^1 x^7 dx = 1/8 with a 4-point rule (exact through degree 7)
    const auto r = integrate_quad([](const Eigen::VectorXd& x) { return cdouble(std::pow(x(0), 7)); },
                                  Domain::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)), 8);
    CHECK(std::abs(r.value - 0.125) <= 1e-12 * 0.125);
  }

  TEST_CASE("non-finite integrand names the node") {
    auto f = [](const Eigen::VectorXd& x) { return cdouble(x(0) > 0.0 ? INFINITY : 0.0); };
    CHECK_THROWS_WITH_AS(integrate_quad(f, Domain::full_space(1), 4), doctest::Contains("node"), NumericalError);
  }

  TEST_CASE("tensor budget guard") {
    auto one = [](const Eigen::VectorXd&) { return cdouble(1.0); };
    CHECK_THROWS_AS(integrate_quad(one, Domain::full_space(7), 2), ValidationError);
  }

  TEST_CASE("Monte Carlo: constant under a proper proposal") {
    McConfig cfg{20000, 3, GaussianProposal{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)}};
    const auto g = integrate_mc([](const Eigen::VectorXd&) { return cdouble(1.0); }, Domain::full_space(1), cfg);
    CHECK(std::abs(g.value - 1.0) <= 3.0 * g.abs_error_estimate);
    CHECK(g.method == Method::monte_carlo);
  }

  TEST_CASE("Monte Carlo: odd function under a symmetric proposal") {
    McConfig cfg{20000, 5, GaussianProposal{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)}};
    const auto r = integrate_mc([](const Eigen::VectorXd& x) { return cdouble(x(0)); }, Domain::full_space(1), cfg);
    CHECK(std::abs(r.value) <= 3.0 * r.abs_error_estimate);
  }

  TEST_CASE("Monte Carlo: e^{-x^2/2} under a uniform proposal") {
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -5.0), hi = Eigen::VectorXd::Constant(1, 5.0);
    McConfig cfg{100000, 11, UniformProposal{lo, hi}};
    const auto r = integrate_mc([](const Eigen::VectorXd& x) { return cdouble(std::exp(-0.5 * x(0) * x(0))); },
                                Domain::box(lo, hi), cfg);
    const double exact = std::sqrt(2.0 * std::numbers::pi) * std::erf(5.0 / std::sqrt(2.0));
    CHECK(std::abs(r.value - exact) <= 3.0 * r.abs_error_estimate);
    CHECK(r.seed == std::optional<std::uint64_t>(11));
  }

  TEST_CASE("Monte Carlo is deterministic given the seed") {
    McConfig cfg{5000, 99, UniformProposal{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)}};
    auto f = [](const Eigen::VectorXd& x) { return cdouble(std::sin(x(0) * x(1))); };
    const auto dom = Domain::box(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
    const auto a = integrate_mc(f, dom, cfg), b = integrate_mc(f, dom, cfg);
    CHECK(a.value == b.value);
    CHECK(a.abs_error_estimate == b.abs_error_estimate);
  }

  TEST_CASE("too few samples") {
    McConfig cfg{1, 0, UniformProposal{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)}};
    CHECK_THROWS_AS(integrate_mc([](const Eigen::VectorXd&) { return cdouble(1.0); },
                                 Domain::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)), cfg),
                    ValidationError);
  }

  TEST_CASE("Gauss-Laguerre with a = 1.5 integrates x^{1.5} e^{-x}") {
    const GaussRule r = gauss_laguerre(20, 1.5);
    CHECK(std::abs(r.weights.sum() - std::tgamma(2.5)) < 1e-12);
  }

  TEST_CASE("pairwise summation is independent of how the span was produced") {
    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
    const std::vector<double> copy = v;
    CHECK(pairwise_sum(std::span<const double>(v)) == pairwise_sum(std::span<const double>(copy)));
  }
}
