#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fint/core.hpp"

using namespace fint;

namespace {

Eigen::VectorXcd scalar(cdouble v) { return Eigen::VectorXcd::Constant(1, v); }

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("time grid stores t_b but not t_a") {
    const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 4);
    CHECK(g.size() == 4);
    CHECK(g[0] == 0.25);
    CHECK(g[3] == 1.0);
    CHECK(g.width(0) == doctest::Approx(0.25));
    CHECK(g.is_uniform());
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, {0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, {0.5, 0.9}), ValidationError);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, {0.6, 0.5, 1.0}), ValidationError);
  }

  TEST_CASE("zero path projects to the zero vector") {
    const Path p = Path::constant(0.0, 1.0, Eigen::VectorXcd::Zero(2));
    const Projection proj{TimeGrid::uniform(0.0, 1.0, 3), 2};
    CHECK(project(p, proj) == Eigen::VectorXcd::Zero(6));
  }

  TEST_CASE("identity path evaluates at the grid points") {
    const Path p(0.0, scalar(0.0), {1.0}, {scalar(1.0)});
    const Projection proj{TimeGrid(0.0, 1.0, {0.5, 1.0}), 1};
    const Eigen::VectorXcd x = project(p, proj);
    CHECK(x(0) == cdouble(0.5));
    CHECK(x(1) == cdouble(1.0));
  }

  TEST_CASE("e^{it} stored at its knots evaluates exactly there") {
    const double pi = std::numbers::pi;
    const cdouble i1 = std::exp(cdouble(0.0, pi / 2)), m1 = std::exp(cdouble(0.0, pi));
    const Path p(0.0, scalar(1.0), {pi / 2, pi}, {scalar(i1), scalar(m1)});
    const Eigen::VectorXcd x = project(p, Projection{TimeGrid(0.0, pi, {pi / 2, pi}), 1});
    // the oracle is direct evaluation of e^{it}
    CHECK(std::abs(x(0) - cdouble(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(x(1) - cdouble(-1.0, 0.0)) < 1e-15);
  }

  TEST_CASE("grid point outside the path domain is rejected") {
    const Path p(0.0, scalar(0.0), {0.5}, {scalar(1.0)});
    CHECK_THROWS_AS(project(p, Projection{TimeGrid::uniform(0.0, 1.0, 2), 1}), ValidationError);
  }

  TEST_CASE("piecewise rules interpolate between knots") {
    const Path lin(0.0, scalar(0.0), {1.0, 2.0}, {scalar(2.0), scalar(4.0)});
    CHECK(lin(0.5) == scalar(1.0));
    CHECK(lin(1.5) == scalar(3.0));
    const Path con(0.0, scalar(0.0), {1.0, 2.0}, {scalar(2.0), scalar(4.0)}, Interpolation::piecewise_constant);
    CHECK(con(1.0) == scalar(2.0));
    CHECK(con(2.0) == scalar(4.0));
  }

  TEST_CASE("coarsen selects the subset coordinates") {
    const Projection fine{TimeGrid(0.0, 3.0, {1.0, 2.0, 3.0}), 1};
    const Projection coarse{TimeGrid(0.0, 3.0, {2.0, 3.0}), 1};
    const Selection P = coarsen(fine, coarse);
    CHECK(P.indices() == std::vector<int>{1, 2});
    CHECK(coarsen(fine, fine).indices() == std::vector<int>{0, 1, 2});

    const Projection bad{TimeGrid(0.0, 3.0, {1.5, 3.0}), 1};
    CHECK_THROWS_AS(coarsen(fine, bad), ValidationError);
  }

  TEST_CASE("selection matrix agrees with the index form") {
    const Projection fine{TimeGrid(0.0, 1.0, {0.25, 0.5, 0.75, 1.0}), 2};
    const Projection coarse{TimeGrid(0.0, 1.0, {0.5, 1.0}), 2};
    const Selection P = coarsen(fine, coarse);
    Eigen::VectorXcd x(8);
    for (int i = 0; i < 8; ++i) x(i) = cdouble(i, -i);
    const Eigen::VectorXcd viaMatrix = P.matrix().cast<cdouble>() * x;
    CHECK(viaMatrix == P(x));
  }

  TEST_CASE("random piecewise-linear path: coarsen o project equals project") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> times = {0.1, 0.3, 0.5, 0.65, 0.8, 1.0};
    std::vector<Eigen::VectorXcd> values;
    for (std::size_t i = 0; i < times.size(); ++i) values.push_back(scalar(cdouble(u(rng), u(rng))));
    const Path p(0.0, scalar(0.0), times, values);
    const Projection fine{TimeGrid(0.0, 1.0, {0.25, 0.5, 0.75, 1.0}), 1};
    const Projection coarse{TimeGrid(0.0, 1.0, {0.5, 1.0}), 1};
    // bit-identical: selection copies the fine coordinates
    CHECK(coarsen(fine, coarse)(project(p, fine)) == project(p, coarse));
  }

  TEST_CASE("coarsenings compose along nested grids") {
    const Projection a{TimeGrid(0.0, 1.0, {0.125, 0.25, 0.5, 0.625, 1.0}), 3};
    const Projection b{TimeGrid(0.0, 1.0, {0.25, 0.5, 1.0}), 3};
    const Projection c{TimeGrid(0.0, 1.0, {0.5, 1.0}), 3};
    CHECK(coarsen(a, c) == coarsen(b, c).after(coarsen(a, b)));
  }
}
