#include <doctest.h>

#include "fint/json_io.hpp"

using namespace fint;
using namespace fint::io;

TEST_SUITE("json_io") {
  TEST_CASE("numbers are written with 17 significant digits") {
    const json j = {{"x", 0.1}};
    CHECK(dump(j, 0) == "{\"x\":0.10000000000000001}");
    CHECK(json::parse(dump(j)).at("x").get<double>() == 0.1);
  }

  TEST_CASE("complex matrix round trip") {
    Eigen::MatrixXcd m(2, 2);
    m << cdouble(1.0 / 3.0, -2.0), 4.0, cdouble(0.0, 1e-300), -7.25;
    const Eigen::MatrixXcd back = parse_matrix(json::parse(dump(matrix_json(m))));
    CHECK(back == m);
    CHECK(parse_matrix(json::parse("[[1, 2], [3, 4]]"))(1, 0) == cdouble(3.0));
    CHECK_THROWS_AS(parse_matrix(json::parse("[[1, 2], [3]]")), ValidationError);
  }

  TEST_CASE("grid and path round trip bit for bit") {
    const TimeGrid g(0.0, 1.0, {0.1, 1.0 / 3.0 + 0.3, 1.0});
    const TimeGrid gb = parse_grid(json::parse(dump(grid_json(g))));
    CHECK(gb.points() == g.points());
    CHECK(gb.t_b() == g.t_b());

    Eigen::VectorXcd base(1), v1(1), v2(1);
    base << cdouble(0.1, 0.2);
    v1 << 1.0 / 7.0;
    v2 << cdouble(-3.0, 1e-17);
    const Path p(0.0, base, {0.3, 0.9}, {v1, v2}, Interpolation::piecewise_constant);
    const Path pb = parse_path(json::parse(dump(path_json(p))));
    CHECK(pb.times() == p.times());
    CHECK(pb.values()[1] == p.values()[1]);
    CHECK(pb.rule() == Interpolation::piecewise_constant);
  }

  TEST_CASE("checksum ignores timings and timestamps") {
    json a = {{"value", 1.5}, {"seconds", 0.1}, {"rows", {{{"seconds", 2.0}, {"x", 1}}}}};
    json b = {{"value", 1.5}, {"seconds", 9.0}, {"rows", {{{"seconds", 3.0}, {"x", 1}}}}, {"timestamp", "t"}};
    CHECK(checksum(a) == checksum(b));
    b["value"] = 1.5000000000000002;
    CHECK(checksum(a) != checksum(b));
  }

  TEST_CASE("manifest round trip") {
    RunManifest m;
    m.subcommand = "poisson";
    m.argv = {"poisson", "tail", "--n", "3"};
    m.seed = 7;
    m.timestamp = utc_timestamp();
    m.output_checksum = "0123456789abcdef";
    const RunManifest back = RunManifest::from_json(json::parse(dump(m.to_json())));
    CHECK(back.argv == m.argv);
    CHECK(back.seed == 7);
    CHECK(back.output_checksum == m.output_checksum);
    json bad = m.to_json();
    bad["schema"] = "other/9";
    CHECK_THROWS_AS(RunManifest::from_json(bad), ValidationError);
  }

  TEST_CASE("finite fixtures") {
    const json j = json::parse(R"({"order": 2, "product_table": [[0, 1], [1, 0]],
      "functions": [{"label": "a", "values": [1, [0, 2]]},
                    {"label": "m", "values": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}]})");
    const auto fx = parse_finite_fixtures(j);
    CHECK(fx.group.order() == 2);
    REQUIRE(fx.scalar.size() == 1);
    CHECK(fx.scalar[0].values[1] == cdouble(0.0, 2.0));
    REQUIRE(fx.matrix.size() == 1);
    CHECK(fx.matrix[0].values[1](0, 1) == cdouble(1.0));
    CHECK_THROWS_AS(parse_finite_fixtures(json::parse(R"({"order": 3, "product_table": [[0]], "functions": []})")),
                    ValidationError);
  }

  TEST_CASE("hamiltonians") {
    const auto h = parse_hamiltonian(json::parse(R"({"kind": "sz_plus_t_sx"})"));
    CHECK(h.H(2.0)(0, 1) == cdouble(2.0));
    CHECK(parse_hamiltonian(json::parse(R"({"matrix": [[1, 0], [0, -1]]})")).H(0.5)(1, 1) == cdouble(-1.0));
    CHECK_THROWS_AS(parse_hamiltonian(json::parse(R"({"kind": "other"})")), ValidationError);
  }
}
