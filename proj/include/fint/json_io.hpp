#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "fint/core.hpp"
#include "fint/gamma_poisson.hpp"
#include "fint/group_algebra.hpp"

namespace fint::io {

using nlohmann::json;

inline constexpr const char* kSchema = "fint/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Serializes with every floating-point number printed as %.17g.
std::string dump(const json& j, int indent = 2);

json complex_json(cdouble z);
cdouble parse_complex(const json& j);

/// Row-major nested arrays of [re, im] pairs.
json matrix_json(const Eigen::MatrixXcd& m);
/// Accepts real entries or [re, im] pairs.
Eigen::MatrixXcd parse_matrix(const json& j);

/// {value_re, value_im, error, method, samples_or_order[, seed]}
json result_json(const IntegralResult& r);

json load_file(const std::string& path);

/// {"matrix": [[...]]} for a constant Hamiltonian, or {"kind": "sz_plus_t_sx"}.
gamma_poisson::OperatorHamiltonian parse_hamiltonian(const json& j);

/// Times are written as decimal strings so that fixtures survive reformatting.
json grid_json(const TimeGrid& g);
TimeGrid parse_grid(const json& j);
json path_json(const Path& p);
Path parse_path(const json& j);

struct FiniteFixtures {
  group::FiniteGroup group;
  std::vector<group::FiniteFunction<cdouble>> scalar;
  std::vector<group::FiniteFunction<Eigen::MatrixXcd>> matrix;
};

/// {order, product_table, functions: [{label, values}]}; a value is [re, im]
/// or a square matrix of such pairs.
FiniteFixtures parse_finite_fixtures(const json& j);

struct AffineFixtures {
  std::vector<group::ContinuousFunction<cdouble>> functions;
  std::vector<group::Point> probes;
};

/// {functions: [{label, center, width, weight, wave}], probes: [[u, b], ...]}
AffineFixtures parse_affine_fixtures(const json& j);

/// 64-bit FNV-1a of dump(j) after removing every "seconds" and "timestamp" key.
std::string checksum(const json& j);

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // full argument list after the program name
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;
  std::string output_checksum;

  json to_json() const;
  static RunManifest from_json(const json& j);
};

std::string utc_timestamp();

}  // namespace fint::io
