#include "fint/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace fint::io {

namespace {

void emit(const json& j, std::ostringstream& out, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out << "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf;
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        break;
      }
      // Short numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        out << (first ? "" : ",") << (flat ? (first ? "" : " ") : pad);
        emit(e, out, indent, depth + 1);
        first = false;
      }
      out << (flat ? "" : close) << ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        break;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out << (first ? "" : ",") << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        emit(it.value(), out, indent, depth + 1);
        first = false;
      }
      out << close << '}';
      break;
    }
    default:
      out << j.dump();
  }
}

void strip_volatile(json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    j.erase("timestamp");
    for (auto& [k, v] : j.items()) strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_volatile(v);
  }
}

Eigen::VectorXd vector_of(const json& j, const char* what) {
  require(j.is_array(), std::string("fixture: ") + what + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

double parse_time(const json& j) {
  if (j.is_number()) return j.get<double>();
  require(j.is_string(), "time value must be a decimal string or a number");
  const std::string s = j.get<std::string>();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && used > 0, "time value is not a decimal number: " + s);
  return v;
}

std::string time_string(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::ostringstream out;
  emit(j, out, indent, 0);
  return out.str();
}

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex value must be a number or an [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd parse_matrix(const json& j) {
  require(j.is_array() && !j.empty() && j[0].is_array(), "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, "matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json result_json(const IntegralResult& r) {
  json j;
  j["value_re"] = r.value.real();
  j["value_im"] = r.value.imag();
  j["error"] = r.abs_error_estimate;
  j["method"] = to_string(r.method);
  j["samples_or_order"] = r.samples_or_order;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

gamma_poisson::OperatorHamiltonian parse_hamiltonian(const json& j) {
  using gamma_poisson::OperatorHamiltonian;
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    require(kind == "sz_plus_t_sx", "hamiltonian: unknown kind '" + kind + "'");
    return OperatorHamiltonian::sz_plus_t_sx();
  }
  require(j.contains("matrix"), "hamiltonian: need either \"kind\" or \"matrix\"");
  return OperatorHamiltonian::constant(parse_matrix(j.at("matrix")));
}

json grid_json(const TimeGrid& g) {
  json pts = json::array();
  for (double t : g.points()) pts.push_back(time_string(t));
  return {{"t_a", time_string(g.t_a())}, {"t_b", time_string(g.t_b())}, {"points", pts}};
}

TimeGrid parse_grid(const json& j) {
  std::vector<double> pts;
  for (const auto& p : j.at("points")) pts.push_back(parse_time(p));
  return TimeGrid(parse_time(j.at("t_a")), parse_time(j.at("t_b")), std::move(pts));
}

json path_json(const Path& p) {
  auto vec = [](const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
    return a;
  };
  json times = json::array(), values = json::array();
  for (double t : p.times()) times.push_back(time_string(t));
  for (const auto& v : p.values()) values.push_back(vec(v));
  return {{"t_a", time_string(p.t_a())},
          {"basepoint", vec(p.basepoint())},
          {"times", times},
          {"values", values},
          {"rule", p.rule() == Interpolation::piecewise_linear ? "piecewise_linear" : "piecewise_constant"}};
}

Path parse_path(const json& j) {
  auto vec = [](const json& a) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(a[i]);
    return v;
  };
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> values;
  for (const auto& t : j.at("times")) times.push_back(parse_time(t));
  for (const auto& v : j.at("values")) values.push_back(vec(v));
  const std::string rule = j.value("rule", "piecewise_linear");
  require(rule == "piecewise_linear" || rule == "piecewise_constant", "path: unknown rule '" + rule + "'");
  return Path(parse_time(j.at("t_a")), vec(j.at("basepoint")), std::move(times), std::move(values),
              rule == "piecewise_linear" ? Interpolation::piecewise_linear : Interpolation::piecewise_constant);
}

FiniteFixtures parse_finite_fixtures(const json& j) {
  try {
    const int order = j.at("order").get<int>();
    auto table = j.at("product_table").get<std::vector<std::vector<int>>>();
    require(static_cast<int>(table.size()) == order, "fixtures: product_table size differs from order");
    FiniteFixtures out{group::FiniteGroup(std::move(table)), {}, {}};
    for (const auto& fn : j.at("functions")) {
      const std::string label = fn.value("label", "");
      const json& values = fn.at("values");
      require(static_cast<int>(values.size()) == order, "fixtures: function '" + label + "' has wrong length");
      const bool is_matrix = values[0].is_array() && !values[0].empty() && values[0][0].is_array();
      if (is_matrix) {
        group::FiniteFunction<Eigen::MatrixXcd> F;
        F.label = label;
        for (const auto& v : values) F.values.push_back(parse_matrix(v));
        out.matrix.push_back(std::move(F));
      } else {
        group::FiniteFunction<cdouble> F;
        F.label = label;
        for (const auto& v : values) F.values.push_back(parse_complex(v));
        out.scalar.push_back(std::move(F));
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fixtures: ") + e.what());
  }
}

AffineFixtures parse_affine_fixtures(const json& j) {
  try {
    AffineFixtures out;
    for (const auto& fn : j.at("functions")) {
      const Eigen::VectorXd wave = fn.contains("wave") ? vector_of(fn.at("wave"), "wave") : Eigen::VectorXd();
      out.functions.push_back(group::gaussian_bump(vector_of(fn.at("center"), "center"),
                                                   vector_of(fn.at("width"), "width"),
                                                   parse_complex(fn.value("weight", json(1.0))),
                                                   fn.value("label", ""), wave));
    }
    for (const auto& p : j.at("probes")) out.probes.emplace_back(vector_of(p, "probe"));
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fixtures: ") + e.what());
  }
}

std::string checksum(const json& j) {
  json copy = j;
  strip_volatile(copy);
  const std::string text = dump(copy, 0);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json RunManifest::to_json() const {
  return {{"schema", kSchema},       {"subcommand", subcommand},    {"argv", argv},
          {"seed", seed},            {"tool_version", tool_version}, {"timestamp", timestamp},
          {"output_checksum", output_checksum}};
}

RunManifest RunManifest::from_json(const json& j) {
  try {
    require(j.value("schema", "") == kSchema, "manifest: unsupported schema");
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.seed = j.value("seed", std::uint64_t{0});
    m.tool_version = j.value("tool_version", "");
    m.timestamp = j.value("timestamp", "");
    m.output_checksum = j.at("output_checksum").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fint::io
