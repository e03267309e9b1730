// fint: command-line front end. Every subcommand writes one JSON document to
// stdout; exit status is 0 on success, 1 on numerical failure, 2 on bad input.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "fint/acceptance.hpp"
#include "fint/gamma_poisson.hpp"
#include "fint/gaussian.hpp"
#include "fint/group_algebra.hpp"
#include "fint/json_io.hpp"
#include "fint/symplectic.hpp"

using namespace fint;
using io::json;

namespace {

struct Output {
  json doc;
  int status = 0;              // 1 when a verification reports a failure
  std::uint64_t seed = 0;
  std::string subcommand;
  std::string csv;
};

json with_value(json j) {
  if (j.contains("value_im") && j["value_im"].get<double>() == 0.0) j["value"] = j["value_re"];
  return j;
}

json scalar_json(cdouble v, double err, const char* method) {
  return with_value({{"value_re", v.real()}, {"value_im", v.imag()}, {"error", err}, {"method", method}});
}

Eigen::VectorXcd complex_vector(const std::vector<double>& re, const std::vector<double>& im, int dim,
                                const char* what) {
  require(re.empty() || static_cast<int>(re.size()) == dim, std::string(what) + ": expected " +
                                                                 std::to_string(dim) + " real parts");
  require(im.empty() || static_cast<int>(im.size()) == dim, std::string(what) + ": expected " +
                                                                 std::to_string(dim) + " imaginary parts");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int i = 0; i < dim; ++i)
    v(i) = cdouble(re.empty() ? 0.0 : re[static_cast<std::size_t>(i)], im.empty() ? 0.0 : im[static_cast<std::size_t>(i)]);
  return v;
}

json report_json(const group::PropositionReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return {{"checks", checks}, {"pass", rep.all_pass()}};
}

struct ExitRequest {
  int code;
};

Output run(const std::vector<std::string>& args) {
  CLI::App app{"fint: projective integrator families"};
  app.require_subcommand(1);
  Output out;

  // propagator
  auto* prop = app.add_subcommand("propagator", "time-sliced free or harmonic propagator");
  std::string kind = "free";
  double mass = 1.0, omega = 0.0, T = 1.0, xa = 0.0, xb = 0.0, s_re = 1.0, s_im = 0.0;
  int slices = 16;
  bool continuation = false;
  prop->add_option("--kind", kind)->check(CLI::IsMember({"free", "harmonic"}));
  prop->add_option("--mass", mass);
  prop->add_option("--omega", omega);
  prop->add_option("--slices", slices);
  prop->add_option("--t", T);
  prop->add_option("--xa", xa);
  prop->add_option("--xb", xb);
  prop->add_option("--scale-re", s_re);
  prop->add_option("--scale-im", s_im);
  prop->add_flag("--continuation", continuation, "allow pure-imaginary scale (boundary value from Re(s) > 0)");
  prop->callback([&] {
    const auto k = kind == "free" ? gaussian::PropagatorKind::free(mass) : gaussian::PropagatorKind::harmonic(mass, omega);
    const cdouble s(s_re, s_im);
    out.doc = with_value(io::result_json(gaussian::propagator(k, s, TimeGrid::uniform(0.0, T, slices), xa, xb, continuation)));
    if (s.real() > 0.0) {
      const cdouble c = gaussian::propagator_closed_form(k, s, T, xa, xb);
      out.doc["closed_form_re"] = c.real();
      out.doc["closed_form_im"] = c.imag();
    }
  });

  // gaussian
  auto* gauss = app.add_subcommand("gaussian", "Gaussian integrator family");
  gauss->require_subcommand(1);
  int dim = 1, order = 0;
  std::vector<double> zp_re, zp_im, mean_re, mean_im;
  std::string matrix_file;
  double boundary = 0.0;
  bool complex_coords = false;
  auto gaussian_spec = [&] {
    gaussian::GaussianSpec spec;
    const Eigen::MatrixXcd D = matrix_file.empty() ? Eigen::MatrixXcd::Identity(dim, dim)
                                                   : io::parse_matrix(io::load_file(matrix_file).at("matrix"));
    dim = static_cast<int>(D.rows());
    spec.form = gaussian::QuadraticFormSpec::custom(D);
    spec.scale = cdouble(s_re, s_im);
    spec.boundary_value = boundary;
    spec.coordinates = complex_coords ? gaussian::Coordinates::complex : gaussian::Coordinates::real;
    spec.mean = complex_vector(mean_re, mean_im, dim, "--mean");
    return spec;
  };
  auto add_form_options = [&](CLI::App* sub) {
    sub->add_option("--dim", dim, "dimension (identity form)");
    sub->add_option("--matrix", matrix_file, "JSON file {\"matrix\": [[...]]} with a Hermitian form");
    sub->add_option("--scale-re", s_re);
    sub->add_option("--scale-im", s_im);
    sub->add_option("--mean", mean_re)->delimiter(',');
    sub->add_option("--mean-im", mean_im)->delimiter(',');
    sub->add_option("--boundary", boundary, "boundary value B");
    sub->add_flag("--complex", complex_coords, "complex coordinates (realified)");
  };
  auto* gchar = gauss->add_subcommand("char", "quadrature of Theta next to the closed-form Z");
  add_form_options(gchar);
  gchar->add_option("--zprime", zp_re)->delimiter(',');
  gchar->add_option("--zprime-im", zp_im)->delimiter(',');
  gchar->add_option("--order", order, "tensor order per dimension (0 = automatic)");
  gchar->callback([&] {
    const auto spec = gaussian_spec();
    const auto pair = gaussian::char_pair(spec, complex_vector(zp_re, zp_im, dim, "--zprime"), order);
    out.doc = with_value(io::result_json(pair.theta));
    out.doc["closed_form_re"] = pair.z_closed.real();
    out.doc["closed_form_im"] = pair.z_closed.imag();
  });
  auto* gnorm = gauss->add_subcommand("norm", "Det(sW)^{1/2} e^{(pi/s) B}");
  add_form_options(gnorm);
  gnorm->callback([&] { out.doc = scalar_json(gaussian::normalization(gaussian_spec()), 0.0, "closed_form"); });
  auto* gdet = gauss->add_subcommand("det", "harmonic/free determinant ratio on a Dirichlet grid");
  gdet->add_option("--omega", omega)->required();
  gdet->add_option("--t", T);
  gdet->add_option("--slices", slices);
  gdet->callback([&] {
    const TimeGrid grid = TimeGrid::uniform(0.0, T, slices);
    const auto b = gaussian::Boundary::dirichlet;
    const double ratio = gaussian::det_ratio(gaussian::build_operator(gaussian::Continuum::harmonic(omega), grid, b),
                                             gaussian::build_operator(gaussian::Continuum::free(), grid, b));
    out.doc = scalar_json(ratio, 0.0, "closed_form");
    out.doc["gelfand_yaglom"] = gaussian::det_gelfand_yaglom(omega, T);
  });

  // symplectic
  auto* symp = app.add_subcommand("symplectic", "symplectic integrator family");
  symp->require_subcommand(1);
  auto* schar = symp->add_subcommand("char", "Theta integral with the Pf(sM)^{-2} factor next to Z");
  add_form_options(schar);
  schar->add_option("--etaprime", zp_re)->delimiter(',');
  schar->add_option("--etaprime-im", zp_im)->delimiter(',');
  schar->add_option("--order", order);
  schar->callback([&] {
    const auto g = gaussian_spec();
    auto spec = symplectic::SkewFormSpec::from_hermitian(Eigen::MatrixXcd(g.form.D), g.scale);
    spec.mean = g.mean;
    spec.boundary_value = g.boundary_value;
    spec.coordinates = g.coordinates;
    const auto pair = symplectic::symplectic_char_pair(spec, complex_vector(zp_re, zp_im, dim, "--etaprime"), order);
    out.doc = with_value(io::result_json(pair.theta));
    out.doc["closed_form_re"] = pair.z_closed.real();
    out.doc["closed_form_im"] = pair.z_closed.imag();
    out.doc["measure_factor"] = io::complex_json(pair.measure_factor);
  });

  // pfaffian
  auto* pf = app.add_subcommand("pfaffian", "Pfaffian of an antisymmetric matrix");
  pf->add_option("--matrix", matrix_file, "JSON file {\"matrix\": [[...]]}")->required();
  pf->callback([&] {
    const json j = io::load_file(matrix_file);
    const Eigen::MatrixXcd M = io::parse_matrix(j.contains("matrix") ? j.at("matrix") : j);
    out.doc = scalar_json(symplectic::pfaffian(M), 0.0, "closed_form");
  });

  // gamma
  auto* gam = app.add_subcommand("gamma", "gamma integrator family");
  gam->require_subcommand(1);
  double alpha_re = 1.0, alpha_im = 0.0, c = 1.0;
  std::vector<double> beta_re, beta_im;
  auto* gnormal = gam->add_subcommand("norm", "(1/Gamma(alpha)) prod_i int tau^alpha e^{-beta_i tau} dtau/tau");
  gnormal->add_option("--alpha", alpha_re);
  gnormal->add_option("--alpha-im", alpha_im);
  gnormal->add_option("--beta", beta_re)->delimiter(',')->required();
  gnormal->add_option("--beta-im", beta_im)->delimiter(',');
  gnormal->add_option("--order", order);
  gnormal->callback([&] {
    gamma_poisson::GammaSpec spec;
    spec.alpha = cdouble(alpha_re, alpha_im);
    spec.beta = complex_vector(beta_re, beta_im, static_cast<int>(beta_re.size()), "--beta");
    out.doc = with_value(io::result_json(gamma_poisson::gamma_normalization(spec, order > 0 ? order : 64)));
  });
  auto* glower = gam->add_subcommand("lower", "lower incomplete gamma by its series");
  auto* gupper = gam->add_subcommand("upper", "upper incomplete gamma");
  for (auto* sub : {glower, gupper}) {
    sub->add_option("--alpha", alpha_re);
    sub->add_option("--alpha-im", alpha_im);
    sub->add_option("--c", c)->required();
  }
  glower->callback([&] { out.doc = with_value(io::result_json(gamma_poisson::lower_incomplete({alpha_re, alpha_im}, c))); });
  gupper->callback([&] { out.doc = with_value(io::result_json(gamma_poisson::upper_incomplete({alpha_re, alpha_im}, c))); });

  // poisson
  auto* poi = app.add_subcommand("poisson", "Poisson integrator shadows");
  poi->require_subcommand(1);
  int n = 0, k = 1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  auto* ptail = poi->add_subcommand("tail", "P(n, c) = gamma(n, c) / Gamma(n)");
  ptail->add_option("--n", n)->required();
  ptail->add_option("--c", c)->required();
  ptail->callback([&] { out.doc = with_value(io::result_json(gamma_poisson::poisson_tail(n, c))); });
  auto* pwait = poi->add_subcommand("waiting", "Monte Carlo volume of ordered waiting times");
  pwait->add_option("--k", k)->required();
  pwait->add_option("--c", c)->required();
  pwait->add_option("--samples", samples);
  pwait->add_option("--seed", seed);
  pwait->callback([&] {
    out.seed = seed;
    out.doc = with_value(io::result_json(gamma_poisson::waiting_time_volume(k, c, samples, seed)));
    out.doc["exact"] = std::exp(-c + k * std::log(c) - std::lgamma(k + 1.0));
  });
  auto* pavg = poi->add_subcommand("average", "sum_n (i I)^n / n! with I the integral of beta'");
  std::string beta_kind = "t";
  double t0 = 0.0, t1 = 1.0;
  pavg->add_option("--beta", beta_kind)->check(CLI::IsMember({"constant", "t", "cos3t"}));
  pavg->add_option("--t0", t0);
  pavg->add_option("--t1", t1);
  pavg->add_option("--slices", slices);
  pavg->callback([&] {
    std::function<cdouble(double)> beta;
    if (beta_kind == "constant") beta = [](double) { return cdouble(0.8); };
    else if (beta_kind == "t") beta = [](double t) { return cdouble(t); };
    else beta = [](double t) { return cdouble(std::cos(3.0 * t) + 0.5 * t * t); };
    const auto pa = gamma_poisson::poisson_average(beta, TimeGrid::uniform(t0, t1, slices));
    out.doc = with_value(io::result_json(pa.value));
    out.doc["reference"] = io::complex_json(pa.reference);
    out.doc["fd_derivative"] = io::complex_json(pa.fd_derivative);
    out.doc["expected_derivative"] = io::complex_json(pa.expected_derivative);
  });

  // dyson
  auto* dy = app.add_subcommand("dyson", "truncated Dyson series for U' = i H U");
  std::string ham_file;
  double tolerance = std::numeric_limits<double>::infinity();
  int dy_slices = 1;
  dy->add_option("--hamiltonian", ham_file, "JSON {\"matrix\": ...} or {\"kind\": \"sz_plus_t_sx\"}")->required();
  dy->add_option("--order", order)->required();
  dy->add_option("--t0", t0);
  dy->add_option("--t1", t1);
  dy->add_option("--slices", dy_slices, "grid slices (Chebyshev panels)");
  dy->add_option("--tolerance", tolerance, "fail if the truncation bound exceeds this");
  dy->callback([&] {
    const auto H = io::parse_hamiltonian(io::load_file(ham_file));
    const auto r = gamma_poisson::dyson_evolution(H, order, TimeGrid::uniform(t0, t1, dy_slices), tolerance);
    out.doc = {{"matrix", io::matrix_json(r.value)},
               {"quadrature_error", r.quadrature_error},
               {"truncation_bound", r.truncation_bound},
               {"unitarity_drift", r.unitarity_drift},
               {"order", r.order},
               {"method", "series"}};
  });

  // group
  auto* grp = app.add_subcommand("group", "group-algebra identities");
  grp->require_subcommand(1);
  auto* gverify = grp->add_subcommand("verify", "check identities (a)-(e) and the involution");
  std::string group_name = "z6", fixtures_file;
  gverify->add_option("--group", group_name)->check(CLI::IsMember({"z6", "affine"}));
  gverify->add_option("--fixtures", fixtures_file, "fixture JSON; random Z6 tables from --seed when omitted");
  gverify->add_option("--seed", seed);
  gverify->callback([&] {
    out.seed = seed;
    json reports = json::object();
    bool pass = true;
    if (group_name == "z6") {
      if (fixtures_file.empty()) {
        const auto G = group::FiniteGroup::cyclic(6);
        const auto a = group::verify_propositions(G, group::random_tables(6, 5, seed));
        const auto b = group::verify_propositions(G, group::random_matrix_tables(6, 3, 2, seed + 1));
        reports["scalar"] = report_json(a);
        reports["matrix"] = report_json(b);
        pass = a.all_pass() && b.all_pass();
      } else {
        const auto fx = io::parse_finite_fixtures(io::load_file(fixtures_file));
        if (!fx.scalar.empty()) {
          const auto a = group::verify_propositions(fx.group, fx.scalar);
          reports["scalar"] = report_json(a);
          pass = pass && a.all_pass();
        }
        if (!fx.matrix.empty()) {
          const auto b = group::verify_propositions(fx.group, fx.matrix);
          reports["matrix"] = report_json(b);
          pass = pass && b.all_pass();
        }
      }
    } else {
      require(!fixtures_file.empty(), "group verify: the affine group needs --fixtures");
      const auto fx = io::parse_affine_fixtures(io::load_file(fixtures_file));
      const auto G = group::ContinuousGroup::affine();
      const auto a = group::verify_propositions(G, fx.functions, fx.probes);
      double haar = 0.0;
      for (const auto& g : fx.probes) haar = std::max(haar, group::haar_invariance_residual(fx.functions[0], g, G));
      reports["affine"] = report_json(a);
      reports["haar_invariance"] = haar;
      pass = a.all_pass() && haar <= 1e-6;
    }
    out.doc = {{"group", group_name}, {"reports", reports}, {"pass", pass}};
    if (!pass) out.status = 1;
  });

  // delta
  auto* del = app.add_subcommand("delta", "truncated delta-functional pairing");
  std::string fixture = "gaussian";
  double cutoff = 1e3;
  int m = 1;
  del->add_option("--fixture", fixture)->check(CLI::IsMember({"gaussian", "away"}));
  del->add_option("--cutoff", cutoff);
  del->add_option("--m", m, "m > 1 pairs with the shadow of delta^{(m-1)}");
  del->callback([&] {
    constexpr double pi = std::numbers::pi;
    gamma_poisson::TestFunction f;
    if (fixture == "gaussian") {
      f = {[](double w) { return cdouble(std::exp(-pi * w * w)); }, 8.0, std::numeric_limits<int>::max(), "gaussian"};
    } else {
      f = {[](double w) {
             const double x = w - 3.0;
             return std::abs(x) < 1.0 ? cdouble(std::exp(-1.0 / (1.0 - x * x))) : cdouble(0.0);
           },
           4.5, std::numeric_limits<int>::max(), "bump on [2, 4]"};
    }
    if (m == 1) {
      out.doc = with_value(io::result_json(gamma_poisson::delta_functional(f, cutoff)));
    } else {
      const auto p = gamma_poisson::delta_derivative_pairing(m, f, cutoff);
      out.doc = with_value(io::result_json(p.pairing));
      out.doc["constant"] = io::complex_json(p.constant);
      out.doc["analytic_constant"] = io::complex_json(p.analytic_constant);
      out.doc["reduced"] = io::complex_json(p.reduced);
    }
  });

  // report-all
  auto* rep = app.add_subcommand("report-all", "run the acceptance suite and emit a pass/fail matrix");
  std::vector<int> only;
  rep->add_option("--seed", seed)->required();
  rep->add_option("--only", only, "criterion ids to run (default: all)")->delimiter(',');
  rep->callback([&] {
    out.seed = seed;
    acceptance::Options opt;
    opt.seed = seed;
    std::vector<acceptance::CriterionResult> results;
    if (only.empty()) {
      results = acceptance::run_all(opt);
    } else {
      for (int id : only) results.push_back(acceptance::run_criterion(id, opt));
    }
    json rows = json::array();
    out.csv = "id,name,pass,seconds\n";
    bool pass = true;
    for (const auto& r : results) {
      rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      char line[256];
      std::snprintf(line, sizeof line, "%d,%s,%s,%.3f\n", r.id, r.name.c_str(), r.pass ? "pass" : "fail", r.seconds);
      out.csv += line;
      std::fprintf(stderr, "[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
      pass = pass && r.pass;
    }
    out.doc = {{"seed", seed}, {"criteria", rows}, {"pass", pass}};
    if (!pass) out.status = 1;
  });

  // replay
  auto* rpl = app.add_subcommand("replay", "re-run a manifest and compare output checksums");
  std::string manifest_file;
  rpl->add_option("--manifest", manifest_file)->required();
  rpl->callback([&] {
    const auto man = io::RunManifest::from_json(io::load_file(manifest_file));
    const Output again = run(man.argv);
    const std::string sum = io::checksum(again.doc);
    out.doc = {{"subcommand", man.subcommand},
               {"recorded_checksum", man.output_checksum},
               {"replayed_checksum", sum},
               {"match", sum == man.output_checksum}};
    if (sum != man.output_checksum) out.status = 1;
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    throw ExitRequest{code == 0 ? 0 : 2};
  }
  for (const auto* sub : app.get_subcommands()) out.subcommand = sub->get_name();
  out.doc["schema"] = io::kSchema;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // options shared by every subcommand are peeled off before dispatch
  std::string out_file, manifest_file, csv_file;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto grab = [&](std::string& dst) {
      if (i + 1 >= args.size()) {
        std::fprintf(stderr, "error: %s needs a value\n", a.c_str());
        std::exit(2);
      }
      dst = args[++i];
    };
    if (a == "--out") grab(out_file);
    else if (a == "--write-manifest") grab(manifest_file);
    else if (a == "--csv") grab(csv_file);
    else rest.push_back(a);
  }

  try {
    Output out = run(rest);
    const std::string text = io::dump(out.doc);
    std::cout << text << '\n';
    if (!out_file.empty()) std::ofstream(out_file) << text << '\n';
    if (!csv_file.empty() && !out.csv.empty()) std::ofstream(csv_file) << out.csv;
    if (!manifest_file.empty()) {
      io::RunManifest man;
      man.subcommand = out.subcommand;
      man.argv = rest;
      man.seed = out.seed;
      man.timestamp = io::utc_timestamp();
      man.output_checksum = io::checksum(out.doc);
      std::ofstream(manifest_file) << io::dump(man.to_json()) << '\n';
    }
    return out.status;
  } catch (const ExitRequest& e) {
    return e.code;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 1;
  }
}
