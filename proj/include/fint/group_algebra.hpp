#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fint/core.hpp"
#include "fint/quad.hpp"

namespace fint::group {

// Value algebra B: complex scalars or square complex matrices.
inline cdouble adjoint(const cdouble& v) { return std::conj(v); }
inline Eigen::MatrixXcd adjoint(const Eigen::MatrixXcd& v) { return v.adjoint(); }
inline double norm(const cdouble& v) { return std::abs(v); }
double norm(const Eigen::MatrixXcd& v);  // operator 2-norm
inline double max_abs(const cdouble& v) { return std::abs(v); }
inline double max_abs(const Eigen::MatrixXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline cdouble zero_like(const cdouble&) { return 0.0; }
inline Eigen::MatrixXcd zero_like(const Eigen::MatrixXcd& v) { return Eigen::MatrixXcd::Zero(v.rows(), v.cols()); }
inline void check_shape(const cdouble&, const cdouble&) {}
void check_shape(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// ---------------------------------------------------------------- finite

/// Finite group from its Cayley table: table[a][b] = index of a*b.
/// Associativity is checked exhaustively on construction.
class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels = {},
                       double haar_weight = 1.0);
  static FiniteGroup cyclic(int n);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  int identity() const { return identity_; }
  /// Counting measure times this constant.
  double haar_weight() const { return haar_weight_; }
  double modular(int) const { return 1.0; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  int identity_ = 0;
  double haar_weight_;
};

template <typename V>
struct FiniteFunction {
  std::vector<V> values;
  std::string label;
};

template <typename V>
void check_function(const FiniteFunction<V>& F, const FiniteGroup& G) {
  require(static_cast<int>(F.values.size()) == G.order(), "group: function table size differs from group order");
  for (const V& v : F.values) check_shape(v, F.values.front());
}

template <typename V>
V int_lambda(const FiniteFunction<V>& F, const FiniteGroup& G) {
  check_function(F, G);
  V acc = zero_like(F.values.front());
  for (const V& v : F.values) acc += v;
  return G.haar_weight() * acc;
}

template <typename V>
double norm_lambda(const FiniteFunction<V>& F, const FiniteGroup& G) {
  check_function(F, G);
  double acc = 0.0;
  for (const V& v : F.values) acc += norm(v);
  return G.haar_weight() * acc;
}

/// (F1 * F2)(g) = sum_h F1(h) F2(h^{-1} g) weight
template <typename V>
FiniteFunction<V> convolve_star(const FiniteFunction<V>& F1, const FiniteFunction<V>& F2, const FiniteGroup& G) {
  check_function(F1, G);
  check_function(F2, G);
  check_shape(F1.values.front(), F2.values.front());
  FiniteFunction<V> out;
  for (int g = 0; g < G.order(); ++g) {
    V acc = zero_like(F1.values.front());
    for (int h = 0; h < G.order(); ++h)
      acc += F1.values[static_cast<std::size_t>(h)] * F2.values[static_cast<std::size_t>(G.mul(G.inv(h), g))];
    out.values.push_back(G.haar_weight() * acc);
  }
  return out;
}

/// (F1 ⋆ F2)(g) = sum_h F1(h g) F2(h h) weight, taken literally.
template <typename V>
FiniteFunction<V> convolve_star2(const FiniteFunction<V>& F1, const FiniteFunction<V>& F2, const FiniteGroup& G) {
  check_function(F1, G);
  check_function(F2, G);
  check_shape(F1.values.front(), F2.values.front());
  FiniteFunction<V> out;
  for (int g = 0; g < G.order(); ++g) {
    V acc = zero_like(F1.values.front());
    for (int h = 0; h < G.order(); ++h)
      acc += F1.values[static_cast<std::size_t>(G.mul(h, g))] * F2.values[static_cast<std::size_t>(G.mul(h, h))];
    out.values.push_back(G.haar_weight() * acc);
  }
  return out;
}

/// F*(g) = F(g^{-1})^* Delta(g^{-1})
template <typename V>
FiniteFunction<V> involution(const FiniteFunction<V>& F, const FiniteGroup& G) {
  check_function(F, G);
  FiniteFunction<V> out;
  for (int g = 0; g < G.order(); ++g)
    out.values.push_back(adjoint(F.values[static_cast<std::size_t>(G.inv(g))]) * G.modular(G.inv(g)));
  return out;
}

// ------------------------------------------------------------ continuous

/// Chart coordinates; capacity 4 keeps group arithmetic off the heap.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool empty() const { return (hi.array() <= lo.array()).any(); }
  Box intersect(const Box& other) const;
};

/// Integration region in chart coordinates: a bounding box, optionally
/// refined by an exact interval of the last coordinate over each value of
/// the first (used by the affine group, whose translates and inverses of
/// boxes are fibered this way).
struct Region {
  Box bounds;
  std::function<std::pair<double, double>(double)> fiber;

  Region() = default;
  Region(Box b) : bounds(std::move(b)) {}  // NOLINT: boxes are regions
  Region(Box b, std::function<std::pair<double, double>(double)> f) : bounds(std::move(b)), fiber(std::move(f)) {}

  int dim() const { return bounds.dim(); }
  bool empty() const { return bounds.empty(); }
};

/// Lie groups integrated in a global chart.
///   real_line(n): R^n under addition, Lebesgue measure, Delta = 1.
///   affine: x -> a x + b with chart (u, b) = (log a, b); product
///     (u1, b1)(u2, b2) = (u1 + u2, e^{u1} b2 + b1); left Haar a^{-2} da db,
///     which is e^{-u} du db in the chart; Delta(a, b) = 1/a = e^{-u}.
class ContinuousGroup {
 public:
  enum class Kind { real_line, affine };

  static ContinuousGroup real_line(int n = 1);
  static ContinuousGroup affine();

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  Point identity() const { return Point::Zero(dim_); }
  Point product(const Point& g, const Point& h) const;
  Point inverse(const Point& g) const;
  /// Left Haar density in chart coordinates, times the normalization.
  double haar_density(const Point& g) const;
  double modular(const Point& g) const;

  // Images of regions. Every result contains the true image; for boxes and
  // their translates and inverses the fibers are exact.
  Region left_translate(const Point& g, const Region& r) const;
  Region right_translate(const Region& r, const Point& g) const;
  Region inverse(const Region& r) const;
  Region product(const Region& r1, const Region& r2) const;
  Region intersect(const Region& r1, const Region& r2) const;

  /// Tensor Gauss-Legendre resolution per chart axis.
  int panels = 3;
  int order = 16;
  double normalization = 1.0;

 private:
  Kind kind_ = Kind::real_line;
  int dim_ = 1;
};

template <typename V>
struct ContinuousFunction {
  std::function<V(const Point&)> f;
  std::optional<Region> support;  // empty: no compact support known
  V zero;                         // shape of the values
  std::string label;

  V operator()(const Point& g) const { return f(g); }
};

template <typename V>
struct GroupIntegral {
  V value;
  double abs_error_estimate = 0.0;
};

namespace detail {

/// Calls visit(x, w) for every quadrature node of the region, w including
/// the Haar density. Node order is deterministic.
template <typename Visit>
void for_each_node(const Region& region, const ContinuousGroup& G, int panels, const Visit& visit) {
  if (region.empty()) return;
  const int d = region.dim();
  Point x(d);
  if (!region.fiber) {
    std::vector<quad::GaussRule> rules;
    for (int k = 0; k < d; ++k)
      rules.push_back(quad::composite_legendre(region.bounds.lo(k), region.bounds.hi(k), panels, G.order));
    std::int64_t total = 1;
    for (const auto& r : rules) total *= r.nodes.size();
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      double w = 1.0;
      for (int k = d - 1; k >= 0; --k) {
        const auto& r = rules[static_cast<std::size_t>(k)];
        const auto i = static_cast<Eigen::Index>(rem % r.nodes.size());
        rem /= r.nodes.size();
        x(k) = r.nodes(i);
        w *= r.weights(i);
      }
      visit(x, w * G.haar_density(x));
    }
    return;
  }
  const quad::GaussRule outer = quad::composite_legendre(region.bounds.lo(0), region.bounds.hi(0), panels, G.order);
  for (Eigen::Index i = 0; i < outer.nodes.size(); ++i) {
    x(0) = outer.nodes(i);
    auto [lo, hi] = region.fiber(x(0));
    lo = std::max(lo, region.bounds.lo(1));
    hi = std::min(hi, region.bounds.hi(1));
    if (!(hi > lo)) continue;
    const quad::GaussRule inner = quad::composite_legendre(lo, hi, panels, G.order);
    for (Eigen::Index j = 0; j < inner.nodes.size(); ++j) {
      x(1) = inner.nodes(j);
      visit(x, outer.weights(i) * inner.weights(j) * G.haar_density(x));
    }
  }
}

/// Haar integral of h over the region with `panels` per axis.
template <typename V, typename F>
V integrate_region(const F& h, const Region& region, const ContinuousGroup& G, int panels, const V& zero) {
  std::vector<V> terms;
  for_each_node(region, G, panels, [&](const Point& x, double w) { terms.push_back(w * h(x)); });
  if (terms.empty()) return zero;
  return quad::pairwise_sum(std::span<const V>(terms));
}

/// Integral and norm integral of F over its support in one pass.
template <typename V>
std::pair<V, double> integral_and_norm(const ContinuousFunction<V>& F, const ContinuousGroup& G) {
  require(F.support.has_value(), "group: function has no compact support box (domain guard)");
  std::vector<V> terms;
  std::vector<double> norms;
  for_each_node(*F.support, G, G.panels, [&](const Point& x, double w) {
    const V v = F.f(x);
    terms.push_back(w * v);
    norms.push_back(w * norm(v));
  });
  if (terms.empty()) return {F.zero, 0.0};
  return {quad::pairwise_sum(std::span<const V>(terms)), quad::pairwise_sum(std::span<const double>(norms))};
}

}  // namespace detail

template <typename V>
GroupIntegral<V> int_lambda(const ContinuousFunction<V>& F, const ContinuousGroup& G) {
  require(F.support.has_value(), "int_lambda: function has no compact support box (domain guard)");
  require(F.support->dim() == G.dim(), "int_lambda: support box has the wrong dimension");
  GroupIntegral<V> r;
  r.value = detail::integrate_region<V>(F.f, *F.support, G, G.panels, F.zero);
  const V coarse = detail::integrate_region<V>(F.f, *F.support, G, std::max(1, (2 * G.panels) / 3), F.zero);
  r.abs_error_estimate = max_abs(V(r.value - coarse));
  return r;
}

template <typename V>
GroupIntegral<double> norm_lambda(const ContinuousFunction<V>& F, const ContinuousGroup& G) {
  require(F.support.has_value(), "norm_lambda: function has no compact support box (domain guard)");
  auto pointwise = [&](const Point& x) { return norm(F.f(x)); };
  GroupIntegral<double> r;
  r.value = detail::integrate_region<double>(pointwise, *F.support, G, G.panels, 0.0);
  const double coarse = detail::integrate_region<double>(pointwise, *F.support, G, std::max(1, (2 * G.panels) / 3), 0.0);
  r.abs_error_estimate = std::abs(r.value - coarse);
  return r;
}

/// (F1 * F2)(g) = int F1(h) F2(h^{-1} g) dnu(h), integrated over
/// supp F1 ∩ g (supp F2)^{-1}.
template <typename V>
ContinuousFunction<V> convolve_star(const ContinuousFunction<V>& F1, const ContinuousFunction<V>& F2,
                                    const ContinuousGroup& G) {
  require(F1.support && F2.support, "convolve_star: both factors need compact support boxes");
  check_shape(F1.zero, F2.zero);
  ContinuousFunction<V> out;
  out.zero = F1.zero;
  out.support = G.product(*F1.support, *F2.support);
  out.label = "(" + F1.label + " * " + F2.label + ")";
  out.f = [F1, F2, G](const Point& g) {
    const Region region = G.intersect(*F1.support, G.left_translate(g, G.inverse(*F2.support)));
    auto integrand = [&](const Point& h) -> V { return F1.f(h) * F2.f(G.product(G.inverse(h), g)); };
    return detail::integrate_region<V>(integrand, region, G, G.panels, F1.zero);
  };
  return out;
}

/// (F1 ⋆ F2)(g) = int F1(h g) F2(h h) dnu(h), integrated over supp F1 g^{-1}.
/// The result carries no support box.
template <typename V>
ContinuousFunction<V> convolve_star2(const ContinuousFunction<V>& F1, const ContinuousFunction<V>& F2,
                                     const ContinuousGroup& G) {
  require(F1.support && F2.support, "convolve_star2: both factors need compact support boxes");
  check_shape(F1.zero, F2.zero);
  ContinuousFunction<V> out;
  out.zero = F1.zero;
  out.label = "(" + F1.label + " ⋆ " + F2.label + ")";
  out.f = [F1, F2, G](const Point& g) {
    const Region region = G.right_translate(*F1.support, G.inverse(g));
    auto integrand = [&](const Point& h) -> V { return F1.f(G.product(h, g)) * F2.f(G.product(h, h)); };
    return detail::integrate_region<V>(integrand, region, G, G.panels, F1.zero);
  };
  return out;
}

template <typename V>
ContinuousFunction<V> involution(const ContinuousFunction<V>& F, const ContinuousGroup& G) {
  ContinuousFunction<V> out;
  out.zero = F.zero;
  if (F.support) out.support = G.inverse(*F.support);
  out.label = F.label + "^*";
  out.f = [F, G](const Point& g) {
    const Point gi = G.inverse(g);
    return V(adjoint(F.f(gi)) * G.modular(gi));
  };
  return out;
}

/// |int f(g0 g) dnu - int f dnu| for a left translate g0.
template <typename V>
double haar_invariance_residual(const ContinuousFunction<V>& F, const Point& g0, const ContinuousGroup& G) {
  ContinuousFunction<V> shifted = F;
  shifted.f = [F, g0, G](const Point& g) { return F.f(G.product(g0, g)); };
  shifted.support = G.left_translate(G.inverse(g0), *F.support);
  return max_abs(V(int_lambda(shifted, G).value - int_lambda(F, G).value));
}

// ------------------------------------------------------------ propositions

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct PropositionReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

namespace detail {

inline void record(PropositionReport& rep, std::string name, double residual, double tol) {
  rep.checks.push_back({std::move(name), residual, tol, residual <= tol});
}

template <typename V>
double table_residual(const FiniteFunction<V>& a, const FiniteFunction<V>& b) {
  double r = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    r = std::max(r, max_abs(V(a.values[i] - b.values[i])));
    scale = std::max(scale, max_abs(a.values[i]));
  }
  return r / scale;
}

template <typename V>
double value_residual(const V& a, const V& b) {
  return max_abs(V(a - b)) / std::max(1.0, max_abs(a));
}

}  // namespace detail

/// Identities (a)-(e) on every ordered pair/triple of fixtures.
/// Residuals are relative to max(1, |value|).
template <typename V>
PropositionReport verify_propositions(const FiniteGroup& G, const std::vector<FiniteFunction<V>>& fx,
                                      double tol = 1e-13) {
  require(!fx.empty(), "verify_propositions: need at least one fixture");
  PropositionReport rep;
  double ra = 0.0, rb = 0.0, rc = 0.0, rd = 0.0, re = 0.0, rinv = 0.0;
  for (const auto& F1 : fx) {
    const auto F1s = involution(F1, G);
    rd = std::max(rd, detail::value_residual(int_lambda(F1s, G), adjoint(int_lambda(F1, G))));
    rinv = std::max(rinv, detail::table_residual(involution(F1s, G), F1));
    for (const auto& F2 : fx) {
      const auto c12 = convolve_star(F1, F2, G);
      ra = std::max(ra, norm_lambda(c12, G) - norm_lambda(F1, G) * norm_lambda(F2, G));
      rc = std::max(rc, detail::value_residual(int_lambda(c12, G), V(int_lambda(F1, G) * int_lambda(F2, G))));
      re = std::max(re, detail::table_residual(convolve_star(F1s, involution(F2, G), G),
                                               involution(convolve_star(F2, F1, G), G)));
      for (const auto& F3 : fx)
        rb = std::max(rb, detail::table_residual(convolve_star(c12, F3, G),
                                                 convolve_star(F1, convolve_star(F2, F3, G), G)));
    }
  }
  detail::record(rep, "(a) norm submultiplicative", std::max(0.0, ra), tol);
  detail::record(rep, "(b) associativity", rb, tol);
  detail::record(rep, "(c) int homomorphism", rc, tol);
  detail::record(rep, "(d) int(F*) = int(F)*", rd, tol);
  detail::record(rep, "(e) F1* * F2* = (F2 * F1)*", re, tol);
  detail::record(rep, "involution twice", rinv, tol);
  return rep;
}

/// Continuous version: pointwise identities are probed at the given points.
/// Pair identities run over consecutive pairs (F_i, F_{i+1}); associativity,
/// which needs a doubly nested quadrature, runs on (F_0, F_1, F_2) only.
template <typename V>
PropositionReport verify_propositions(const ContinuousGroup& G, const std::vector<ContinuousFunction<V>>& fx,
                                      const std::vector<Point>& probes, double tol = 1e-6) {
  require(fx.size() >= 2, "verify_propositions: need at least two fixtures");
  require(!probes.empty(), "verify_propositions: need probe points");
  PropositionReport rep;
  double ra = 0.0, rb = 0.0, rc = 0.0, rd = 0.0, re = 0.0, rinv = 0.0;
  const std::size_t n = fx.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& F1 = fx[i];
    const auto& F2 = fx[(i + 1) % n];
    const auto& F3 = fx[(i + 2) % n];
    const auto F1s = involution(F1, G);
    const auto F2s = involution(F2, G);
    rd = std::max(rd, detail::value_residual(int_lambda(F1s, G).value, adjoint(int_lambda(F1, G).value)));
    const auto c12 = convolve_star(F1, F2, G);
    if (i == 0) {
      const auto lhs_b = convolve_star(c12, F3, G);
      const auto rhs_b = convolve_star(F1, convolve_star(F2, F3, G), G);
      for (const Point& g : probes) rb = std::max(rb, detail::value_residual(lhs_b(g), rhs_b(g)));
    }
    const auto lhs_e = convolve_star(F1s, F2s, G);
    const auto rhs_e = involution(convolve_star(F2, F1, G), G);
    const auto twice = involution(F1s, G);
    for (const Point& g : probes) {
      re = std::max(re, detail::value_residual(lhs_e(g), rhs_e(g)));
      rinv = std::max(rinv, detail::value_residual(twice(g), F1(g)));
    }
    const auto [int12, norm12] = detail::integral_and_norm(c12, G);
    const auto [int1, norm1] = detail::integral_and_norm(F1, G);
    const auto [int2, norm2] = detail::integral_and_norm(F2, G);
    ra = std::max(ra, norm12 - norm1 * norm2);
    rc = std::max(rc, detail::value_residual(int12, V(int1 * int2)));
  }
  detail::record(rep, "(a) norm submultiplicative", std::max(0.0, ra), tol);
  detail::record(rep, "(b) associativity", rb, tol);
  detail::record(rep, "(c) int homomorphism", rc, tol);
  detail::record(rep, "(d) int(F*) = int(F)*", rd, tol);
  detail::record(rep, "(e) F1* * F2* = (F2 * F1)*", re, tol);
  detail::record(rep, "involution twice", rinv, tol);
  return rep;
}

/// Gaussian bump in chart coordinates, cut off at 7 widths:
///   weight * exp(-1/2 sum ((x_k - center_k)/width_k)^2)
/// The optional wave vector k multiplies by the phase e^{i k.(x - center)}.
ContinuousFunction<cdouble> gaussian_bump(const Eigen::VectorXd& center, const Eigen::VectorXd& width, cdouble weight,
                                          std::string label = "bump", const Eigen::VectorXd& wave = {});

/// Random complex tables; the matrix variant draws dim x dim entries.
std::vector<FiniteFunction<cdouble>> random_tables(int order, int count, std::uint64_t seed);
std::vector<FiniteFunction<Eigen::MatrixXcd>> random_matrix_tables(int order, int count, int dim, std::uint64_t seed);

}  // namespace fint::group
