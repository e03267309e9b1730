#include "fint/group_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace fint::group {

double norm(const Eigen::MatrixXcd& v) {
  if (v.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  return svd.singularValues()(0);
}

void check_shape(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols() && a.rows() == a.cols(),
          "group: matrix values must be square and of equal size");
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels, double haar_weight)
    : table_(std::move(table)), labels_(std::move(labels)), haar_weight_(haar_weight) {
  const int n = order();
  require(n >= 1, "FiniteGroup: empty table");
  require(haar_weight_ > 0.0, "FiniteGroup: Haar weight must be positive");
  for (const auto& row : table_) {
    require(static_cast<int>(row.size()) == n, "FiniteGroup: table must be square");
    for (int v : row) require(v >= 0 && v < n, "FiniteGroup: table entry out of range");
  }
  if (labels_.empty())
    for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  require(static_cast<int>(labels_.size()) == n, "FiniteGroup: label count differs from order");

  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) identity_ = e;
  }
  require(identity_ >= 0, "FiniteGroup: no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(mul(mul(a, b), c) == mul(a, mul(b, c)), "FiniteGroup: product is not associative");
  inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) inverse_[static_cast<std::size_t>(a)] = b;
    require(inverse_[static_cast<std::size_t>(a)] >= 0, "FiniteGroup: element without inverse");
  }
}

FiniteGroup FiniteGroup::cyclic(int n) {
  require(n >= 1, "FiniteGroup::cyclic: n must be positive");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  return FiniteGroup(std::move(t));
}

Box Box::intersect(const Box& other) const {
  require(dim() == other.dim(), "Box: dimension mismatch");
  return {lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
}

ContinuousGroup ContinuousGroup::real_line(int n) {
  require(n >= 1, "real_line: dimension must be positive");
  ContinuousGroup g;
  g.kind_ = Kind::real_line;
  g.dim_ = n;
  g.panels = n > 1 ? 3 : 8;
  g.order = 16;
  return g;
}

ContinuousGroup ContinuousGroup::affine() {
  ContinuousGroup g;
  g.kind_ = Kind::affine;
  g.dim_ = 2;
  g.panels = 3;
  g.order = 16;
  return g;
}

Point ContinuousGroup::product(const Point& g, const Point& h) const {
  if (kind_ == Kind::real_line) return g + h;
  Point out(2);
  out << g(0) + h(0), std::exp(g(0)) * h(1) + g(1);
  return out;
}

Point ContinuousGroup::inverse(const Point& g) const {
  if (kind_ == Kind::real_line) return -g;
  Point out(2);
  out << -g(0), -g(1) * std::exp(-g(0));
  return out;
}

double ContinuousGroup::haar_density(const Point& g) const {
  return kind_ == Kind::real_line ? normalization : normalization * std::exp(-g(0));
}

double ContinuousGroup::modular(const Point& g) const {
  return kind_ == Kind::real_line ? 1.0 : std::exp(-g(0));
}

namespace {

// Bounding box of f over the corners of the given boxes (concatenated).
template <typename F>
Box corner_hull(const std::vector<const Box*>& boxes, int out_dim, const F& f) {
  int total = 0;
  for (const Box* b : boxes) total += b->dim();
  Box out{Eigen::VectorXd::Constant(out_dim, std::numeric_limits<double>::infinity()),
          Eigen::VectorXd::Constant(out_dim, -std::numeric_limits<double>::infinity())};
  Eigen::VectorXd x(total);
  for (long mask = 0; mask < (1L << total); ++mask) {
    int k = 0;
    for (const Box* b : boxes)
      for (int i = 0; i < b->dim(); ++i, ++k) x(k) = (mask >> k) & 1 ? b->hi(i) : b->lo(i);
    const Eigen::VectorXd y = f(x);
    out.lo = out.lo.cwiseMin(y);
    out.hi = out.hi.cwiseMax(y);
  }
  return out;
}

using Interval = std::pair<double, double>;
constexpr Interval kEmpty{1.0, -1.0};

// b-interval of an affine region over u (empty outside its u-range).
Interval fiber_at(const Region& r, double u) {
  if (u < r.bounds.lo(0) || u > r.bounds.hi(0)) return kEmpty;
  Interval f{r.bounds.lo(1), r.bounds.hi(1)};
  if (r.fiber) {
    const Interval g = r.fiber(u);
    f = {std::max(f.first, g.first), std::min(f.second, g.second)};
  }
  return f;
}

}  // namespace

Region ContinuousGroup::left_translate(const Point& g, const Region& r) const {
  const Box bounds = corner_hull({&r.bounds}, dim_, [&](const Eigen::VectorXd& x) { return product(g, x); });
  if (kind_ == Kind::real_line) return bounds;
  const double ug = g(0), bg = g(1), scale = std::exp(g(0));
  return {bounds, [r, ug, bg, scale](double u) {
            const Interval f = fiber_at(r, u - ug);
            return Interval{scale * f.first + bg, scale * f.second + bg};
          }};
}

Region ContinuousGroup::right_translate(const Region& r, const Point& g) const {
  const Box bounds = corner_hull({&r.bounds}, dim_, [&](const Eigen::VectorXd& x) { return product(x, g); });
  if (kind_ == Kind::real_line) return bounds;
  const double ug = g(0), bg = g(1);
  return {bounds, [r, ug, bg](double u) {
            const Interval f = fiber_at(r, u - ug);
            const double shift = std::exp(u - ug) * bg;
            return Interval{f.first + shift, f.second + shift};
          }};
}

Region ContinuousGroup::inverse(const Region& r) const {
  const Box bounds = corner_hull({&r.bounds}, dim_, [&](const Eigen::VectorXd& x) { return inverse(Point(x)); });
  if (kind_ == Kind::real_line) return bounds;
  return {bounds, [r](double u) {
            const Interval f = fiber_at(r, -u);
            const double scale = std::exp(u);
            return Interval{-scale * f.second, -scale * f.first};
          }};
}

Region ContinuousGroup::product(const Region& r1, const Region& r2) const {
  const int d = dim_;
  const Box bounds = corner_hull({&r1.bounds, &r2.bounds}, d, [&](const Eigen::VectorXd& x) {
    return product(Point(x.head(d)), Point(x.tail(d)));
  });
  if (kind_ == Kind::real_line || r1.fiber || r2.fiber) return bounds;
  // For two boxes the fiber over u is exact: e^{u1} b2 + b1 is monotone in u1.
  const Box b1 = r1.bounds, b2 = r2.bounds;
  return {bounds, [b1, b2](double u) {
            const double p = std::max(b1.lo(0), u - b2.hi(0));
            const double q = std::min(b1.hi(0), u - b2.lo(0));
            if (p > q) return kEmpty;
            const double ep = std::exp(p), eq = std::exp(q);
            return Interval{b1.lo(1) + std::min(ep * b2.lo(1), eq * b2.lo(1)),
                            b1.hi(1) + std::max(ep * b2.hi(1), eq * b2.hi(1))};
          }};
}

Region ContinuousGroup::intersect(const Region& r1, const Region& r2) const {
  const Box bounds = r1.bounds.intersect(r2.bounds);
  if (kind_ == Kind::real_line || (!r1.fiber && !r2.fiber)) return bounds;
  return {bounds, [r1, r2](double u) {
            const Interval a = fiber_at(r1, u), b = fiber_at(r2, u);
            return Interval{std::max(a.first, b.first), std::min(a.second, b.second)};
          }};
}

ContinuousFunction<cdouble> gaussian_bump(const Eigen::VectorXd& center, const Eigen::VectorXd& width, cdouble weight,
                                          std::string label, const Eigen::VectorXd& wave) {
  require(center.size() == width.size() && (width.array() > 0.0).all(), "gaussian_bump: bad widths");
  require(wave.size() == 0 || wave.size() == center.size(), "gaussian_bump: wave vector has wrong dimension");
  ContinuousFunction<cdouble> F;
  F.zero = 0.0;
  F.label = std::move(label);
  F.support = Region(Box{center - 7.0 * width, center + 7.0 * width});
  const Point c = center, w = width;
  const Point k = wave.size() ? Point(wave) : Point(Point::Zero(center.size()));
  F.f = [c, w, k, weight](const Point& x) {
    double q = 0.0, phase = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double z = (x(i) - c(i)) / w(i);
      if (std::abs(z) > 7.0) return cdouble(0.0);
      q += z * z;
      phase += k(i) * (x(i) - c(i));
    }
    return weight * std::exp(cdouble(-0.5 * q, phase));
  };
  return F;
}

std::vector<FiniteFunction<cdouble>> random_tables(int order, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<FiniteFunction<cdouble>> out;
  for (int c = 0; c < count; ++c) {
    FiniteFunction<cdouble> F;
    F.label = "random" + std::to_string(c);
    for (int i = 0; i < order; ++i) F.values.emplace_back(u(rng), u(rng));
    out.push_back(std::move(F));
  }
  return out;
}

std::vector<FiniteFunction<Eigen::MatrixXcd>> random_matrix_tables(int order, int count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<FiniteFunction<Eigen::MatrixXcd>> out;
  for (int c = 0; c < count; ++c) {
    FiniteFunction<Eigen::MatrixXcd> F;
    F.label = "matrix" + std::to_string(c);
    for (int i = 0; i < order; ++i) {
      Eigen::MatrixXcd m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int s = 0; s < dim; ++s) m(r, s) = cdouble(u(rng), u(rng));
      F.values.push_back(std::move(m));
    }
    out.push_back(std::move(F));
  }
  return out;
}

}  // namespace fint::group
