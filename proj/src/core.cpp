#include "fint/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace fint {

TimeGrid::TimeGrid(double t_a, double t_b, std::vector<double> points)
    : t_a_(t_a), t_b_(t_b), points_(std::move(points)) {
  require(std::isfinite(t_a) && std::isfinite(t_b) && t_a < t_b,
          "TimeGrid: need finite t_a < t_b");
  require(!points_.empty(), "TimeGrid: at least one slice point required");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double prev = i == 0 ? t_a_ : points_[i - 1];
    require(points_[i] > prev, "TimeGrid: points must be strictly increasing and > t_a");
  }
  require(points_.back() == t_b_, "TimeGrid: last point must be t_b");
}

TimeGrid TimeGrid::uniform(double t_a, double t_b, int n) {
  require(n >= 1, "TimeGrid::uniform: n must be positive");
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double h = (t_b - t_a) / n;
  for (int k = 1; k < n; ++k) pts[static_cast<std::size_t>(k - 1)] = t_a + k * h;
  pts.back() = t_b;
  return TimeGrid(t_a, t_b, std::move(pts));
}

double TimeGrid::width(int i) const {
  const double prev = i == 0 ? t_a_ : points_[static_cast<std::size_t>(i - 1)];
  return points_[static_cast<std::size_t>(i)] - prev;
}

bool TimeGrid::is_uniform(double rel_tol) const {
  const double h = (t_b_ - t_a_) / size();
  for (int i = 0; i < size(); ++i)
    if (std::abs(width(i) - h) > rel_tol * h) return false;
  return true;
}

Path::Path(double t_a, Eigen::VectorXcd basepoint, std::vector<double> times,
           std::vector<Eigen::VectorXcd> values, Interpolation rule)
    : t_a_(t_a),
      basepoint_(std::move(basepoint)),
      times_(std::move(times)),
      values_(std::move(values)),
      rule_(rule) {
  require(basepoint_.size() >= 1, "Path: need at least one component");
  require(times_.size() == values_.size(), "Path: times/values length mismatch");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double prev = i == 0 ? t_a_ : times_[i - 1];
    require(times_[i] > prev, "Path: knot times must be strictly increasing and > t_a");
    require(values_[i].size() == basepoint_.size(), "Path: knot value has wrong component count");
  }
}

Path Path::constant(double t_a, double t_end, const Eigen::VectorXcd& basepoint) {
  return Path(t_a, basepoint, {t_end}, {basepoint});
}

Eigen::VectorXcd Path::operator()(double t) const {
  if (!(t >= t_a_ && t <= t_end()))
    throw ValidationError("Path: time " + std::to_string(t) + " outside domain [" +
                          std::to_string(t_a_) + ", " + std::to_string(t_end()) + "]");
  if (t == t_a_) return basepoint_;
  // first knot with time >= t
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin());
  if (*it == t) return values_[k];
  const double t0 = k == 0 ? t_a_ : times_[k - 1];
  const Eigen::VectorXcd& v0 = k == 0 ? basepoint_ : values_[k - 1];
  if (rule_ == Interpolation::piecewise_constant) return v0;
  const double w = (t - t0) / (times_[k] - t0);
  return v0 + w * (values_[k] - v0);
}

Selection::Selection(std::vector<int> indices, int source_dimension)
    : indices_(std::move(indices)), source_dimension_(source_dimension) {
  for (int i : indices_)
    require(i >= 0 && i < source_dimension_, "Selection: index out of range");
}

Eigen::VectorXcd Selection::operator()(const Eigen::VectorXcd& fine) const {
  require(fine.size() == source_dimension_, "Selection: input has wrong dimension");
  Eigen::VectorXcd out(target_dimension());
  for (int i = 0; i < target_dimension(); ++i) out(i) = fine(indices_[static_cast<std::size_t>(i)]);
  return out;
}

Selection Selection::after(const Selection& inner) const {
  require(inner.target_dimension() == source_dimension_, "Selection: incompatible composition");
  std::vector<int> idx(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i)
    idx[i] = inner.indices()[static_cast<std::size_t>(indices_[i])];
  return Selection(std::move(idx), inner.source_dimension());
}

Eigen::SparseMatrix<double> Selection::matrix() const {
  Eigen::SparseMatrix<double> p(target_dimension(), source_dimension_);
  std::vector<Eigen::Triplet<double>> entries;
  for (int i = 0; i < target_dimension(); ++i) entries.emplace_back(i, indices_[static_cast<std::size_t>(i)], 1.0);
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

Eigen::VectorXcd project(const Path& path, const Projection& proj) {
  require(path.components() == proj.components, "project: component count mismatch");
  require(path.t_a() == proj.grid.t_a(), "project: path and grid have different basepoint times");
  const int m = proj.components;
  Eigen::VectorXcd out(proj.dimension());
  for (int i = 0; i < proj.grid.size(); ++i) out.segment(i * m, m) = path(proj.grid[i]);
  return out;
}

Selection coarsen(const Projection& fine, const Projection& coarse) {
  require(fine.components == coarse.components, "coarsen: component count mismatch");
  require(fine.grid.t_a() == coarse.grid.t_a(), "coarsen: grids have different basepoints");
  const int m = fine.components;
  const auto& fp = fine.grid.points();
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(coarse.dimension()));
  for (double t : coarse.grid.points()) {
    const auto it = std::lower_bound(fp.begin(), fp.end(), t);
    if (it == fp.end() || *it != t)
      throw ValidationError("coarsen: coarse point " + std::to_string(t) +
                            " is not a fine grid point");
    const int i = static_cast<int>(it - fp.begin());
    for (int k = 0; k < m; ++k) idx.push_back(i * m + k);
  }
  return Selection(std::move(idx), fine.dimension());
}

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    case Method::series: return "series";
  }
  return "unknown";
}

}  // namespace fint
