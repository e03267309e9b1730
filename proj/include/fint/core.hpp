#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "fint/errors.hpp"

namespace fint {

using cdouble = std::complex<double>;

/// Slice times of a pointed path space over [t_a, t_b].
///
/// The basepoint t_a is never stored as a point; the endpoint t_b always is.
/// Points are strictly increasing.
class TimeGrid {
 public:
  TimeGrid(double t_a, double t_b, std::vector<double> points);

  /// n equal slices; points t_a + k (t_b - t_a) / n for k = 1..n.
  static TimeGrid uniform(double t_a, double t_b, int n);

  double t_a() const { return t_a_; }
  double t_b() const { return t_b_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<double>& points() const { return points_; }
  double operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }

  /// Width of slice i, i.e. points[i] - points[i-1] with points[-1] = t_a.
  double width(int i) const;
  bool is_uniform(double rel_tol = 1e-12) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_a_;
  double t_b_;
  std::vector<double> points_;
};

enum class Interpolation { piecewise_linear, piecewise_constant };

/// A pointed path t -> C^m stored as knots.
///
/// Knot times are strictly increasing and lie strictly after t_a; the value
/// at t_a is the basepoint. Evaluation at a knot time returns the stored
/// value bit-for-bit.
class Path {
 public:
  Path(double t_a, Eigen::VectorXcd basepoint, std::vector<double> times,
       std::vector<Eigen::VectorXcd> values,
       Interpolation rule = Interpolation::piecewise_linear);

  /// The constant path at the basepoint, defined on [t_a, t_end].
  static Path constant(double t_a, double t_end, const Eigen::VectorXcd& basepoint);

  int components() const { return static_cast<int>(basepoint_.size()); }
  double t_a() const { return t_a_; }
  double t_end() const { return times_.empty() ? t_a_ : times_.back(); }
  Interpolation rule() const { return rule_; }
  const Eigen::VectorXcd& basepoint() const { return basepoint_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Eigen::VectorXcd>& values() const { return values_; }

  Eigen::VectorXcd operator()(double t) const;

 private:
  double t_a_;
  Eigen::VectorXcd basepoint_;
  std::vector<double> times_;
  std::vector<Eigen::VectorXcd> values_;
  Interpolation rule_;
};

/// The time-slicing map x -> (x(t_1), ..., x(t_n)) for m-component paths.
struct Projection {
  TimeGrid grid;
  int components = 1;

  int dimension() const { return grid.size() * components; }
};

/// Coordinate selection P between two projections: picks the coarse slice
/// coordinates out of a fine projection vector.
class Selection {
 public:
  Selection(std::vector<int> indices, int source_dimension);

  const std::vector<int>& indices() const { return indices_; }
  int source_dimension() const { return source_dimension_; }
  int target_dimension() const { return static_cast<int>(indices_.size()); }

  Eigen::VectorXcd operator()(const Eigen::VectorXcd& fine) const;

  /// this ∘ inner, i.e. first apply inner then this.
  Selection after(const Selection& inner) const;

  Eigen::SparseMatrix<double> matrix() const;

  bool operator==(const Selection&) const = default;

 private:
  std::vector<int> indices_;
  int source_dimension_;
};

Eigen::VectorXcd project(const Path& path, const Projection& proj);

/// P with P ∘ project(., fine) == project(., coarse). Requires the coarse
/// points to be a subset of the fine points (exact equality).
Selection coarsen(const Projection& fine, const Projection& coarse);

enum class Method { closed_form, quadrature, monte_carlo, series };

const char* to_string(Method m);

struct IntegralResult {
  cdouble value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  Method method = Method::closed_form;
  std::int64_t samples_or_order = 0;
  std::optional<std::uint64_t> seed;  // set for monte_carlo
};

struct MatrixResult {
  Eigen::MatrixXcd value;
  double abs_error_estimate = 0.0;
  Method method = Method::series;
  std::int64_t samples_or_order = 0;
};

}  // namespace fint
