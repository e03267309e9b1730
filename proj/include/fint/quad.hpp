#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "fint/core.hpp"

namespace fint::quad {

/// One-dimensional Gauss rule: sum_i weights[i] * f(nodes[i]) approximates
/// the weighted integral of f.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Weight e^{-x^2} on the real line.
GaussRule gauss_hermite(int n);
/// Weight x^alpha e^{-x} on [0, inf), alpha > -1.
GaussRule gauss_laguerre(int n, double alpha = 0.0);
/// Weight 1 on [-1, 1].
GaussRule gauss_legendre(int n);
/// Same rule, computed once per order and shared (std::map nodes are stable).
const GaussRule& gauss_legendre_cached(int n);
/// Gauss-Legendre mapped to [a, b] and split into equal panels.
GaussRule composite_legendre(double a, double b, int panels, int order);

/// Pairwise (cascade) summation; the reduction tree depends only on the
/// length, so the result is independent of how the terms were produced.
template <typename T>
T pairwise_sum(std::span<const T> terms) {
  constexpr std::size_t kBlock = 16;
  if (terms.empty()) return T{};
  if (terms.size() <= kBlock) {
    T acc = terms.front();
    for (const T& t : terms.subspan(1)) acc += t;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

/// Worker count for node evaluation: hardware concurrency capped by the
/// FINT_THREADS environment variable.
int thread_count();

enum class DomainKind { full_space, positive_orthant, box };
enum class Weight { gaussian, exponential, none };

/// Integration domain with its weight w(x):
///   gaussian    -> e^{-pi |x|^2}
///   exponential -> e^{-sum x_i}
///   none        -> 1
struct Domain {
  DomainKind kind = DomainKind::full_space;
  int dim = 1;
  Eigen::VectorXd lo;  // box only
  Eigen::VectorXd hi;  // box only
  Weight weight = Weight::gaussian;

  static Domain full_space(int d, Weight w = Weight::gaussian);
  static Domain positive_orthant(int d, Weight w = Weight::exponential);
  static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi, Weight w = Weight::none);

  void validate() const;
  bool contains(const Eigen::VectorXd& x) const;
  double weight_at(const Eigen::VectorXd& x) const;
};

inline constexpr int kMaxTensorDim = 6;

namespace detail {

struct TensorGrid {
  std::vector<GaussRule> rules;  // one per dimension, already mapped to the domain
  // explicit weight multiplier applied on top of the rule weights
  bool multiply_weight = false;
};

TensorGrid tensor_grid(const Domain& dom, int order);

template <typename F>
std::vector<cdouble> evaluate_tensor(const F& f, const TensorGrid& grid, const Domain& dom,
                                     double& abs_sum) {
  const int d = static_cast<int>(grid.rules.size());
  std::int64_t total = 1;
  for (const auto& r : grid.rules) total *= r.nodes.size();
  std::vector<cdouble> terms(static_cast<std::size_t>(total));
  std::vector<double> abs_terms(static_cast<std::size_t>(total));

  auto work = [&](std::int64_t begin, std::int64_t end) {
    Eigen::VectorXd x(d);
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::int64_t flat = begin; flat < end; ++flat) {
      std::int64_t rem = flat;
      double w = 1.0;
      for (int k = d - 1; k >= 0; --k) {
        const auto& r = grid.rules[static_cast<std::size_t>(k)];
        const int i = static_cast<int>(rem % r.nodes.size());
        rem /= r.nodes.size();
        x(k) = r.nodes(i);
        w *= r.weights(i);
      }
      if (grid.multiply_weight) w *= dom.weight_at(x);
      const cdouble v = f(x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream msg;
        msg << "integrate_quad: non-finite integrand at node (";
        for (int k = 0; k < d; ++k) msg << (k ? ", " : "") << x(k);
        msg << ")";
        throw NumericalError(msg.str());
      }
      terms[static_cast<std::size_t>(flat)] = w * v;
      abs_terms[static_cast<std::size_t>(flat)] = std::abs(w * v);
    }
  };

  const int threads = total < 4096 ? 1 : std::min<std::int64_t>(thread_count(), total / 1024);
  if (threads <= 1) {
    work(0, total);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    {
      std::vector<std::jthread> pool;
      const std::int64_t chunk = (total + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const std::int64_t b = t * chunk;
        const std::int64_t e = std::min(total, b + chunk);
        pool.emplace_back([&, b, e, t] {
          try {
            work(b, e);
          } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  abs_sum = pairwise_sum(std::span<const double>(abs_terms));
  return terms;
}

}  // namespace detail

/// Tensor-product Gauss quadrature of f against the domain weight.
///
/// The error estimate is |I(order) - I(order/2)| plus a rounding floor
/// proportional to the sum of absolute terms. Dimensions above
/// kMaxTensorDim are rejected; use integrate_mc there.
template <typename F>
IntegralResult integrate_quad(const F& f, const Domain& dom, int order) {
  dom.validate();
  require(order >= 2, "integrate_quad: order must be >= 2");
  require(dom.dim <= kMaxTensorDim,
          "integrate_quad: dimension exceeds tensor budget (d <= 6); use integrate_mc");
  double abs_full = 0.0;
  double abs_half = 0.0;
  const auto full = detail::evaluate_tensor(f, detail::tensor_grid(dom, order), dom, abs_full);
  const auto half = detail::evaluate_tensor(f, detail::tensor_grid(dom, std::max(1, order / 2)), dom, abs_half);
  IntegralResult r;
  r.value = pairwise_sum(std::span<const cdouble>(full));
  const cdouble coarse = pairwise_sum(std::span<const cdouble>(half));
  r.abs_error_estimate = std::abs(r.value - coarse) + 64.0 * std::numeric_limits<double>::epsilon() * abs_full;
  r.method = Method::quadrature;
  r.samples_or_order = order;
  return r;
}

struct GaussianProposal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};
struct ExponentialProposal {
  Eigen::VectorXd rate;
};
struct UniformProposal {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};
using Proposal = std::variant<GaussianProposal, ExponentialProposal, UniformProposal>;

struct McConfig {
  std::int64_t samples = 10000;
  std::uint64_t seed = 0;
  Proposal proposal;
};

namespace detail {

/// Draws samples and evaluates the proposal density; deterministic given seed.
class ProposalSampler {
 public:
  ProposalSampler(const Proposal& p, const Domain& dom, std::uint64_t seed);
  int dim() const { return dim_; }
  /// Fills x and returns the proposal density at x.
  double draw(Eigen::VectorXd& x);

 private:
  Proposal proposal_;
  int dim_;
  std::mt19937_64 rng_;
  Eigen::MatrixXd chol_;
  double log_norm_ = 0.0;
};

}  // namespace detail

/// Importance-sampled Monte Carlo estimate of the weighted integral of f over
/// dom. Samples outside the domain contribute zero. The error estimate is the
/// sample standard error.
template <typename F>
IntegralResult integrate_mc(const F& f, const Domain& dom, const McConfig& cfg) {
  dom.validate();
  require(cfg.samples >= 2, "integrate_mc: need at least two samples");
  detail::ProposalSampler sampler(cfg.proposal, dom, cfg.seed);
  Eigen::VectorXd x(dom.dim);
  std::vector<cdouble> y(static_cast<std::size_t>(cfg.samples));
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    const double p = sampler.draw(x);
    if (!dom.contains(x)) {
      y[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    if (!(p > 0.0))
      throw ValidationError("integrate_mc: proposal density vanishes at a sample");
    const cdouble v = f(x) * dom.weight_at(x) / p;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("integrate_mc: non-finite importance weight");
    y[static_cast<std::size_t>(i)] = v;
  }
  const double n = static_cast<double>(cfg.samples);
  const cdouble mean = pairwise_sum(std::span<const cdouble>(y)) / n;
  std::vector<double> dev(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dev[i] = std::norm(y[i] - mean);
  const double var = pairwise_sum(std::span<const double>(dev)) / (n - 1.0);
  IntegralResult r;
  r.value = mean;
  r.abs_error_estimate = std::sqrt(var / n);
  r.method = Method::monte_carlo;
  r.samples_or_order = cfg.samples;
  r.seed = cfg.seed;
  return r;
}

}  // namespace fint::quad
