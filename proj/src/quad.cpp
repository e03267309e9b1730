#include "fint/quad.hpp"

#include <Eigen/Eigenvalues>

#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>

namespace fint::quad {

namespace {

// Gauss rule from the Jacobi matrix of a three-term recurrence
// (diagonal a_k, off-diagonal sqrt(b_k)), mu0 = total weight mass.
// Nodes from the eigenvalues (Golub-Welsch), then polished by Newton on the
// orthonormal recurrence; weights from the Christoffel function.
GaussRule from_recurrence(int n, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0) {
  Eigen::VectorXd diag = a.head(n);
  Eigen::VectorXd sub(std::max(0, n - 1));
  for (int k = 0; k + 1 < n; ++k) sub(k) = std::sqrt(b(k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  Eigen::VectorXd x = es.eigenvalues();

  // p_k orthonormal; returns p_n(x) and p_n'(x) and sum_{k<n} p_k(x)^2
  auto eval = [&](double t, double& pn, double& dpn, double& sumsq) {
    double p_prev = 0.0, p = 1.0 / std::sqrt(mu0);
    double dp_prev = 0.0, dp = 0.0;
    sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
      sumsq += p * p;
      const double sb_next = std::sqrt(b(k + 1));
      const double sb = k == 0 ? 0.0 : std::sqrt(b(k));
      const double p_next = ((t - a(k)) * p - sb * p_prev) / sb_next;
      const double dp_next = (p + (t - a(k)) * dp - sb * dp_prev) / sb_next;
      p_prev = p;
      p = p_next;
      dp_prev = dp;
      dp = dp_next;
    }
    pn = p;
    dpn = dp;
  };

  GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    double t = x(i), pn, dpn, sumsq;
    for (int it = 0; it < 3; ++it) {
      eval(t, pn, dpn, sumsq);
      if (dpn == 0.0 || !std::isfinite(pn / dpn)) break;
      const double step = pn / dpn;
      t -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    eval(t, pn, dpn, sumsq);
    rule.nodes(i) = t;
    rule.weights(i) = 1.0 / sumsq;
  }
  return rule;
}

}  // namespace

GaussRule gauss_hermite(int n) {
  require(n >= 1, "gauss_hermite: n must be positive");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd b(n + 1);
  for (int k = 0; k <= n; ++k) b(k) = 0.5 * k;
  return from_recurrence(n, a, b, std::sqrt(std::numbers::pi));
}

GaussRule gauss_laguerre(int n, double alpha) {
  require(n >= 1, "gauss_laguerre: n must be positive");
  require(alpha > -1.0, "gauss_laguerre: alpha must exceed -1");
  Eigen::VectorXd a(n + 1), b(n + 1);
  for (int k = 0; k <= n; ++k) {
    a(k) = 2.0 * k + alpha + 1.0;
    b(k) = k * (k + alpha);
  }
  return from_recurrence(n, a, b, std::tgamma(alpha + 1.0));
}

GaussRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n must be positive");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd b(n + 1);
  b(0) = 0.0;
  for (int k = 1; k <= n; ++k) b(k) = double(k) * k / (4.0 * k * k - 1.0);
  return from_recurrence(n, a, b, 2.0);
}

const GaussRule& gauss_legendre_cached(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

GaussRule composite_legendre(double lo, double hi, int panels, int order) {
  require(panels >= 1 && order >= 1, "composite_legendre: need positive panels and order");
  const GaussRule& base = gauss_legendre_cached(order);
  GaussRule out{Eigen::VectorXd(panels * order), Eigen::VectorXd(panels * order)};
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      out.nodes(p * order + i) = c + 0.5 * h * base.nodes(i);
      out.weights(p * order + i) = 0.5 * h * base.weights(i);
    }
  }
  return out;
}

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("FINT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

Domain Domain::full_space(int d, Weight w) {
  Domain dom;
  dom.kind = DomainKind::full_space;
  dom.dim = d;
  dom.weight = w;
  return dom;
}

Domain Domain::positive_orthant(int d, Weight w) {
  Domain dom;
  dom.kind = DomainKind::positive_orthant;
  dom.dim = d;
  dom.weight = w;
  return dom;
}

Domain Domain::box(Eigen::VectorXd lo, Eigen::VectorXd hi, Weight w) {
  Domain dom;
  dom.kind = DomainKind::box;
  dom.dim = static_cast<int>(lo.size());
  dom.lo = std::move(lo);
  dom.hi = std::move(hi);
  dom.weight = w;
  return dom;
}

void Domain::validate() const {
  require(dim >= 1, "Domain: dimension must be >= 1");
  if (kind == DomainKind::box) {
    require(lo.size() == dim && hi.size() == dim, "Domain: box bounds have wrong dimension");
    for (int k = 0; k < dim; ++k)
      require(std::isfinite(lo(k)) && std::isfinite(hi(k)) && lo(k) < hi(k),
              "Domain: box bounds must be finite with lo < hi");
  }
}

bool Domain::contains(const Eigen::VectorXd& x) const {
  switch (kind) {
    case DomainKind::full_space: return true;
    case DomainKind::positive_orthant: return (x.array() >= 0.0).all();
    case DomainKind::box: return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  return false;
}

double Domain::weight_at(const Eigen::VectorXd& x) const {
  switch (weight) {
    case Weight::gaussian: return std::exp(-std::numbers::pi * x.squaredNorm());
    case Weight::exponential: return std::exp(-x.sum());
    case Weight::none: return 1.0;
  }
  return 1.0;
}

namespace detail {

TensorGrid tensor_grid(const Domain& dom, int order) {
  TensorGrid grid;
  switch (dom.kind) {
    case DomainKind::full_space: {
      require(dom.weight == Weight::gaussian,
              "integrate_quad: full-space domains need the gaussian weight");
      GaussRule r = gauss_hermite(order);
      // int f(x) e^{-pi x^2} dx = pi^{-1/2} int f(y / sqrt(pi)) e^{-y^2} dy
      const double s = 1.0 / std::sqrt(std::numbers::pi);
      r.nodes *= s;
      r.weights *= s;
      grid.rules.assign(static_cast<std::size_t>(dom.dim), r);
      break;
    }
    case DomainKind::positive_orthant: {
      require(dom.weight == Weight::exponential,
              "integrate_quad: positive-orthant domains need the exponential weight");
      grid.rules.assign(static_cast<std::size_t>(dom.dim), gauss_laguerre(order));
      break;
    }
    case DomainKind::box: {
      const GaussRule base = gauss_legendre(order);
      for (int k = 0; k < dom.dim; ++k) {
        GaussRule r = base;
        const double c = 0.5 * (dom.lo(k) + dom.hi(k));
        const double h = 0.5 * (dom.hi(k) - dom.lo(k));
        r.nodes = (c + h * base.nodes.array()).matrix();
        r.weights *= h;
        grid.rules.push_back(std::move(r));
      }
      grid.multiply_weight = dom.weight != Weight::none;
      break;
    }
  }
  return grid;
}

ProposalSampler::ProposalSampler(const Proposal& p, const Domain& dom, std::uint64_t seed)
    : proposal_(p), dim_(dom.dim), rng_(seed) {
  if (const auto* g = std::get_if<GaussianProposal>(&proposal_)) {
    require(g->mean.size() == dim_ && g->cov.rows() == dim_ && g->cov.cols() == dim_,
            "integrate_mc: gaussian proposal has wrong dimension");
    Eigen::LLT<Eigen::MatrixXd> llt(g->cov);
    require(llt.info() == Eigen::Success, "integrate_mc: proposal covariance not positive-definite");
    chol_ = llt.matrixL();
    log_norm_ = -0.5 * dim_ * std::log(2.0 * std::numbers::pi) -
                chol_.diagonal().array().log().sum();
  } else if (const auto* e = std::get_if<ExponentialProposal>(&proposal_)) {
    require(e->rate.size() == dim_, "integrate_mc: exponential proposal has wrong dimension");
    require((e->rate.array() > 0.0).all(), "integrate_mc: exponential rates must be positive");
    require(dom.kind != DomainKind::full_space,
            "integrate_mc: exponential proposal does not support the full space");
    if (dom.kind == DomainKind::box)
      require((dom.lo.array() >= 0.0).all(), "integrate_mc: exponential proposal needs a box in the orthant");
    log_norm_ = e->rate.array().log().sum();
  } else {
    const auto& u = std::get<UniformProposal>(proposal_);
    require(u.lo.size() == dim_ && u.hi.size() == dim_, "integrate_mc: uniform proposal has wrong dimension");
    require((u.lo.array() < u.hi.array()).all(), "integrate_mc: uniform proposal box is empty");
    require(dom.kind == DomainKind::box, "integrate_mc: uniform proposal only supports box domains");
    require((u.lo.array() <= dom.lo.array()).all() && (u.hi.array() >= dom.hi.array()).all(),
            "integrate_mc: uniform proposal does not cover the domain");
    log_norm_ = -(u.hi - u.lo).array().log().sum();
  }
}

double ProposalSampler::draw(Eigen::VectorXd& x) {
  if (const auto* g = std::get_if<GaussianProposal>(&proposal_)) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(dim_);
    for (int k = 0; k < dim_; ++k) z(k) = normal(rng_);
    x = g->mean + chol_ * z;
    return std::exp(log_norm_ - 0.5 * z.squaredNorm());
  }
  if (const auto* e = std::get_if<ExponentialProposal>(&proposal_)) {
    double expo = 0.0;
    for (int k = 0; k < dim_; ++k) {
      std::exponential_distribution<double> dist(e->rate(k));
      x(k) = dist(rng_);
      expo += e->rate(k) * x(k);
    }
    return std::exp(log_norm_ - expo);
  }
  const auto& u = std::get<UniformProposal>(proposal_);
  for (int k = 0; k < dim_; ++k) {
    std::uniform_real_distribution<double> dist(u.lo(k), u.hi(k));
    x(k) = dist(rng_);
  }
  return std::exp(log_norm_);
}

}  // namespace detail

}  // namespace fint::quad
