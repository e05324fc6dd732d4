#include "bilin/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "bilin/hermitian_eigen.hpp"

namespace bilin::recovery {

namespace {

double auto_threshold(const CVector& least_norm, double penalty) {
  if (penalty > 0.0) return 1.0 / penalty;
  const double peak = least_norm.size() ? least_norm.cwiseAbs().maxCoeff() : 0.0;
  return peak > 0.0 ? 0.1 * peak : 1.0;
}

void check_options(const SolverOptions& o, double eps) {
  if (eps < 0.0) throw std::invalid_argument("bpdn: eps must be nonnegative");
  if (o.max_iterations == 0 || !(o.tolerance > 0.0) || o.penalty < 0.0) {
    throw std::invalid_argument("bpdn: solver options must be positive");
  }
}

// Keeps the feasible iterate with the smallest objective.
struct MonotoneTracker {
  CVector best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double>* trace = nullptr;
  void offer(const CVector& candidate, double obj) {
    if (obj <= best_obj) {
      best_obj = obj;
      best = candidate;
    }
    if (trace) trace->push_back(best_obj);
  }
};

bool small_change(const CVector& next, const CVector& prev, double tol) {
  return (next - prev).norm() <= tol * std::max(next.norm(), 1e-300);
}

}  // namespace

double l1_norm(const CVector& v) { return v.cwiseAbs().sum(); }

CVector soft_threshold(const CVector& v, double tau) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    out[i] = mag > tau ? v[i] * ((mag - tau) / mag) : cplx(0.0);
  }
  return out;
}

FeasibleSetProjector::FeasibleSetProjector(const CMatrix& a, CVector b, double eps)
    : a_(a), b_(std::move(b)), eps_(eps) {
  if (b_.size() != a_.rows()) throw std::invalid_argument("FeasibleSetProjector: b has the wrong length");
  if (eps_ < 0.0) throw std::invalid_argument("FeasibleSetProjector: eps must be nonnegative");
  const auto eig = linalg::hermitian_eigen(a_ * a_.adjoint());
  lambda_ = eig.values;
  basis_ = eig.vectors;
  const double floor = 1e-12 * std::max(1.0, lambda_.maxCoeff());
  if (lambda_.minCoeff() <= floor) throw std::invalid_argument("FeasibleSetProjector: A must have full row rank");
}

CVector FeasibleSetProjector::project(const CVector& v) const {
  const CVector c = basis_.adjoint() * (a_ * v - b_);
  if (c.norm() <= eps_) return v;
  RVector weight(lambda_.size());  // mu / (1 + mu lambda)
  if (eps_ == 0.0) {
    weight = lambda_.cwiseInverse();
  } else {
    auto residual = [&](double mu) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < c.size(); ++i) acc += std::norm(c[i]) / std::pow(1.0 + mu * lambda_[i], 2);
      return std::sqrt(acc);
    };
    double lo = 0.0, hi = 1.0;
    while (residual(hi) > eps_) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) > eps_ ? lo : hi) = mid;
    }
    for (Eigen::Index i = 0; i < weight.size(); ++i) weight[i] = hi / (1.0 + hi * lambda_[i]);
  }
  return v - a_.adjoint() * (basis_ * (weight.cast<cplx>().asDiagonal() * c));
}

SolverResult bpdn_synthesis(const operators::LinearOperator& a, const CVector& b, double eps,
                            const SolverOptions& opts) {
  check_options(opts, eps);
  if (static_cast<std::size_t>(b.size()) != a.rows()) throw std::invalid_argument("bpdn_synthesis: b length != A.rows");
  const CMatrix am = a.materialize();
  const FeasibleSetProjector proj(am, b, eps);

  SolverResult res;
  MonotoneTracker track;
  if (opts.record_trace) track.trace = &res.objective_trace;

  CVector u = proj.project(CVector::Zero(static_cast<Eigen::Index>(a.cols())));
  const double tau = auto_threshold(u, opts.penalty);
  CVector w = u, d = CVector::Zero(u.size());
  track.offer(u, l1_norm(u));
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    const CVector u_next = proj.project(w - d);
    w = soft_threshold(u_next + d, tau);
    d += u_next - w;
    track.offer(u_next, l1_norm(u_next));
    const bool done = small_change(u_next, u, opts.tolerance) &&
                      (u_next - w).norm() <= opts.tolerance * std::max(u_next.norm(), 1e-300);
    u = u_next;
    res.iterations = it;
    res.primal_gap = (u - w).norm();
    if (done || u.norm() == 0.0) {
      res.converged = true;
      break;
    }
  }
  res.solution = track.best;
  res.objective = track.best_obj;
  res.residual = (am * res.solution - b).norm();
  return res;
}

SolverResult bpdn_analysis(const operators::LinearOperator& phi, const operators::LinearOperator& b_lift,
                           const CVector& b, double eps, const SolverOptions& opts) {
  check_options(opts, eps);
  if (static_cast<std::size_t>(b.size()) != phi.rows()) throw std::invalid_argument("bpdn_analysis: b length != Phi.rows");
  if (phi.cols() != b_lift.rows()) throw std::invalid_argument("bpdn_analysis: Phi.cols != B output dimension");
  const CMatrix pm = phi.materialize();
  const CMatrix bm = b_lift.materialize();  // n x N
  const CMatrix bh = bm.adjoint();
  const FeasibleSetProjector proj(pm, b, eps);
  const Eigen::LLT<CMatrix> normal(bm * bh + CMatrix::Identity(bm.rows(), bm.rows()));

  SolverResult res;
  MonotoneTracker track;
  if (opts.record_trace) track.trace = &res.objective_trace;

  CVector p = proj.project(CVector::Zero(static_cast<Eigen::Index>(phi.cols())));
  const double tau = auto_threshold(bh * p, opts.penalty);
  CVector z = p, w = bh * p;
  CVector d1 = CVector::Zero(w.size()), d2 = CVector::Zero(p.size());
  track.offer(p, l1_norm(bh * p));
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    const CVector z_next = normal.solve(bm * (w - d1) + (p - d2));
    const CVector bz = bh * z_next;
    w = soft_threshold(bz + d1, tau);
    const CVector p_next = proj.project(z_next + d2);
    d1 += bz - w;
    d2 += z_next - p_next;
    track.offer(p_next, l1_norm(bh * p_next));
    const double gap = std::sqrt((bz - w).squaredNorm() + (z_next - p_next).squaredNorm());
    const bool done = small_change(p_next, p, opts.tolerance) &&
                      gap <= opts.tolerance * std::max(p_next.norm(), 1e-300);
    p = p_next;
    z = z_next;
    res.iterations = it;
    res.primal_gap = gap;
    if (done || p.norm() == 0.0) {
      res.converged = true;
      break;
    }
  }
  res.solution = track.best;
  res.objective = track.best_obj;
  res.residual = (pm * res.solution - b).norm();
  return res;
}

RankOneFactor rank_one_factor(const CMatrix& m) {
  const double fro = m.norm();
  if (fro == 0.0) throw std::invalid_argument("rank_one_factor: M = 0");
  const auto eig = linalg::hermitian_eigen(m * m.adjoint());
  const Eigen::Index top = eig.values.size() - 1;
  const double sigma = std::sqrt(std::max(0.0, eig.values[top]));
  const CVector u = eig.vectors.col(top);
  RankOneFactor out;
  out.x = u * std::sqrt(sigma);
  out.y = m.transpose() * u.conjugate() / std::sqrt(sigma);
  Eigen::Index lead = 0;
  out.x.cwiseAbs().maxCoeff(&lead);
  const cplx phase = std::polar(1.0, -std::arg(out.x[lead]));
  out.x *= phase;
  out.y /= phase;
  out.x[lead] = std::abs(out.x[lead]);
  out.residual = (m - out.x * out.y.transpose()).norm() / fro;
  return out;
}

}  // namespace bilin::recovery
