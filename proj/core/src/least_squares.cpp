#include "polaronlab/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace polaronlab::fit {

using detail::require;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double chi2_of(const VectorXd& r) { return r.squaredNorm(); }

VectorXd evaluate(const ResidualFn& f, const VectorXd& p) {
  VectorXd r = f(p);
  if (!r.allFinite()) throw FitError("residuals are not finite");
  return r;
}

// Largest projection of the residual vector on a unit Jacobian column,
// relative to max(1, chi^2), ignoring components that point out of an
// active bound. Free of parameter units; at a minimizer it falls to the
// round-off level of chi^2.
double scaled_gradient(const MatrixXd& j, const VectorXd& r, const VectorXd& p, const Bounds& b) {
  const double chi2 = std::max(1.0, r.squaredNorm());
  const VectorXd g = j.transpose() * r;
  double norm = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    // moving along -g would leave the box: that component is not a descent direction
    if (p[i] <= b.lower[i] && g[i] > 0.0) continue;
    if (p[i] >= b.upper[i] && g[i] < 0.0) continue;
    const double cn = j.col(i).norm();
    if (cn > 0.0) norm = std::max(norm, std::abs(g[i]) / (cn * chi2));
  }
  return norm;
}

}  // namespace

Bounds Bounds::unbounded(Eigen::Index n) {
  return {VectorXd::Constant(n, -kInf), VectorXd::Constant(n, kInf)};
}

Bounds Bounds::non_negative(Eigen::Index n) {
  return {VectorXd::Zero(n), VectorXd::Constant(n, kInf)};
}

bool Bounds::contains(const VectorXd& p) const {
  return p.size() == lower.size() && (p.array() >= lower.array()).all() &&
         (p.array() <= upper.array()).all();
}

VectorXd Bounds::project(const VectorXd& p) const { return p.cwiseMax(lower).cwiseMin(upper); }

VectorXd FitResult::standard_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }

MatrixXd numeric_jacobian(const ResidualFn& r, const VectorXd& p, const Bounds& b) {
  const VectorXd r0 = evaluate(r, p);
  MatrixXd j(r0.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = std::max(1e-6 * std::abs(p[i]), 1e-9);
    VectorXd lo = p, hi = p;
    hi[i] = std::min(p[i] + h, b.upper[i]);
    lo[i] = std::max(p[i] - h, b.lower[i]);
    const double span = hi[i] - lo[i];
    if (span <= 0.0) {
      j.col(i).setZero();
      continue;
    }
    if (lo[i] == p[i]) {
      j.col(i) = (evaluate(r, hi) - r0) / span;
    } else if (hi[i] == p[i]) {
      j.col(i) = (r0 - evaluate(r, lo)) / span;
    } else {
      j.col(i) = (evaluate(r, hi) - evaluate(r, lo)) / span;
    }
  }
  return j;
}

// Solves the damped normal equations over the active parameters. Any that
// would leave the box are clamped to the bound and the rest re-solved with
// them held there, so the step stays a descent direction.
VectorXd bounded_step(const MatrixXd& a, const VectorXd& ga, const std::vector<Eigen::Index>& act,
                      const VectorXd& p, const Bounds& bounds) {
  const auto na = static_cast<Eigen::Index>(act.size());
  std::vector<bool> clamped(static_cast<std::size_t>(na), false);
  VectorXd sa = VectorXd::Zero(na);
  for (Eigen::Index pass = 0; pass <= na; ++pass) {
    std::vector<Eigen::Index> fr;
    for (Eigen::Index k = 0; k < na; ++k) {
      if (!clamped[static_cast<std::size_t>(k)]) fr.push_back(k);
    }
    const auto nf = static_cast<Eigen::Index>(fr.size());
    if (nf == 0) break;
    MatrixXd af(nf, nf);
    VectorXd rhs(nf);
    for (Eigen::Index u = 0; u < nf; ++u) {
      rhs[u] = -ga[fr[u]];
      for (Eigen::Index k = 0; k < na; ++k) {
        if (clamped[static_cast<std::size_t>(k)]) rhs[u] -= a(fr[u], k) * sa[k];
      }
      for (Eigen::Index v = 0; v < nf; ++v) af(u, v) = a(fr[u], fr[v]);
    }
    const VectorXd sf = af.ldlt().solve(rhs);
    bool changed = false;
    for (Eigen::Index u = 0; u < nf; ++u) {
      const Eigen::Index k = fr[u], i = act[k];
      sa[k] = sf[u];
      const double target = p[i] + sf[u];
      if (target < bounds.lower[i] || target > bounds.upper[i]) {
        sa[k] = std::clamp(target, bounds.lower[i], bounds.upper[i]) - p[i];
        clamped[static_cast<std::size_t>(k)] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  VectorXd step = VectorXd::Zero(p.size());
  for (Eigen::Index k = 0; k < na; ++k) step[act[k]] = sa[k];
  return step;
}

FitResult minimize(const ResidualFn& residuals, const VectorXd& initial, const Bounds& bounds,
                   const LeastSquaresOptions& opts) {
  return minimize(residuals, JacobianFn{}, initial, bounds, opts);
}

FitResult minimize(const ResidualFn& residuals, const JacobianFn& jacobian,
                   const VectorXd& initial, const Bounds& bounds,
                   const LeastSquaresOptions& opts) {
  require(bounds.lower.size() == initial.size() && bounds.upper.size() == initial.size(),
          "bounds do not match the parameter count");
  require(bounds.contains(initial), "initial guess lies outside the bounds");
  require(opts.max_iterations > 0, "max_iterations must be > 0");

  FitResult out;
  VectorXd p = initial;
  VectorXd r = evaluate(residuals, p);
  double chi2 = chi2_of(r);
  const double chi2_floor = 1e-24 * chi2;  // exact data: stop at round-off level
  double lambda = opts.initial_damping;
  auto jacobian_at = [&](const VectorXd& x) {
    MatrixXd out = jacobian ? jacobian(x) : numeric_jacobian(residuals, x, bounds);
    if (out.rows() != r.size() || out.cols() != x.size() || !out.allFinite()) {
      throw FitError("Jacobian has the wrong shape or is not finite");
    }
    return out;
  };
  MatrixXd j = jacobian_at(p);
  bool small_change = false;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    out.gradient_norm = scaled_gradient(j, r, p, bounds);
    if (out.gradient_norm < opts.gradient_tol && (small_change || chi2 == 0.0)) {
      out.converged = true;
      break;
    }
    const VectorXd g = j.transpose() * r;
    // Active set: fixed parameters and those held at a bound by the gradient
    // stay put; the damped normal equations are solved for the rest.
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (bounds.lower[i] == bounds.upper[i]) continue;
      if (p[i] <= bounds.lower[i] && g[i] > 0.0) continue;
      if (p[i] >= bounds.upper[i] && g[i] < 0.0) continue;
      act.push_back(i);
    }
    const auto na = static_cast<Eigen::Index>(act.size());
    MatrixXd ja(j.rows(), na);
    VectorXd ga(na);
    for (Eigen::Index k = 0; k < na; ++k) {
      ja.col(k) = j.col(act[k]);
      ga[k] = g[act[k]];
    }
    const MatrixXd jtj = ja.transpose() * ja;
    if (na > 0) {
      const VectorXd d = jtj.diagonal().cwiseSqrt().cwiseMax(1e-300).cwiseInverse();
      const MatrixXd eq = d.asDiagonal() * jtj * d.asDiagonal();
      const VectorXd gd = d.cwiseProduct(ga);
      const double edm = 0.5 * gd.dot(eq.completeOrthogonalDecomposition().solve(gd));
      out.predicted_decrease = edm;
      if (opts.edm_tol > 0.0 && edm < opts.edm_tol) {
        out.converged = true;
        break;
      }
    }
    const double diag_floor =
        1e-6 * std::max(1e-300, na > 0 ? jtj.diagonal().maxCoeff() : 1.0);

    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted && na > 0; ++attempt) {
      MatrixXd a = jtj;
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        a(i, i) += lambda * std::max(jtj(i, i), diag_floor);
      }
      const VectorXd step = bounded_step(a, ga, act, p, bounds);
      const VectorXd trial = bounds.project(p + step);
      if (trial == p) break;
      const VectorXd r_trial = evaluate(residuals, trial);
      const double chi2_trial = chi2_of(r_trial);
      if (chi2_trial <= chi2) {
        const double change = chi2 - chi2_trial;
        small_change = change <= opts.chi2_rel_tol * chi2 || chi2_trial <= chi2_floor;
        p = trial;
        r = r_trial;
        chi2 = chi2_trial;
        lambda = std::max(lambda * opts.damping_decrease, 1e-15);
        accepted = true;
      } else {
        lambda *= opts.damping_increase;
      }
    }
    if (!accepted) {
      // no downhill step exists at any damping: p is a (bounded) minimizer to
      // working precision
      small_change = true;
      out.gradient_norm = scaled_gradient(j, r, p, bounds);
      out.converged = out.gradient_norm < opts.gradient_tol;
      ++it;
      break;
    }
    j = jacobian_at(p);
  }
  if (!out.converged && it >= opts.max_iterations) {
    out.gradient_norm = scaled_gradient(j, r, p, bounds);
  }

  out.parameters = p;
  out.residuals = r;
  out.chi_square = chi2;
  out.iterations = it;

  // Condition of the column-equilibrated normal matrix over the free
  // parameters (lower < upper), so that parameter units do not count as
  // degeneracy. Fixed parameters get zero variance.
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (bounds.lower[i] < bounds.upper[i]) free.push_back(i);
  }
  const auto nf = static_cast<Eigen::Index>(free.size());
  MatrixXd jf(j.rows(), nf);
  for (Eigen::Index k = 0; k < nf; ++k) jf.col(k) = j.col(free[k]);
  const MatrixXd jtj = jf.transpose() * jf;
  VectorXd d = jtj.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) d[i] = 1.0;
  }
  const MatrixXd scaled = d.cwiseInverse().asDiagonal() * jtj * d.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(scaled);
  const VectorXd ev = eig.eigenvalues();
  const double ev_max = nf > 0 ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  const double ev_min = nf > 0 ? std::max(ev.minCoeff(), 0.0) : 0.0;
  out.condition_number = nf == 0 ? 1.0 : ev_min > 0.0 ? ev_max / ev_min : kInf;
  out.singular = !(out.condition_number < opts.singular_condition);
  // pseudo-inverse: directions with eigenvalue below the cutoff carry no information
  VectorXd inv = VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > ev_max / opts.singular_condition && ev[i] > 0.0) inv[i] = 1.0 / ev[i];
  }
  const MatrixXd cov_free = d.cwiseInverse().asDiagonal() * eig.eigenvectors() *
                            inv.asDiagonal() * eig.eigenvectors().transpose() *
                            d.cwiseInverse().asDiagonal();
  out.covariance = MatrixXd::Zero(p.size(), p.size());
  for (Eigen::Index a = 0; a < nf; ++a) {
    for (Eigen::Index b = 0; b < nf; ++b) out.covariance(free[a], free[b]) = cov_free(a, b);
  }

  if (out.singular && !opts.allow_singular) {
    std::ostringstream msg;
    msg << "singular normal equations (condition estimate " << out.condition_number << ")";
    throw FitError(msg.str(), out.condition_number);
  }
  if (!out.converged && opts.require_convergence) {
    std::ostringstream msg;
    msg << "least squares did not converge in " << it << " iterations (gradient "
        << out.gradient_norm << ", predicted decrease " << out.predicted_decrease << ")";
    throw FitError(msg.str(), out.condition_number);
  }
  return out;
}

void FitProblem::validate() const {
  require(static_cast<bool>(model), "fit problem needs a model");
  require(!x.empty(), "fit data must not be empty");
  require(x.size() == y.size(), "x and y differ in length");
  require(sigma.empty() || sigma.size() == x.size(), "sigma must match the data length");
  for (double s : sigma) require(s > 0.0, "sigma_y must be > 0");
  require(bounds.contains(initial), "bounds must contain the initial guess");
}

FitResult least_squares(const FitProblem& p) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(p.x.size());
  // Evaluate in a canonical point order so that reordering the data cannot
  // change the floating-point result.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  auto sig = [&](Eigen::Index i) { return p.sigma.empty() ? 1.0 : p.sigma[i]; };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::tuple(p.x[a], p.y[a], sig(a)) < std::tuple(p.x[b], p.y[b], sig(b));
  });
  ResidualFn r = [&](const VectorXd& params) {
    VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = order[static_cast<std::size_t>(k)];
      out[k] = (p.y[i] - p.model(p.x[i], params)) / sig(i);
    }
    return out;
  };
  FitResult res = minimize(r, p.initial, p.bounds, p.options);
  VectorXd back(n);
  for (Eigen::Index k = 0; k < n; ++k) back[order[static_cast<std::size_t>(k)]] = res.residuals[k];
  res.residuals = back;
  return res;
}

}  // namespace polaronlab::fit
