#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "polaronlab/least_squares.hpp"

using namespace polaronlab;
using namespace polaronlab::fit;

TEST(LeastSquares, LinearExact) {
  FitProblem p;
  p.model = [](double x, const VectorXd& a) { return a(0) * x; };
  for (int i = 1; i <= 10; ++i) {
    p.x.push_back(i);
    p.y.push_back(2.5 * i);
  }
  p.initial = VectorXd::Constant(1, 1.0);
  p.bounds = Bounds::unbounded(1);
  const auto r = least_squares(p);
  EXPECT_NEAR(r.parameters(0), 2.5, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(LeastSquares, WeightedLinearCovarianceOracle) {
  // straight line with known sigma: closed-form normal equations
  std::vector<double> x{0, 1, 2, 3, 4, 5}, y{1.1, 2.9, 5.2, 7.1, 8.8, 11.2}, s{0.1, 0.2, 0.1, 0.3, 0.2, 0.1};
  FitProblem p;
  p.model = [](double t, const VectorXd& a) { return a(0) + a(1) * t; };
  p.x = x;
  p.y = y;
  p.sigma = s;
  p.initial = VectorXd::Zero(2);
  p.bounds = Bounds::unbounded(2);
  const auto r = least_squares(p);
  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Eigen::Vector2d atb = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Eigen::Vector2d row(1.0 / s[i], x[i] / s[i]);
    ata += row * row.transpose();
    atb += row * (y[i] / s[i]);
  }
  const Eigen::Vector2d sol = ata.ldlt().solve(atb);
  const Eigen::Matrix2d cov = ata.inverse();
  EXPECT_NEAR((r.parameters - sol).norm(), 0.0, 1e-10);
  EXPECT_NEAR((r.covariance - cov).norm(), 0.0, 1e-8 * cov.norm());
}

TEST(LeastSquares, QuadraticSurfaceFewIterations) {
  const auto res = [](const VectorXd& a) {
    VectorXd r(3);
    r << a(0) - 1.0, 2.0 * (a(1) + 3.0), a(0) + a(1);
    return r;
  };
  const auto r = minimize(res, VectorXd::Constant(2, 10.0), Bounds::unbounded(2));
  EXPECT_LE(r.iterations, 3);
  EXPECT_TRUE(r.converged);
}

TEST(LeastSquares, Rosenbrock) {
  const auto res = [](const VectorXd& a) {
    VectorXd r(2);
    r << 10.0 * (a(1) - a(0) * a(0)), 1.0 - a(0);
    return r;
  };
  VectorXd start(2);
  start << -1.2, 1.0;
  LeastSquaresOptions o;
  o.max_iterations = 1000;
  o.gradient_tol = 1e-14;
  o.chi2_rel_tol = 0.0;
  const auto r = minimize(res, start, Bounds::unbounded(2), o);
  EXPECT_NEAR(r.parameters(0), 1.0, 1e-8);
  EXPECT_NEAR(r.parameters(1), 1.0, 1e-8);
}

TEST(LeastSquares, RespectsBounds) {
  FitProblem p;
  p.model = [](double x, const VectorXd& a) { return a(0) + a(1) * x; };
  p.x = {0, 1, 2, 3};
  p.y = {-1.0, 0.0, 1.0, 2.0};
  p.initial = VectorXd::Constant(2, 0.5);
  p.bounds = Bounds::non_negative(2);
  const auto r = least_squares(p);
  EXPECT_GE(r.parameters(0), 0.0);
  EXPECT_NEAR(r.parameters(0), 0.0, 1e-12);
  EXPECT_TRUE(p.bounds.contains(r.parameters));
}

TEST(LeastSquares, OrderInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.02);
  FitProblem p;
  p.model = [](double t, const VectorXd& a) { return a(0) * std::exp(-a(1) * t) + a(2); };
  for (int i = 0; i < 30; ++i) {
    p.x.push_back(0.2 * i);
    p.y.push_back(2.0 * std::exp(-0.7 * 0.2 * i) + 0.3 + n(rng));
    p.sigma.push_back(0.02);
  }
  p.initial = VectorXd::Constant(3, 1.0);
  p.bounds = Bounds::unbounded(3);
  const auto a = least_squares(p);

  std::vector<std::size_t> idx(p.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  FitProblem q = p;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    q.x[i] = p.x[idx[i]];
    q.y[i] = p.y[idx[i]];
  }
  const auto b = least_squares(q);
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_EQ(a.covariance, b.covariance);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(b.residuals(i), a.residuals(idx[i]));
}

TEST(LeastSquares, SingularAndValidation) {
  FitProblem p;
  p.model = [](double x, const VectorXd& a) { return (a(0) + a(1)) * x; };
  p.x = {1, 2, 3};
  p.y = {1, 2, 3};
  p.initial = VectorXd::Constant(2, 0.3);
  p.bounds = Bounds::unbounded(2);
  EXPECT_THROW(least_squares(p), FitError);
  p.options.allow_singular = true;
  const auto r = least_squares(p);
  EXPECT_TRUE(r.singular);
  EXPECT_NEAR(r.parameters(0) + r.parameters(1), 1.0, 1e-10);

  FitProblem bad = p;
  bad.y.pop_back();
  EXPECT_THROW(least_squares(bad), InvalidParameter);
  FitProblem neg = p;
  neg.sigma = {1.0, -1.0, 1.0};
  EXPECT_THROW(least_squares(neg), InvalidParameter);
}

TEST(LeastSquares, NonConvergenceReported) {
  const auto res = [](const VectorXd& a) {
    VectorXd r(2);
    r << 10.0 * (a(1) - a(0) * a(0)), 1.0 - a(0);
    return r;
  };
  VectorXd start(2);
  start << -1.2, 1.0;
  LeastSquaresOptions o;
  o.max_iterations = 2;
  EXPECT_THROW(minimize(res, start, Bounds::unbounded(2), o), FitError);
  o.require_convergence = false;
  const auto r = minimize(res, start, Bounds::unbounded(2), o);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.predicted_decrease, 0.0);
}

TEST(LeastSquares, NumericJacobian) {
  const auto res = [](const VectorXd& a) {
    VectorXd r(2);
    r << std::sin(a(0)) * a(1), a(0) * a(0);
    return r;
  };
  VectorXd p(2);
  p << 0.4, 2.0;
  const auto j = numeric_jacobian(res, p, Bounds::unbounded(2));
  EXPECT_NEAR(j(0, 0), std::cos(0.4) * 2.0, 1e-8);
  EXPECT_NEAR(j(0, 1), std::sin(0.4), 1e-8);
  EXPECT_NEAR(j(1, 0), 0.8, 1e-8);
  EXPECT_NEAR(j(1, 1), 0.0, 1e-12);
}
