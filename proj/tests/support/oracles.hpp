#pragma once

// Reference computations written independently of the library, used to check
// the solvers and the aggregation arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double log1pexp_neg(double t) { return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// c * sum_i log(1 + exp(-y_i (x_i.w + b)))
inline double logistic_loss(const Eigen::MatrixXd& x, const std::vector<double>& y, const Eigen::VectorXd& w,
                            double b, double c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += log1pexp_neg(y[i] * (x.row(i).dot(w) + b));
  return c * s;
}

// Central differences of f at theta, one coordinate at a time.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& theta, double h) {
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    Eigen::VectorXd up = theta, down = theta;
    up(k) += h;
    down(k) -= h;
    g(k) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

// Minimizer of a unimodal f on [a, b].
inline double golden_section(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double poly_kernel(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& z, double gamma, double coef0,
                          int degree) {
  return std::pow(gamma * x.dot(z) + coef0, degree);
}

inline Eigen::MatrixXd poly_gram(const Eigen::MatrixXd& rows, double gamma, double coef0, int degree) {
  Eigen::MatrixXd k(rows.rows(), rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < rows.rows(); ++j) k(i, j) = poly_kernel(rows.row(i), rows.row(j), gamma, coef0, degree);
  return k;
}

inline double svm_dual_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd ay = alpha.cwiseProduct(y);
  return alpha.sum() - 0.5 * ay.dot(k * ay);
}

// Euclidean projection onto {0 <= a <= C, y.a = 0}: a = clip(v - mu y) with mu
// found by bisection (y.a is non-increasing in mu).
inline Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& v, const Eigen::VectorXd& y, double box) {
  auto at = [&](double mu) { return (v - mu * y).cwiseMax(0.0).cwiseMin(box).eval(); };
  double lo = -1.0, hi = 1.0;
  while (y.dot(at(lo)) < 0) lo *= 2;
  while (y.dot(at(hi)) > 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (y.dot(at(mid)) > 0 ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

// Accelerated projected gradient ascent on the soft-margin dual. Returns alpha.
inline Eigen::VectorXd svm_dual_reference(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double box,
                                          int iters = 20000) {
  const Eigen::MatrixXd q = y.asDiagonal() * k * y.asDiagonal();
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  const double step = 1.0 / std::max(lmax, 1e-12);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(y.size()), z = a;
  double t = 1.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(y.size()) - q * z;
    const Eigen::VectorXd next = project_box_hyperplane(z + step * grad, y, box);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / tn) * (next - a);
    a = next;
    t = tn;
  }
  return a;
}

// Published per-size results: size, Acc, TP, TN, FP, FN, CV Acc (%).
struct TableRow {
  const char* method;
  int size;
  double acc, tp, tn, fp, fn, cv;
};

inline const std::vector<TableRow>& published_table() {
  static const std::vector<TableRow> rows{
      {"baseline", 10, 64.9, 32.74, 32.16, 17.26, 17.84, 61.2},
      {"baseline", 25, 73.7, 37.08, 36.64, 12.92, 13.35, 71.7},
      {"baseline", 100, 82.3, 41.82, 40.52, 8.17, 9.48, 81.8},
      {"baseline", 150, 83.6, 42.60, 41.02, 7.39, 8.97, 83.2},
      {"baseline", 250, 84.7, 43.24, 41.47, 6.75, 8.52, 84.6},
      {"baseline", 300, 85.0, 43.42, 41.60, 6.57, 8.39, 83.8},
      {"baseline", 350, 85.2, 43.54, 41.75, 6.45, 8.24, 84.1},
      {"noaug", 10, 58.0, 29.46, 28.58, 20.54, 21.42, 57.1},
      {"noaug", 25, 64.6, 32.40, 32.24, 17.60, 17.75, 62.0},
      {"noaug", 100, 74.5, 37.11, 37.41, 12.88, 12.58, 73.6},
      {"noaug", 150, 75.7, 37.73, 37.98, 12.26, 12.01, 76.3},
      {"noaug", 250, 76.5, 38.26, 38.28, 11.74, 11.71, 76.7},
      {"noaug", 300, 76.9, 38.25, 38.72, 11.74, 11.27, 79.1},
      {"noaug", 350, 76.7, 38.14, 38.64, 11.85, 11.35, 80.0},
      {"aug", 10, 64.8, 33.34, 31.48, 16.65, 18.52, 66.1},
      {"aug", 25, 69.0, 35.03, 34.05, 14.96, 15.94, 64.5},
      {"aug", 100, 74.7, 36.76, 37.95, 13.23, 12.04, 70.4},
      {"aug", 150, 76.4, 37.62, 38.84, 12.37, 11.15, 72.5},
      {"aug", 250, 78.8, 38.86, 39.94, 11.13, 10.05, 74.5},
      {"aug", 300, 79.6, 39.40, 40.28, 10.59, 9.71, 77.2},
      {"aug", 350, 80.4, 39.82, 40.61, 10.17, 9.39, 79.2},
  };
  return rows;
}

}  // namespace oracle
