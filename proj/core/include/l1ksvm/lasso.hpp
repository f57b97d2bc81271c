#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1ksvm/expression_matrix.hpp"
#include "l1ksvm/standardizer.hpp"

namespace l1ksvm {

struct LassoParams {
  // Multiplier on the data-fit term: J(w, b) = |w|_1 + c * sum_i log(1 + exp(-y_i (w.x_i + b))).
  double inverse_reg_c = 0.01;
  int max_iters = 500;
  // Stop once the first-order optimality violation drops to this level.
  double tolerance = 1e-5;
  bool fit_intercept = true;
  Scaling scaling = Scaling::center;

  void validate() const;
};

// Sparse logistic classifier; weights live in the standardized feature space.
struct LassoModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  LassoParams params;
  Standardizer standardizer;
  std::vector<std::string> feature_names;
  std::array<std::string, 2> classes;  // {negative, positive}
  bool converged = false;
  int iterations = 0;
  double max_violation = 0.0;
};

// Objective value after each solver pass; only filled when requested.
struct LassoTrace {
  std::vector<double> objective;
};

// Proximal Newton with a coordinate-descent inner solver (soft thresholding on
// the quadratic model) and an Armijo backtracking line search. Coordinates
// left at zero are exact zeros.
LassoModel fit_lasso(const ExpressionMatrix& train, const LassoParams& params, LassoTrace* trace = nullptr);

std::vector<double> lasso_scores(const LassoModel& model, const ExpressionMatrix& x);
// score >= 0 maps to the positive class.
std::vector<std::string> predict_lasso(const LassoModel& model, const ExpressionMatrix& x);
std::vector<std::size_t> nonzero_features(const LassoModel& model);

struct LogisticGradient {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};

// Smooth part c * sum log(1 + exp(-y (w.x + b))) on already standardized rows.
double logistic_loss(const Eigen::MatrixXd& xs, std::span<const double> y, const Eigen::VectorXd& w, double b,
                     double c);
LogisticGradient logistic_loss_gradient(const Eigen::MatrixXd& xs, std::span<const double> y,
                                        const Eigen::VectorXd& w, double b, double c);

// Full objective of `model` on raw rows x (standardized with the model's map).
double lasso_objective(const LassoModel& model, const ExpressionMatrix& x, std::span<const double> y);

struct OptimalityCertificate {
  bool ok = false;
  double max_violation = 0.0;
};

// Subgradient conditions: |g_j| <= 1 where w_j == 0, g_j = -sign(w_j) otherwise,
// and g_b = 0 for a fitted intercept, each within tol.
OptimalityCertificate check_optimality(const LassoModel& model, const ExpressionMatrix& x, std::span<const double> y,
                                       double tol);

nlohmann::json lasso_to_json(const LassoModel& model);
LassoModel lasso_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const LassoParams& p);
void from_json(const nlohmann::json& j, LassoParams& p);

}  // namespace l1ksvm
