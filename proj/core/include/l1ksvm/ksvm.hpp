#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1ksvm/expression_matrix.hpp"
#include "l1ksvm/standardizer.hpp"

namespace l1ksvm {

// K(x, z) = (gamma * x.z + coef0)^degree. An unset gamma is resolved at fit
// time to 1 / (p * mean feature variance of the standardized training rows).
struct KernelParams {
  int degree = 3;
  std::optional<double> gamma;
  double coef0 = 1.0;

  void validate() const;
};

struct KsvmParams {
  KernelParams kernel;
  double box_c = 1.0;
  double tol = 1e-3;
  int max_passes = 100;

  void validate() const;
};

struct KsvmModel {
  Eigen::MatrixXd support_vectors;  // standardized, restricted to feature_subset
  Eigen::VectorXd dual_coefs;       // 0 < alpha_i <= box_c
  Eigen::VectorXd sv_labels;        // +1 / -1
  std::vector<std::size_t> sv_rows; // training row of each support vector
  double bias = 0.0;
  KernelParams kernel;              // gamma always resolved
  double box_c = 1.0;
  Standardizer standardizer;        // over feature_subset columns
  std::vector<std::size_t> feature_subset;
  std::vector<std::string> feature_names;  // names of feature_subset columns
  std::size_t n_input_features = 0;
  std::array<std::string, 2> classes;      // {negative, positive}
  bool converged = false;
  long iterations = 0;
};

double kernel_eval(std::span<const double> x, std::span<const double> z, const KernelParams& k);
// G(i, j) = kernel_eval(row i, row j).
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& rows, const KernelParams& k);

// Soft-margin dual solved by SMO with maximal-violating-pair selection over
// the columns in feature_subset (all columns when empty).
KsvmModel fit_ksvm(const ExpressionMatrix& train, const KsvmParams& params,
                   std::span<const std::size_t> feature_subset = {});

// f(x) = sum_i alpha_i y_i K(sv_i, x) + b for a full-length raw row.
double decision_function(const KsvmModel& model, std::span<const double> x);
std::vector<double> decision_scores(const KsvmModel& model, const ExpressionMatrix& x);
// f >= 0 maps to the positive class.
std::vector<std::string> predict_ksvm(const KsvmModel& model, const ExpressionMatrix& x);

// sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij over the support vectors.
double dual_objective(const KsvmModel& model);

struct KktCertificate {
  bool ok = false;
  double max_violation = 0.0;
};

// Checks y_i f(x_i) against the margin for every training row: >= 1 - tol
// when alpha_i = 0, = 1 within tol when 0 < alpha_i < C, <= 1 + tol at C.
// `train` must be the matrix the model was fitted on.
KktCertificate check_kkt(const KsvmModel& model, const ExpressionMatrix& train, double tol);

nlohmann::json ksvm_to_json(const KsvmModel& model);
KsvmModel ksvm_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const KernelParams& p);
void from_json(const nlohmann::json& j, KernelParams& p);

}  // namespace l1ksvm
