#pragma once

#include <nlohmann/json.hpp>
#include <Eigen/Dense>

namespace l1ksvm {

enum class Scaling {
  zscore,  // subtract mean, divide by sample std
  center,  // subtract mean only
};

// Per-feature affine map x -> (x - mean) / scale, fitted on training rows.
// Constant columns get scale 1 and are flagged in `constant`.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::vector<bool> constant;

  static Standardizer fit(const Eigen::MatrixXd& x, Scaling scaling);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd transform_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

void to_json(nlohmann::json& j, const Standardizer& s);
void from_json(const nlohmann::json& j, Standardizer& s);

}  // namespace l1ksvm
