#include "l1ksvm/standardizer.hpp"

#include <cmath>

#include "l1ksvm/error.hpp"

namespace l1ksvm {

Standardizer Standardizer::fit(const Eigen::MatrixXd& x, Scaling scaling) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Standardizer s;
  s.mean = Eigen::VectorXd::Zero(p);
  s.scale = Eigen::VectorXd::Ones(p);
  s.constant.assign(static_cast<std::size_t>(p), true);
  if (n == 0) return s;
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = x.col(j);
    const double first = col(0);
    bool constant = true;
    for (Eigen::Index i = 1; i < n && constant; ++i) constant = col(i) == first;
    s.constant[j] = constant;
    if (constant) {
      s.mean(j) = first;
      continue;
    }
    const double m = col.mean();
    s.mean(j) = m;
    if (scaling == Scaling::zscore && n > 1) {
      const double var = (col.array() - m).square().sum() / static_cast<double>(n - 1);
      const double sd = std::sqrt(var);
      if (sd > 0.0) s.scale(j) = sd;
    }
  }
  return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw Error("standardizer: feature count mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out.col(j) = (x.col(j).array() - mean(j)) / scale(j);
  return out;
}

Eigen::VectorXd Standardizer::transform_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  if (x.size() != mean.size()) throw Error("standardizer: feature count mismatch");
  return ((x.transpose().array() - mean.array()) / scale.array()).matrix();
}

void to_json(nlohmann::json& j, const Standardizer& s) {
  j = nlohmann::json{{"mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size())},
                     {"scale", std::vector<double>(s.scale.data(), s.scale.data() + s.scale.size())},
                     {"constant", s.constant}};
}

void from_json(const nlohmann::json& j, Standardizer& s) {
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto scale = j.at("scale").get<std::vector<double>>();
  if (mean.size() != scale.size()) throw Error("standardizer json: mean/scale length mismatch");
  s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  s.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));
  s.constant = j.at("constant").get<std::vector<bool>>();
}

}  // namespace l1ksvm
