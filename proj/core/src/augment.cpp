#include "l1ksvm/augment.hpp"

#include <cmath>
#include <cstdio>

#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

void AugmentationParams::validate() const {
  if (!(noise_fraction > 0.0 && noise_fraction <= 1.0))
    throw ConfigError("augmentation: noise_fraction must lie in (0, 1]");
}

Eigen::VectorXd class_feature_std(const ExpressionMatrix& train, int cls) {
  const auto rows = train.rows_of_class(cls);
  if (rows.empty()) throw Error("class_feature_std: class has no samples");
  const Eigen::Index p = static_cast<Eigen::Index>(train.n_features());
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(p);
  if (rows.size() < 2) return sd;
  const auto& v = train.values();
  for (Eigen::Index j = 0; j < p; ++j) {
    double mean = 0.0;
    for (auto i : rows) mean += v(i, j);
    mean /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (auto i : rows) ss += (v(i, j) - mean) * (v(i, j) - mean);
    sd(j) = std::sqrt(ss / static_cast<double>(rows.size() - 1));
  }
  return sd;
}

Eigen::VectorXd class_feature_std(const ExpressionMatrix& train, std::string_view class_label) {
  const int cls = train.class_index(class_label);
  if (cls < 0) throw Error("class_feature_std: class '" + std::string(class_label) + "' absent");
  return class_feature_std(train, cls);
}

ExpressionMatrix generate_synthetic(const ExpressionMatrix& train, const AugmentationParams& params,
                                    std::uint64_t seed) {
  params.validate();
  const std::size_t per_class = params.n_synthetic_per_class;
  const std::size_t n = per_class * train.n_classes();
  const Eigen::Index p = static_cast<Eigen::Index>(train.n_features());
  Eigen::MatrixXd values(n, p);
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(n);
  labels.reserve(n);

  Rng rng(seed);
  char prefix[40];
  std::snprintf(prefix, sizeof prefix, "syn-%016llx-", static_cast<unsigned long long>(seed));
  std::size_t row = 0;
  for (std::size_t c = 0; c < train.n_classes(); ++c) {
    const auto rows = train.rows_of_class(static_cast<int>(c));
    if (rows.empty()) throw Error("generate_synthetic: class '" + train.class_names()[c] + "' is empty");
    if (per_class == 0) continue;
    const Eigen::VectorXd scale = params.noise_fraction * class_feature_std(train, static_cast<int>(c));
    for (std::size_t k = 0; k < per_class; ++k, ++row) {
      const auto base = rows[rng.below(rows.size())];
      for (Eigen::Index j = 0; j < p; ++j) values(row, j) = train.values()(base, j) + scale(j) * rng.normal();
      ids.push_back(prefix + std::to_string(row));
      labels.push_back(static_cast<int>(c));
    }
  }
  return ExpressionMatrix(std::move(values), train.feature_names(), std::move(ids), std::move(labels),
                          train.class_names());
}

}  // namespace l1ksvm
