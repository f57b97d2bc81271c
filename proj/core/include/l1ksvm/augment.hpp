#pragma once

#include <cstdint>
#include <string_view>

#include "l1ksvm/expression_matrix.hpp"

namespace l1ksvm {

struct AugmentationParams {
  std::size_t n_synthetic_per_class = 200;
  double noise_fraction = 0.10;

  void validate() const;
};

// Per-feature sample standard deviation (n - 1 denominator) over the rows of
// one class. A single-sample class yields zeros.
Eigen::VectorXd class_feature_std(const ExpressionMatrix& train, std::string_view class_label);
Eigen::VectorXd class_feature_std(const ExpressionMatrix& train, int cls);

// Gaussian-noise oversampling. For each class, base rows are drawn uniformly
// with replacement from that class and every feature j receives independent
// N(0, (noise_fraction * sigma_cj)^2) noise. Synthetic sample ids have the
// form "syn-<seed>-<k>".
ExpressionMatrix generate_synthetic(const ExpressionMatrix& train, const AugmentationParams& params,
                                    std::uint64_t seed);

}  // namespace l1ksvm
