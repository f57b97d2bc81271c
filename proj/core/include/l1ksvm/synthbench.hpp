#pragma once

#include <cstdint>

#include "l1ksvm/expression_matrix.hpp"

namespace l1ksvm {

// Omics-shaped synthetic dataset. Informative features carry a class mean of
// +/- effect_size (sign drawn per class and feature); the rest have mean zero
// in every class. All cells get N(0, noise_std^2) noise, and the whole matrix
// is then multiplied by `scale` (intensity units). With these defaults a pair
// of classes overlaps enough for accuracy to keep growing with training size,
// and the scale puts c = 0.01 in the regime where a handful of features enter
// at 10 samples per class.
struct BenchmarkSpec {
  std::size_t n_classes = 4;
  std::size_t n_per_class = 500;
  std::size_t n_features = 1184;
  std::size_t n_informative = 30;
  double effect_size = 1.5;
  double noise_std = 3.0;
  double scale = 5.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Class means (n_classes x n_features, already scaled) the generator uses.
Eigen::MatrixXd benchmark_means(const BenchmarkSpec& spec);

// Column indices of the informative features, ascending.
std::vector<std::size_t> benchmark_informative(const BenchmarkSpec& spec);

// Feature names are "hsa-syn-NNNN", classes "class_1".."class_k", samples
// grouped by class. Bit-identical for equal specs.
ExpressionMatrix generate_benchmark(const BenchmarkSpec& spec);

}  // namespace l1ksvm
