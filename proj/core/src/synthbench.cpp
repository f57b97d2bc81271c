#include "l1ksvm/synthbench.hpp"

#include <cstdio>

#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

namespace {

enum Stream : std::uint64_t { kPlacement = 1, kSigns = 2, kNoise = 3 };

std::string numbered(const char* prefix, std::size_t k, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, k);
  return buf;
}

}  // namespace

void BenchmarkSpec::validate() const {
  if (n_classes < 2) throw ConfigError("benchmark: n_classes must be >= 2");
  if (n_per_class < 1) throw ConfigError("benchmark: n_per_class must be >= 1");
  if (n_features < 1) throw ConfigError("benchmark: n_features must be >= 1");
  if (n_informative > n_features) throw ConfigError("benchmark: n_informative exceeds n_features");
  if (!(effect_size >= 0.0)) throw ConfigError("benchmark: effect_size must be >= 0");
  if (!(noise_std > 0.0)) throw ConfigError("benchmark: noise_std must be > 0");
  if (!(scale > 0.0)) throw ConfigError("benchmark: scale must be > 0");
}

std::vector<std::size_t> benchmark_informative(const BenchmarkSpec& spec) {
  spec.validate();
  Rng rng(mix_seed(spec.seed, {kPlacement}));
  return sample_without_replacement(rng, spec.n_features, spec.n_informative);
}

Eigen::MatrixXd benchmark_means(const BenchmarkSpec& spec) {
  const auto informative = benchmark_informative(spec);
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(spec.n_classes, spec.n_features);
  Rng rng(mix_seed(spec.seed, {kSigns}));
  const double shift = spec.effect_size * spec.scale;
  for (auto j : informative)
    for (std::size_t c = 0; c < spec.n_classes; ++c) mu(c, j) = (rng.next() >> 63) ? shift : -shift;
  return mu;
}

ExpressionMatrix generate_benchmark(const BenchmarkSpec& spec) {
  const Eigen::MatrixXd mu = benchmark_means(spec);
  const std::size_t n = spec.n_classes * spec.n_per_class;
  Eigen::MatrixXd values(n, spec.n_features);
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(n);
  labels.reserve(n);
  Rng rng(mix_seed(spec.seed, {kNoise}));
  const double noise = spec.noise_std * spec.scale;
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    for (std::size_t k = 0; k < spec.n_per_class; ++k, ++row) {
      for (std::size_t j = 0; j < spec.n_features; ++j) values(row, j) = mu(c, j) + noise * rng.normal();
      ids.push_back(numbered("s", row + 1, 5));
      labels.push_back(static_cast<int>(c));
    }
  }
  std::vector<std::string> features;
  features.reserve(spec.n_features);
  for (std::size_t j = 0; j < spec.n_features; ++j) features.push_back(numbered("hsa-syn-", j + 1, 4));
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < spec.n_classes; ++c) classes.push_back(numbered("class_", c + 1, 1));
  return ExpressionMatrix(std::move(values), std::move(features), std::move(ids), std::move(labels),
                          std::move(classes));
}

}  // namespace l1ksvm
