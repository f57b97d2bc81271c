#pragma once

#include <string>
#include <vector>

#include "l1ksvm/expression_matrix.hpp"
#include "l1ksvm/rng.hpp"

namespace fixture {

inline std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Binary matrix; labels are 0 (negative, "neg") or 1 (positive, "pos").
inline l1ksvm::ExpressionMatrix binary(Eigen::MatrixXd x, std::vector<int> labels) {
  const auto n = static_cast<std::size_t>(x.rows()), p = static_cast<std::size_t>(x.cols());
  return l1ksvm::ExpressionMatrix(std::move(x), names("f", p), names("s", n), std::move(labels), {"neg", "pos"});
}

// n_per_class rows per class; the first `informative` features are shifted
// by +/- shift/2 between the classes.
inline l1ksvm::ExpressionMatrix random_binary(std::size_t n_per_class, std::size_t p, std::uint64_t seed,
                                             double shift = 1.0, std::size_t informative = 2) {
  l1ksvm::Rng rng(seed);
  const std::size_t n = 2 * n_per_class;
  Eigen::MatrixXd x(n, p);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i < n_per_class ? 0 : 1;
    for (std::size_t j = 0; j < p; ++j) {
      x(i, j) = rng.normal();
      if (j < informative) x(i, j) += (labels[i] ? 0.5 : -0.5) * shift;
    }
  }
  return binary(std::move(x), std::move(labels));
}

}  // namespace fixture
