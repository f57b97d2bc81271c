#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1ksvm/augment.hpp"
#include "l1ksvm/lasso.hpp"

namespace l1ksvm {

struct StabilityParams {
  int n_runs = 20;
  // A feature is kept when its count strictly exceeds threshold * n_runs.
  double occurrence_threshold = 0.5;
  bool augment = true;
  AugmentationParams aug_params;

  void validate() const;
};

struct StabilitySelection {
  std::vector<int> counts;             // per feature, in [0, n_runs]
  std::vector<std::size_t> retained;   // ascending feature indices
  int n_runs = 0;
  int n_not_converged = 0;             // LASSO runs that hit max_iters
};

// Strict-majority style rule: retain j iff counts[j] > threshold * n_runs.
std::vector<std::size_t> retain_by_frequency(const std::vector<int>& counts, int n_runs, double threshold);

// Seed of run `run` for a selection seeded with `seed`.
std::uint64_t stability_run_seed(std::uint64_t seed, int run) noexcept;

// Repeats fit_lasso on the training rows, each run adding a freshly drawn
// synthetic set when params.augment is set, and counts nonzero coefficients.
// Without augmentation every run sees the same data and the deterministic
// solver returns the same support, so a single fit is counted n_runs times.
StabilitySelection run_stability_selection(const ExpressionMatrix& train, const LassoParams& lasso_params,
                                           const StabilityParams& params, std::uint64_t seed);

nlohmann::json stability_to_json(const StabilitySelection& sel, const std::vector<std::string>& feature_names,
                                 const StabilityParams& params);

void to_json(nlohmann::json& j, const StabilityParams& p);
void from_json(const nlohmann::json& j, StabilityParams& p);
void to_json(nlohmann::json& j, const AugmentationParams& p);
void from_json(const nlohmann::json& j, AugmentationParams& p);

}  // namespace l1ksvm
