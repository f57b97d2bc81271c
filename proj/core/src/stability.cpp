#include "l1ksvm/stability.hpp"

#include "json_util.hpp"
#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

void StabilityParams::validate() const {
  if (n_runs < 1) throw ConfigError("stability: n_runs must be >= 1");
  if (!(occurrence_threshold > 0.0 && occurrence_threshold < 1.0))
    throw ConfigError("stability: occurrence_threshold must lie in (0, 1)");
  aug_params.validate();
}

std::vector<std::size_t> retain_by_frequency(const std::vector<int>& counts, int n_runs, double threshold) {
  const double cut = threshold * n_runs;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (static_cast<double>(counts[j]) > cut) kept.push_back(j);
  return kept;
}

std::uint64_t stability_run_seed(std::uint64_t seed, int run) noexcept {
  return mix_seed(seed, {0x5354414255ULL, static_cast<std::uint64_t>(run)});
}

StabilitySelection run_stability_selection(const ExpressionMatrix& train, const LassoParams& lasso_params,
                                           const StabilityParams& params, std::uint64_t seed) {
  params.validate();
  StabilitySelection sel;
  sel.n_runs = params.n_runs;
  sel.counts.assign(train.n_features(), 0);

  auto record = [&](const LassoModel& model, int multiplicity) {
    for (auto j : nonzero_features(model)) sel.counts[j] += multiplicity;
    if (!model.converged) sel.n_not_converged += multiplicity;
  };

  if (!params.augment) {
    record(fit_lasso(train, lasso_params), params.n_runs);
  } else {
    for (int r = 0; r < params.n_runs; ++r) {
      try {
        const auto synthetic = generate_synthetic(train, params.aug_params, stability_run_seed(seed, r));
        record(fit_lasso(concat_rows(train, synthetic), lasso_params), 1);
      } catch (const Error& e) {
        throw Error("stability run " + std::to_string(r) + ": " + e.what());
      }
    }
  }
  sel.retained = retain_by_frequency(sel.counts, sel.n_runs, params.occurrence_threshold);
  return sel;
}

nlohmann::json stability_to_json(const StabilitySelection& sel, const std::vector<std::string>& feature_names,
                                 const StabilityParams& params) {
  if (feature_names.size() != sel.counts.size()) throw Error("stability json: feature name count mismatch");
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t j = 0; j < sel.counts.size(); ++j)
    if (sel.counts[j] > 0) counts[feature_names[j]] = sel.counts[j];
  std::vector<std::string> retained;
  for (auto j : sel.retained) retained.push_back(feature_names[j]);
  return {{"format", "l1ksvm.stability_selection"},
          {"version", 1},
          {"n_runs", sel.n_runs},
          {"n_not_converged", sel.n_not_converged},
          {"counts", counts},
          {"retained", retained},
          {"params", params}};
}

void to_json(nlohmann::json& j, const AugmentationParams& p) {
  j = nlohmann::json{{"n_synthetic_per_class", p.n_synthetic_per_class}, {"noise_fraction", p.noise_fraction}};
}

void from_json(const nlohmann::json& j, AugmentationParams& p) {
  constexpr std::string_view where = "augmentation";
  detail::reject_unknown_keys(j, {"n_synthetic_per_class", "noise_fraction"}, where);
  detail::read_opt(j, "n_synthetic_per_class", p.n_synthetic_per_class, where);
  detail::read_opt(j, "noise_fraction", p.noise_fraction, where);
  p.validate();
}

void to_json(nlohmann::json& j, const StabilityParams& p) {
  j = nlohmann::json{{"n_runs", p.n_runs},
                     {"occurrence_threshold", p.occurrence_threshold},
                     {"augment", p.augment},
                     {"augmentation", p.aug_params}};
}

void from_json(const nlohmann::json& j, StabilityParams& p) {
  constexpr std::string_view where = "stability";
  detail::reject_unknown_keys(j, {"n_runs", "occurrence_threshold", "augment", "augmentation"}, where);
  detail::read_opt(j, "n_runs", p.n_runs, where);
  detail::read_opt(j, "occurrence_threshold", p.occurrence_threshold, where);
  detail::read_opt(j, "augment", p.augment, where);
  if (j.contains("augmentation")) p.aug_params = j.at("augmentation").get<AugmentationParams>();
  p.validate();
}

}  // namespace l1ksvm
