#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1ksvm/ksvm.hpp"
#include "l1ksvm/lasso.hpp"
#include "l1ksvm/stability.hpp"

namespace l1ksvm {

enum class Method { l1ksvm_aug, l1ksvm_noaug, baseline_lasso };

std::string_view method_name(Method m) noexcept;
Method method_from_name(std::string_view name);

struct MethodConfig {
  Method method = Method::l1ksvm_aug;
  LassoParams lasso;
  StabilityParams stability;  // `augment` follows `method`
  KsvmParams ksvm;
  double baseline_c = 1.0;

  // Defaults for `m` with stability.augment set to match.
  static MethodConfig defaults(Method m);
  void validate() const;
};

// TP/TN/FP/FN with the second class of the scenario as positive.
struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0, n_test = 0;

  double accuracy() const noexcept {
    return n_test == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n_test);
  }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp; tn += o.tn; fp += o.fp; fn += o.fn; n_test += o.n_test;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

struct TrainedPipeline {
  Method method = Method::l1ksvm_aug;
  std::vector<std::string> selected_features;
  std::vector<std::size_t> selected_indices;
  std::variant<LassoModel, KsvmModel> classifier;
  std::optional<StabilitySelection> selection;
  std::uint64_t seed = 0;
  std::string config_digest;
  int lasso_not_converged = 0;
  bool classifier_converged = true;
};

// Throws NoFeaturesSelected when selection retains nothing.
TrainedPipeline train_pipeline(const ExpressionMatrix& train, const MethodConfig& cfg, std::uint64_t seed);

std::vector<std::string> predict_pipeline(const TrainedPipeline& p, const ExpressionMatrix& x);
ConfusionCounts evaluate_pipeline(const TrainedPipeline& p, const ExpressionMatrix& test);

// Stable digest of the method configuration (hex FNV-1a of its JSON form).
std::string config_digest(const MethodConfig& cfg);

nlohmann::json pipeline_to_json(const TrainedPipeline& p);
TrainedPipeline pipeline_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const KsvmParams& p);
void from_json(const nlohmann::json& j, KsvmParams& p);
void to_json(nlohmann::json& j, const MethodConfig& m);
void from_json(const nlohmann::json& j, MethodConfig& m);

}  // namespace l1ksvm
