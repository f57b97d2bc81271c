#include "l1ksvm/pipeline.hpp"

#include <cstdio>

#include "json_util.hpp"
#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

namespace {

enum SeedTag : std::uint64_t { kSelection = 11, kFinalAugmentation = 12 };

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::l1ksvm_aug: return "l1ksvm_aug";
    case Method::l1ksvm_noaug: return "l1ksvm_noaug";
    case Method::baseline_lasso: return "baseline_lasso";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  for (auto m : {Method::l1ksvm_aug, Method::l1ksvm_noaug, Method::baseline_lasso})
    if (method_name(m) == name) return m;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

MethodConfig MethodConfig::defaults(Method m) {
  MethodConfig cfg;
  cfg.method = m;
  cfg.stability.augment = (m == Method::l1ksvm_aug);
  return cfg;
}

void MethodConfig::validate() const {
  lasso.validate();
  stability.validate();
  ksvm.validate();
  if (!(baseline_c > 0.0)) throw ConfigError("method: baseline_c must be > 0");
  if (method == Method::l1ksvm_aug && !stability.augment)
    throw ConfigError("method l1ksvm_aug requires stability.augment = true");
  if (method == Method::l1ksvm_noaug && stability.augment)
    throw ConfigError("method l1ksvm_noaug requires stability.augment = false");
}

TrainedPipeline train_pipeline(const ExpressionMatrix& train, const MethodConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (train.n_classes() != 2) throw Error("train_pipeline: training set must be binary");
  if (train.class_count(0) < 2 || train.class_count(1) < 2)
    throw Error("train_pipeline: need at least two samples per class");

  TrainedPipeline p;
  p.method = cfg.method;
  p.seed = seed;
  p.config_digest = config_digest(cfg);

  if (cfg.method == Method::baseline_lasso) {
    LassoParams lp = cfg.lasso;
    lp.inverse_reg_c = cfg.baseline_c;
    LassoModel model = fit_lasso(train, lp);
    p.selected_indices = nonzero_features(model);
    p.lasso_not_converged = model.converged ? 0 : 1;
    p.classifier_converged = model.converged;
    if (p.selected_indices.empty()) throw NoFeaturesSelected();
    p.classifier = std::move(model);
  } else {
    auto sel = run_stability_selection(train, cfg.lasso, cfg.stability, mix_seed(seed, {kSelection}));
    p.lasso_not_converged = sel.n_not_converged;
    p.selected_indices = sel.retained;
    p.selection = std::move(sel);
    if (p.selected_indices.empty()) throw NoFeaturesSelected();
    KsvmModel model;
    if (cfg.method == Method::l1ksvm_aug) {
      const auto synthetic =
          generate_synthetic(train, cfg.stability.aug_params, mix_seed(seed, {kFinalAugmentation}));
      model = fit_ksvm(concat_rows(train, synthetic), cfg.ksvm, p.selected_indices);
    } else {
      model = fit_ksvm(train, cfg.ksvm, p.selected_indices);
    }
    p.classifier_converged = model.converged;
    p.classifier = std::move(model);
  }
  for (auto j : p.selected_indices) p.selected_features.push_back(train.feature_names()[j]);
  return p;
}

std::vector<std::string> predict_pipeline(const TrainedPipeline& p, const ExpressionMatrix& x) {
  return std::visit(
      [&](const auto& model) -> std::vector<std::string> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LassoModel>)
          return predict_lasso(model, x);
        else
          return predict_ksvm(model, x);
      },
      p.classifier);
}

ConfusionCounts evaluate_pipeline(const TrainedPipeline& p, const ExpressionMatrix& test) {
  if (test.n_samples() == 0) throw Error("evaluate_pipeline: empty test set");
  const auto& classes = std::visit([](const auto& m) -> const std::array<std::string, 2>& { return m.classes; },
                                   p.classifier);
  for (const auto& name : test.class_names())
    if (name != classes[0] && name != classes[1])
      throw Error("evaluate_pipeline: test label '" + name + "' was not seen in training");
  const auto predicted = predict_pipeline(p, test);
  ConfusionCounts cc;
  cc.n_test = test.n_samples();
  for (std::size_t i = 0; i < test.n_samples(); ++i) {
    const bool truth = test.label_name(i) == classes[1];
    const bool guess = predicted[i] == classes[1];
    if (truth && guess) ++cc.tp;
    else if (!truth && !guess) ++cc.tn;
    else if (guess) ++cc.fp;
    else ++cc.fn;
  }
  return cc;
}

std::string config_digest(const MethodConfig& cfg) {
  const std::string text = nlohmann::json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

void to_json(nlohmann::json& j, const KsvmParams& p) {
  j = nlohmann::json{{"kernel", p.kernel}, {"box_c", p.box_c}, {"tol", p.tol}, {"max_passes", p.max_passes}};
}

void from_json(const nlohmann::json& j, KsvmParams& p) {
  constexpr std::string_view where = "ksvm";
  detail::reject_unknown_keys(j, {"kernel", "box_c", "tol", "max_passes"}, where);
  if (j.contains("kernel")) p.kernel = j.at("kernel").get<KernelParams>();
  detail::read_opt(j, "box_c", p.box_c, where);
  detail::read_opt(j, "tol", p.tol, where);
  detail::read_opt(j, "max_passes", p.max_passes, where);
  p.validate();
}

void to_json(nlohmann::json& j, const MethodConfig& m) {
  j = nlohmann::json{{"method", method_name(m.method)},
                     {"lasso", m.lasso},
                     {"stability", m.stability},
                     {"ksvm", m.ksvm},
                     {"baseline_c", m.baseline_c}};
}

void from_json(const nlohmann::json& j, MethodConfig& m) {
  constexpr std::string_view where = "method";
  detail::reject_unknown_keys(j, {"method", "lasso", "stability", "ksvm", "baseline_c"}, where);
  if (!j.contains("method") || !j.at("method").is_string()) throw ConfigError("method: 'method' name is required");
  m = MethodConfig::defaults(method_from_name(j.at("method").get<std::string>()));
  if (j.contains("lasso")) m.lasso = j.at("lasso").get<LassoParams>();
  if (j.contains("stability")) {
    auto s = j.at("stability");
    if (!s.contains("augment") && s.is_object()) s["augment"] = m.stability.augment;
    m.stability = s.get<StabilityParams>();
  }
  if (j.contains("ksvm")) m.ksvm = j.at("ksvm").get<KsvmParams>();
  detail::read_opt(j, "baseline_c", m.baseline_c, where);
  m.validate();
}

nlohmann::json pipeline_to_json(const TrainedPipeline& p) {
  nlohmann::json j{{"format", "l1ksvm.pipeline"},
                   {"version", 1},
                   {"method", method_name(p.method)},
                   {"selected_features", p.selected_features},
                   {"selected_indices", p.selected_indices},
                   {"seed", p.seed},
                   {"config_digest", p.config_digest},
                   {"lasso_not_converged", p.lasso_not_converged},
                   {"classifier_converged", p.classifier_converged}};
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LassoModel>)
          j["classifier"] = lasso_to_json(model);
        else
          j["classifier"] = ksvm_to_json(model);
      },
      p.classifier);
  return j;
}

TrainedPipeline pipeline_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "l1ksvm.pipeline") throw Error("pipeline json: wrong format tag");
  if (j.value("version", 0) != 1) throw Error("pipeline json: unsupported version");
  TrainedPipeline p;
  p.method = method_from_name(j.at("method").get<std::string>());
  p.selected_features = j.at("selected_features").get<std::vector<std::string>>();
  p.selected_indices = j.at("selected_indices").get<std::vector<std::size_t>>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.config_digest = j.at("config_digest").get<std::string>();
  p.lasso_not_converged = j.at("lasso_not_converged").get<int>();
  p.classifier_converged = j.at("classifier_converged").get<bool>();
  const auto& c = j.at("classifier");
  if (p.method == Method::baseline_lasso)
    p.classifier = lasso_from_json(c);
  else
    p.classifier = ksvm_from_json(c);
  return p;
}

}  // namespace l1ksvm
