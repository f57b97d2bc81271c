#include "l1ksvm/config.hpp"

#include <algorithm>
#include <fstream>

#include "json_util.hpp"
#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

std::string_view canonical_key(std::string_view key) {
  if (key == "n_repeats") return "repeats";
  if (key == "master_seed") return "seed";
  if (key == "train_sizes_per_class") return "sizes";
  return key;
}

bool is_index(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
  constexpr std::string_view where = "config";
  detail::reject_unknown_keys(doc, {"dataset", "scenarios", "sizes", "repeats", "methods", "seed", "cv_folds", "output"},
                              where);
  ExperimentConfig cfg;
  if (!doc.contains("dataset") || !doc.at("dataset").is_string())
    throw ConfigError("config.dataset: a dataset path is required");
  cfg.dataset = doc.at("dataset").get<std::string>();
  if (doc.contains("scenarios")) {
    const auto& s = doc.at("scenarios");
    if (!s.is_array()) throw ConfigError("config.scenarios: expected an array of [class_a, class_b] pairs");
    for (const auto& pair : s) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
        throw ConfigError("config.scenarios: each entry must be a [class_a, class_b] pair of strings");
      cfg.scenarios.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }
  detail::read_opt(doc, "sizes", cfg.sizes, where);
  detail::read_opt(doc, "repeats", cfg.repeats, where);
  detail::read_opt(doc, "seed", cfg.seed, where);
  detail::read_opt(doc, "cv_folds", cfg.cv_folds, where);
  detail::read_opt(doc, "output", cfg.output, where);
  if (doc.contains("methods")) {
    const auto& m = doc.at("methods");
    if (!m.is_array()) throw ConfigError("config.methods: expected an array");
    cfg.methods.clear();
    for (const auto& entry : m) {
      // A bare string selects that method with defaults.
      if (entry.is_string())
        cfg.methods.push_back(MethodConfig::defaults(method_from_name(entry.get<std::string>())));
      else
        cfg.methods.push_back(entry.get<MethodConfig>());
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& [a, b] : cfg.scenarios) scenarios.push_back({a, b});
  return {{"dataset", cfg.dataset}, {"scenarios", scenarios}, {"sizes", cfg.sizes},   {"repeats", cfg.repeats},
          {"methods", cfg.methods}, {"seed", cfg.seed},       {"cv_folds", cfg.cv_folds}, {"output", cfg.output}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  const auto key = assignment.substr(0, eq);
  const std::string text(assignment.substr(eq + 1));
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }

  nlohmann::json* node = &doc;
  std::string_view rest = key;
  bool first = true;
  while (true) {
    const auto dot = rest.find('.');
    auto part = rest.substr(0, dot);
    if (first) part = canonical_key(part);
    first = false;
    const bool last = dot == std::string_view::npos;
    if (node->is_array()) {
      if (!is_index(part)) throw ConfigError("override '" + std::string(key) + "': expected an array index");
      const auto i = std::stoul(std::string(part));
      if (i >= node->size()) throw ConfigError("override '" + std::string(key) + "': index out of range");
      node = &(*node)[i];
      // A method given by bare name gets expanded so its fields can be set.
      if (!last && node->is_string()) *node = nlohmann::json{{"method", *node}};
    } else {
      if (node->is_null()) *node = nlohmann::json::object();
      if (!node->is_object()) throw ConfigError("override '" + std::string(key) + "': path is not an object");
      node = &(*node)[std::string(part)];
    }
    if (last) break;
    rest = rest.substr(dot + 1);
  }
  *node = std::move(value);
}

}  // namespace l1ksvm
