#pragma once

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "l1ksvm/harness.hpp"

namespace l1ksvm {

// Experiment document. Top-level keys: dataset, scenarios, sizes, repeats,
// methods, seed, cv_folds, output. Unknown keys (at any level) are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Applies "key=value" to the raw document. Dotted keys address nested
// objects and array elements ("methods.0.box_c=2"). The value is parsed as
// JSON when possible, otherwise taken as a string. Aliases: n_repeats ->
// repeats, master_seed -> seed, train_sizes_per_class -> sizes.
void apply_override(nlohmann::json& doc, std::string_view assignment);

}  // namespace l1ksvm
