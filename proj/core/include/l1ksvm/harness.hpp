#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "l1ksvm/dataio.hpp"
#include "l1ksvm/pipeline.hpp"

namespace l1ksvm {

enum class Protocol { bootstrap, cross_validation };

std::string_view protocol_name(Protocol p) noexcept;
Protocol protocol_from_name(std::string_view name);

using ScenarioPair = std::pair<std::string, std::string>;

struct ExperimentConfig {
  std::string dataset;
  // Empty means every pair of dataset classes, in class order.
  std::vector<ScenarioPair> scenarios;
  std::vector<std::size_t> sizes{10, 25, 100, 150, 250, 300, 350};
  int repeats = 100;
  std::vector<MethodConfig> methods{MethodConfig::defaults(Method::l1ksvm_aug),
                                    MethodConfig::defaults(Method::l1ksvm_noaug),
                                    MethodConfig::defaults(Method::baseline_lasso)};
  std::uint64_t seed = 0;
  int cv_folds = 5;
  std::string output = "runs";

  // Checks that do not need the dataset.
  void validate() const;
};

// Default scenarios (all class pairs) when cfg.scenarios is empty; otherwise
// the configured pairs after checking that their labels exist in `pool`.
std::vector<ScenarioPair> resolve_scenarios(const ExperimentConfig& cfg, const ExpressionMatrix& pool);

// Full validation against the loaded pool. Throws ConfigError.
void validate_against(const ExperimentConfig& cfg, const ExpressionMatrix& pool);

std::string scenario_name(const ScenarioPair& s);

enum RecordFlag : unsigned {
  kFlagNoFeatures = 1u << 0,
  kFlagError = 1u << 1,
  kFlagLassoNotConverged = 1u << 2,
  kFlagKsvmNotConverged = 1u << 3,
  kFlagDegenerate = 1u << 4,
};

std::string flags_to_string(unsigned flags);
unsigned flags_from_string(std::string_view s);

struct RunRecord {
  std::string scenario;
  Method method = Method::l1ksvm_aug;
  std::size_t size = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  ConfusionCounts confusion;
  double accuracy = 0.0;
  std::size_t n_features = 0;
  unsigned flags = 0;
  double wall_time = 0.0;       // seconds; not serialized
  std::uint64_t split_digest = 0;  // not serialized
  std::string message;          // error text; not serialized

  // Failed or degenerate records carry no accuracy.
  bool usable() const noexcept { return (flags & (kFlagNoFeatures | kFlagError | kFlagDegenerate)) == 0; }
};

struct Iteration {
  std::size_t scenario_index = 0;
  std::size_t size = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
};

// Stable mix of (master seed, scenario index, size, repeat).
std::uint64_t iteration_seed(std::uint64_t master, std::size_t scenario_index, std::size_t size, int repeat) noexcept;

// Scenario-major, then size, then repeat.
std::vector<Iteration> plan_iterations(const ExperimentConfig& cfg, std::size_t n_scenarios);

// Worker count from L1KSVM_WORKERS, else hardware concurrency.
unsigned default_worker_count();

struct RunOptions {
  unsigned workers = 0;  // 0 = default_worker_count()
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// One record per (iteration, method), ordered as plan_iterations then
// cfg.methods. All methods of an iteration share one train/test split.
std::vector<RunRecord> run_bootstrap_experiment(const ExperimentConfig& cfg, const ExpressionMatrix& pool,
                                                const RunOptions& opts = {});

// Stratified k-fold inside each iteration's training draw; the confusion
// counts pool the out-of-fold predictions.
std::vector<RunRecord> run_cross_validation(const ExperimentConfig& cfg, const ExpressionMatrix& pool,
                                            const RunOptions& opts = {});

// Fold index per row; each class is shuffled and dealt round-robin.
std::vector<int> stratified_folds(const ExpressionMatrix& m, int k, std::uint64_t seed);

}  // namespace l1ksvm
