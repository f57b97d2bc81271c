#include "l1ksvm/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

namespace {

enum SeedTag : std::uint64_t { kSplit = 21, kTrain = 22, kFolds = 23 };

struct FlagName {
  unsigned bit;
  const char* name;
};
constexpr FlagName kFlagNames[] = {
    {kFlagNoFeatures, "no_features"},
    {kFlagError, "error"},
    {kFlagLassoNotConverged, "lasso_not_converged"},
    {kFlagKsvmNotConverged, "ksvm_not_converged"},
    {kFlagDegenerate, "degenerate"},
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs task(i) for i in [0, n) on a bounded pool. Each task writes only its
// own slot, so no result ordering depends on scheduling.
template <typename Task>
void parallel_for(std::size_t n, unsigned workers, const RunOptions& opts, Task task) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      task(i);
      const auto d = ++done;
      if (opts.progress) {
        std::lock_guard lock(progress_mu);
        opts.progress(d, n);
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    body();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
}

unsigned flags_of(const TrainedPipeline& p) {
  unsigned f = 0;
  if (p.lasso_not_converged > 0) f |= kFlagLassoNotConverged;
  if (!p.classifier_converged)
    f |= p.method == Method::baseline_lasso ? kFlagLassoNotConverged : kFlagKsvmNotConverged;
  return f;
}

struct Prepared {
  std::vector<ScenarioPair> scenarios;
  std::vector<ExpressionMatrix> pools;
  std::vector<Iteration> plan;
};

Prepared prepare(const ExperimentConfig& cfg, const ExpressionMatrix& pool) {
  validate_against(cfg, pool);
  Prepared p;
  p.scenarios = resolve_scenarios(cfg, pool);
  for (const auto& s : p.scenarios) p.pools.push_back(make_scenario(pool, s.first, s.second));
  p.plan = plan_iterations(cfg, p.scenarios.size());
  return p;
}

RunRecord blank_record(const Prepared& prep, const Iteration& it, Method m) {
  RunRecord r;
  r.scenario = scenario_name(prep.scenarios[it.scenario_index]);
  r.method = m;
  r.size = it.size;
  r.repeat = it.repeat;
  r.seed = it.seed;
  return r;
}

void mark_failure(RunRecord& r, const std::exception& e, bool no_features) {
  r.flags |= no_features ? kFlagNoFeatures : kFlagError;
  r.message = e.what();
  r.accuracy = 0.0;
  r.confusion = {};
}

}  // namespace

std::string_view protocol_name(Protocol p) noexcept {
  return p == Protocol::bootstrap ? "bootstrap" : "cv";
}

Protocol protocol_from_name(std::string_view name) {
  if (name == "bootstrap") return Protocol::bootstrap;
  if (name == "cv") return Protocol::cross_validation;
  throw Error("unknown protocol '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (sizes.empty()) throw ConfigError("sizes must not be empty");
  for (auto s : sizes)
    if (s < 2) throw ConfigError("every training size must be >= 2 per class");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  for (const auto& m : methods) m.validate();
  if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
  for (const auto& [a, b] : scenarios)
    if (a == b) throw ConfigError("scenario '" + a + "' vs itself is degenerate");
}

std::vector<ScenarioPair> resolve_scenarios(const ExperimentConfig& cfg, const ExpressionMatrix& pool) {
  if (!cfg.scenarios.empty()) {
    for (const auto& [a, b] : cfg.scenarios) {
      if (pool.class_index(a) < 0) throw ConfigError("scenario label '" + a + "' not in dataset");
      if (pool.class_index(b) < 0) throw ConfigError("scenario label '" + b + "' not in dataset");
    }
    return cfg.scenarios;
  }
  std::vector<ScenarioPair> out;
  const auto& names = pool.class_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) out.emplace_back(names[i], names[j]);
  if (out.empty()) throw ConfigError("dataset has fewer than two classes");
  return out;
}

void validate_against(const ExperimentConfig& cfg, const ExpressionMatrix& pool) {
  cfg.validate();
  if (!pool.all_finite()) throw ConfigError("dataset contains invalid values; run `prepare` first");
  for (const auto& [a, b] : resolve_scenarios(cfg, pool)) {
    for (const auto& label : {a, b}) {
      const auto n = pool.class_count(pool.class_index(label));
      for (auto s : cfg.sizes)
        if (s >= n)
          throw ConfigError("training size " + std::to_string(s) + " leaves no test samples for class '" + label +
                            "' (" + std::to_string(n) + " samples)");
    }
  }
}

std::string scenario_name(const ScenarioPair& s) { return s.first + "_vs_" + s.second; }

std::string flags_to_string(unsigned flags) {
  if (flags == 0) return "ok";
  std::string out;
  for (const auto& f : kFlagNames) {
    if (!(flags & f.bit)) continue;
    if (!out.empty()) out += '|';
    out += f.name;
  }
  return out;
}

unsigned flags_from_string(std::string_view s) {
  if (s == "ok" || s.empty()) return 0;
  unsigned flags = 0;
  while (!s.empty()) {
    const auto bar = s.find('|');
    const auto tok = s.substr(0, bar);
    bool known = false;
    for (const auto& f : kFlagNames)
      if (tok == f.name) {
        flags |= f.bit;
        known = true;
      }
    if (!known) throw Error("unknown record flag '" + std::string(tok) + "'");
    s = bar == std::string_view::npos ? std::string_view{} : s.substr(bar + 1);
  }
  return flags;
}

std::uint64_t iteration_seed(std::uint64_t master, std::size_t scenario_index, std::size_t size, int repeat) noexcept {
  return mix_seed(master, {static_cast<std::uint64_t>(scenario_index), static_cast<std::uint64_t>(size),
                           static_cast<std::uint64_t>(repeat)});
}

std::vector<Iteration> plan_iterations(const ExperimentConfig& cfg, std::size_t n_scenarios) {
  std::vector<Iteration> plan;
  plan.reserve(n_scenarios * cfg.sizes.size() * static_cast<std::size_t>(std::max(cfg.repeats, 0)));
  for (std::size_t s = 0; s < n_scenarios; ++s)
    for (auto size : cfg.sizes)
      for (int r = 0; r < cfg.repeats; ++r) plan.push_back({s, size, r, iteration_seed(cfg.seed, s, size, r)});
  return plan;
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("L1KSVM_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunRecord> run_bootstrap_experiment(const ExperimentConfig& cfg, const ExpressionMatrix& pool,
                                                const RunOptions& opts) {
  const Prepared prep = prepare(cfg, pool);
  const std::size_t n_methods = cfg.methods.size();
  std::vector<RunRecord> records(prep.plan.size() * n_methods);

  parallel_for(prep.plan.size(), opts.workers ? opts.workers : default_worker_count(), opts, [&](std::size_t k) {
    const auto& it = prep.plan[k];
    const auto split = split_train_test(prep.pools[it.scenario_index], it.size, mix_seed(it.seed, {kSplit}));
    const auto digest = split_digest(split);
    const auto train_seed = mix_seed(it.seed, {kTrain});
    for (std::size_t m = 0; m < n_methods; ++m) {
      const auto& mc = cfg.methods[m];
      RunRecord r = blank_record(prep, it, mc.method);
      r.split_digest = digest;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto p = train_pipeline(split.train, mc, train_seed);
        r.confusion = evaluate_pipeline(p, split.test);
        r.accuracy = r.confusion.accuracy();
        r.n_features = p.selected_indices.size();
        r.flags |= flags_of(p);
      } catch (const NoFeaturesSelected& e) {
        mark_failure(r, e, true);
      } catch (const std::exception& e) {
        mark_failure(r, e, false);
      }
      r.wall_time = seconds_since(t0);
      records[k * n_methods + m] = std::move(r);
    }
  });
  return records;
}

std::vector<int> stratified_folds(const ExpressionMatrix& m, int k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_folds: k must be >= 2");
  Rng rng(seed);
  std::vector<int> fold(m.n_samples(), 0);
  for (std::size_t c = 0; c < m.n_classes(); ++c) {
    auto rows = m.rows_of_class(static_cast<int>(c));
    shuffle(rng, rows);
    for (std::size_t pos = 0; pos < rows.size(); ++pos) fold[rows[pos]] = static_cast<int>(pos % k);
  }
  return fold;
}

std::vector<RunRecord> run_cross_validation(const ExperimentConfig& cfg, const ExpressionMatrix& pool,
                                            const RunOptions& opts) {
  const Prepared prep = prepare(cfg, pool);
  const std::size_t n_methods = cfg.methods.size();
  const int k = cfg.cv_folds;
  std::vector<RunRecord> records(prep.plan.size() * n_methods);

  parallel_for(prep.plan.size(), opts.workers ? opts.workers : default_worker_count(), opts, [&](std::size_t idx) {
    const auto& it = prep.plan[idx];
    const auto split = split_train_test(prep.pools[it.scenario_index], it.size, mix_seed(it.seed, {kSplit}));
    const auto& train = split.train;
    const auto fold_of = stratified_folds(train, k, mix_seed(it.seed, {kFolds}));

    std::vector<ExpressionMatrix> fold_train, fold_valid;
    bool degenerate = false;
    for (int f = 0; f < k; ++f) {
      std::vector<std::size_t> tr, va;
      for (std::size_t i = 0; i < train.n_samples(); ++i) (fold_of[i] == f ? va : tr).push_back(i);
      fold_train.push_back(train.select_rows(tr));
      fold_valid.push_back(train.select_rows(va));
      const auto& v = fold_valid.back();
      if (v.class_count(0) == 0 || v.class_count(1) == 0) degenerate = true;
    }

    for (std::size_t m = 0; m < n_methods; ++m) {
      const auto& mc = cfg.methods[m];
      RunRecord r = blank_record(prep, it, mc.method);
      r.split_digest = split_digest(split);
      const auto t0 = std::chrono::steady_clock::now();
      if (degenerate) {
        r.flags |= kFlagDegenerate;
        r.message = "a validation fold lacks one of the classes";
        records[idx * n_methods + m] = std::move(r);
        continue;
      }
      std::size_t feature_total = 0;
      try {
        for (int f = 0; f < k; ++f) {
          const auto p = train_pipeline(fold_train[f], mc, mix_seed(it.seed, {kTrain, static_cast<std::uint64_t>(f)}));
          r.confusion += evaluate_pipeline(p, fold_valid[f]);
          feature_total += p.selected_indices.size();
          r.flags |= flags_of(p);
        }
        r.accuracy = r.confusion.accuracy();
        r.n_features = static_cast<std::size_t>(std::llround(static_cast<double>(feature_total) / k));
      } catch (const NoFeaturesSelected& e) {
        mark_failure(r, e, true);
      } catch (const std::exception& e) {
        mark_failure(r, e, false);
      }
      r.wall_time = seconds_since(t0);
      records[idx * n_methods + m] = std::move(r);
    }
  });
  return records;
}

}  // namespace l1ksvm
