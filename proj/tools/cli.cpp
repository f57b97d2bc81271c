#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "l1ksvm/config.hpp"
#include "l1ksvm/dataio.hpp"
#include "l1ksvm/error.hpp"
#include "l1ksvm/harness.hpp"
#include "l1ksvm/plot.hpp"
#include "l1ksvm/records.hpp"
#include "l1ksvm/synthbench.hpp"

namespace fs = std::filesystem;

namespace l1ksvm::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Common {
  int verbosity = 0;
};

struct PrepareArgs {
  std::string input, output, prefix = "hsa-", label_column = "label", id_column = "sample_id";
  std::optional<std::size_t> per_class;
  std::uint64_t seed = 0;
};

struct SweepArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string run_dir;
  unsigned workers = 0;
};

struct ReportArgs {
  std::string records, output;
};

struct PlotArgs {
  std::string summary, output;
};

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path fresh_run_dir(const fs::path& root, std::string_view kind) {
  const std::string stem = timestamp_now() + "-" + std::string(kind);
  fs::path dir = root / stem;
  for (int k = 2; fs::exists(dir); ++k) dir = root / (stem + "-" + std::to_string(k));
  return dir;
}

fs::path relative_to(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void print_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(24) << "scenario" << std::setw(16) << "method" << std::right << std::setw(6)
      << "size" << std::setw(6) << "ok" << std::setw(8) << "acc%" << std::setw(8) << "std" << std::setw(10)
      << "features" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(24) << r.scenario << std::setw(16) << method_name(r.method) << std::right
        << std::setw(6) << r.size << std::setw(6) << r.n_ok << std::fixed << std::setprecision(2) << std::setw(8)
        << r.acc_mean << std::setw(8) << r.acc_std << std::setw(10) << r.features_mean << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

int do_prepare(const PrepareArgs& a, const Common& common, std::ostream& out) {
  LoadOptions opts;
  opts.format = format_from_extension(a.input);
  opts.label_column = a.label_column;
  opts.id_column = a.id_column;
  auto m = filter_features(load_expression_table(a.input, opts), a.prefix);
  if (a.per_class) m = balance_classes(m, *a.per_class, a.seed);
  write_expression_table(a.output, m, format_from_extension(a.output));
  if (common.verbosity >= 0)
    out << "wrote " << a.output << ": " << m.n_samples() << " samples, " << m.n_features() << " features, "
        << m.class_names().size() << " classes\n";
  return kExitOk;
}

int do_synth(const BenchmarkSpec& spec, const std::string& output, const Common& common, std::ostream& out) {
  const auto m = generate_benchmark(spec);
  write_expression_table(output, m, format_from_extension(output));
  if (common.verbosity >= 0)
    out << "wrote " << output << ": " << m.n_samples() << " samples, " << m.n_features() << " features\n";
  return kExitOk;
}

int do_sweep(const SweepArgs& a, Protocol protocol, const Common& common, std::ostream& out, std::ostream& err) {
  const fs::path config_path = a.config;
  if (!fs::exists(config_path)) throw UsageError("config file not found: " + config_path.string());
  auto doc = read_json_file(config_path);
  for (const auto& o : a.overrides) apply_override(doc, o);
  ExperimentConfig cfg;
  try {
    cfg = parse_experiment_config(doc);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  // Paths inside the config are relative to the config file.
  const fs::path base = config_path.parent_path();
  const fs::path dataset = relative_to(base, cfg.dataset);
  if (!fs::exists(dataset)) throw UsageError("dataset not found: " + dataset.string());
  LoadOptions load;
  load.format = format_from_extension(dataset);
  const auto pool = load_expression_table(dataset, load);
  try {
    validate_against(cfg, pool);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  cfg.scenarios = resolve_scenarios(cfg, pool);

  const fs::path run_dir = a.run_dir.empty()
                               ? fresh_run_dir(relative_to(base, cfg.output), protocol == Protocol::bootstrap ? "run" : "cv")
                               : fs::path(a.run_dir);
  fs::create_directories(run_dir);
  write_text(run_dir / "config.resolved.json", experiment_config_to_json(cfg).dump(2) + "\n");

  RunOptions opts;
  opts.workers = a.workers;
  if (common.verbosity > 0) {
    opts.progress = [&err](std::size_t done, std::size_t total) {
      if (done == total || done % 10 == 0) err << "\r" << done << "/" << total << (done == total ? "\n" : "") << std::flush;
    };
  }
  const auto records = protocol == Protocol::bootstrap ? run_bootstrap_experiment(cfg, pool, opts)
                                                       : run_cross_validation(cfg, pool, opts);
  const std::string prefix = protocol == Protocol::bootstrap ? "" : "cv_";
  write_records_csv(run_dir / (prefix + "records.csv"), records, protocol);

  std::vector<std::string> warnings;
  const auto rows = aggregate_records(records, protocol, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  write_summary_csv(run_dir / (prefix + "summary.csv"), rows);

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.usable() ? 0 : 1;
  if (common.verbosity >= 0) {
    out << "run directory: " << run_dir.string() << '\n'
        << records.size() << " records (" << failed << " failed or degenerate)\n";
    if (common.verbosity > 0) print_summary(out, rows);
  }
  return kExitOk;
}

int do_report(const ReportArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  if (!fs::exists(a.records)) throw UsageError("records file not found: " + a.records);
  Protocol protocol = Protocol::bootstrap;
  const auto records = read_records_csv(a.records, &protocol);
  std::vector<std::string> warnings;
  const auto rows = aggregate_records(records, protocol, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const fs::path dest = a.output.empty()
                            ? fs::path(a.records).parent_path() /
                                  (protocol == Protocol::bootstrap ? "summary.csv" : "cv_summary.csv")
                            : fs::path(a.output);
  write_summary_csv(dest, rows);
  if (common.verbosity >= 0) {
    print_summary(out, rows);
    out << "wrote " << dest.string() << '\n';
  }
  return kExitOk;
}

int do_plot(const PlotArgs& a, const Common& common, std::ostream& out) {
  if (!fs::exists(a.summary)) throw UsageError("summary file not found: " + a.summary);
  const auto rows = read_summary_csv(a.summary);
  const fs::path dir = a.output.empty() ? fs::path(a.summary).parent_path() / "plots" : fs::path(a.output);
  const auto written = render_plots(rows, dir);
  if (common.verbosity >= 0)
    for (const auto& p : written) out << "wrote " << p.string() << '\n';
  return kExitOk;
}

void add_sweep_options(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("-c,--config", a.config, "Experiment config (JSON)")->required();
  cmd->add_option("--set", a.overrides, "Override a config key, e.g. --set repeats=2")->type_name("KEY=VALUE");
  cmd->add_option("--run-dir", a.run_dir, "Write outputs here instead of a fresh timestamped directory");
  cmd->add_option("-j,--workers", a.workers, "Worker threads (default: L1KSVM_WORKERS or all cores)");
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"L1-regularized feature selection with kernel SVM classification"};
  app.name("l1ksvm");
  app.require_subcommand(1, 1);
  Common common;
  app.add_flag_function("-v,--verbose", [&](std::int64_t n) { common.verbosity += static_cast<int>(n); },
                        "More output (progress, summary table)");
  app.add_flag_function("-q,--quiet", [&](std::int64_t) { common.verbosity = -1; }, "Only report errors");

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "Filter a raw expression table and optionally balance its classes");
  prepare->add_option("-i,--input", prep.input, "Raw table (csv or tsv)")->required();
  prepare->add_option("-o,--output", prep.output, "Cleaned table")->required();
  prepare->add_option("--prefix", prep.prefix, "Keep features whose name starts with this");
  prepare->add_option("--per-class", prep.per_class, "Draw exactly this many samples of every class");
  prepare->add_option("--seed", prep.seed, "Seed for class balancing");
  prepare->add_option("--label-column", prep.label_column);
  prepare->add_option("--id-column", prep.id_column);

  BenchmarkSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark dataset");
  synth->add_option("-o,--output", synth_out, "Output table")->required();
  synth->add_option("--classes", spec.n_classes)->capture_default_str();
  synth->add_option("--per-class", spec.n_per_class)->capture_default_str();
  synth->add_option("--features", spec.n_features)->capture_default_str();
  synth->add_option("--informative", spec.n_informative)->capture_default_str();
  synth->add_option("--effect", spec.effect_size)->capture_default_str();
  synth->add_option("--noise", spec.noise_std)->capture_default_str();
  synth->add_option("--scale", spec.scale)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();

  SweepArgs run_args, cv_args;
  auto* run = app.add_subcommand("run", "Bootstrap sweep: records, summary and config snapshot");
  add_sweep_options(run, run_args);
  auto* cv = app.add_subcommand("cv", "Cross-validation sweep inside each training draw");
  add_sweep_options(cv, cv_args);

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Aggregate a records file into a summary");
  report->add_option("-r,--records", rep.records, "records.csv or cv_records.csv")->required();
  report->add_option("-o,--output", rep.output, "Summary path (default: next to the records)");

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "Render SVG charts from a summary");
  plot->add_option("-s,--summary", pl.summary, "summary.csv")->required();
  plot->add_option("-o,--output", pl.output, "Output directory (default: plots/ next to the summary)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*prepare) return do_prepare(prep, common, out);
    if (*synth) return do_synth(spec, synth_out, common, out);
    if (*run) return do_sweep(run_args, Protocol::bootstrap, common, out, err);
    if (*cv) return do_sweep(cv_args, Protocol::cross_validation, common, out, err);
    if (*report) return do_report(rep, common, out, err);
    if (*plot) return do_plot(pl, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace l1ksvm::cli
