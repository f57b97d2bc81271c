// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "l1ksvm/augment.hpp"
#include "l1ksvm/harness.hpp"
#include "l1ksvm/ksvm.hpp"
#include "l1ksvm/lasso.hpp"
#include "l1ksvm/records.hpp"
#include "l1ksvm/stability.hpp"
#include "l1ksvm/synthbench.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/smoke.hpp"

using namespace l1ksvm;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kLassoKktTol = 1e-4;
constexpr double kFdRelTol = 1e-6;
constexpr double kGoldenTol = 1e-6;
constexpr double kSvmKktTol = 1e-3;
constexpr double kSvmDualRelTol = 1e-3;
constexpr double kAugStdRelTol = 0.02;
constexpr double kAugMeanSigmas = 4.0;
constexpr double kTableTol = 0.15;
constexpr double kExactTol = 1e-9;
constexpr double kTrendSlack = 1.5;
constexpr double kCvGap = 5.0;
constexpr double kBudget1 = 30, kBudget2 = 1, kBudget3 = 60, kBudget4 = 10, kBudget7 = 1800, kBudget10 = 120;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, double seconds, double budget, const std::string& detail) {
  const bool in_budget = budget <= 0 || seconds < budget;
  std::string line = std::string(ok && in_budget ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + detail;
  char t[64];
  std::snprintf(t, sizeof t, " [%.1fs", seconds);
  line += t;
  if (budget > 0) {
    std::snprintf(t, sizeof t, ", budget %.0fs", budget);
    line += t;
  }
  line += "]";
  if (!in_budget) line += " over budget";
  if (!(ok && in_budget)) ++failures;
  std::cout << line << std::endl;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion1() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst_kkt = 0, worst_fd = 0;
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t per_class = 3 + rng.below(13);  // 6..30 samples
    const std::size_t p = 1 + rng.below(10);
    const auto data = fixture::random_binary(per_class, p, 1000 + k, 0.5 + 2.0 * rng.uniform(), std::min<std::size_t>(p, 3));
    LassoParams lp;
    lp.inverse_reg_c = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const auto m = fit_lasso(data, lp);
    const auto y = data.signed_targets();
    const auto cert = check_optimality(m, data, y, kLassoKktTol);
    worst_kkt = std::max(worst_kkt, cert.max_violation);
    if (!cert.ok || !m.converged) ++bad;

    const Eigen::MatrixXd xs = m.standardizer.transform(data.values());
    const auto np = static_cast<Eigen::Index>(p);
    Eigen::VectorXd theta(np + 1);
    theta << m.weights, m.intercept;
    auto f = [&](const Eigen::VectorXd& t) { return oracle::logistic_loss(xs, y, t.head(np), t(np), lp.inverse_reg_c); };
    const Eigen::VectorXd fd = oracle::central_difference(f, theta, 1e-5);
    const auto g = logistic_loss_gradient(xs, y, m.weights, m.intercept, lp.inverse_reg_c);
    Eigen::VectorXd full(np + 1);
    full << g.weights, g.intercept;
    const double rel = (full - fd).lpNorm<Eigen::Infinity>() / std::max(1.0, full.lpNorm<Eigen::Infinity>());
    worst_fd = std::max(worst_fd, rel);
    if (rel > kFdRelTol) ++bad;
  }
  report(1, bad == 0, since(t0), kBudget1,
         std::to_string(50 - bad) + "/50 instances ok, " + fmt("max KKT violation %.2e, max FD rel error %.2e", worst_kkt, worst_fd));
}

void criterion2() {
  const auto t0 = Clock::now();
  double worst = 0;
  for (double c : {0.3, 1.0, 10.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      Eigen::MatrixXd x(2, 1);
      x << -a, a;
      const auto data = fixture::binary(x, {0, 1});
      LassoParams lp;
      lp.inverse_reg_c = c;
      lp.tolerance = 1e-11;
      lp.scaling = Scaling::center;
      const auto m = fit_lasso(data, lp);
      const double ref =
          oracle::golden_section([&](double w) { return std::abs(w) + c * 2.0 * std::log1p(std::exp(-a * w)); }, -100, 100);
      worst = std::max(worst, std::abs(m.weights(0) - ref));
    }
  }
  report(2, worst <= kGoldenTol, since(t0), kBudget2, fmt("max |w - w_golden| = %.2e over 9 cases", worst));
}

void criterion3() {
  const auto t0 = Clock::now();
  Rng rng(303);
  double worst_kkt = 0, worst_dual = 0;
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t per_class = 3 + rng.below(13);
    const std::size_t p = 1 + rng.below(6);
    const auto data = fixture::random_binary(per_class, p, 3000 + k, 2.0 * rng.uniform(), std::min<std::size_t>(p, 2));
    KsvmParams kp;
    kp.box_c = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const auto m = fit_ksvm(data, kp);
    const auto cert = check_kkt(m, data, kSvmKktTol);
    worst_kkt = std::max(worst_kkt, cert.max_violation);

    const Eigen::MatrixXd xs = m.standardizer.transform(data.values());
    const Eigen::MatrixXd gram = oracle::poly_gram(xs, *m.kernel.gamma, m.kernel.coef0, m.kernel.degree);
    const auto yv = data.signed_targets();
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    const double ref = oracle::svm_dual_objective(gram, y, oracle::svm_dual_reference(gram, y, m.box_c));
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(y.size());
    for (std::size_t s = 0; s < m.sv_rows.size(); ++s) alpha(static_cast<Eigen::Index>(m.sv_rows[s])) = m.dual_coefs(s);
    const double rel = std::abs(oracle::svm_dual_objective(gram, y, alpha) - ref) / std::max(std::abs(ref), 1e-12);
    worst_dual = std::max(worst_dual, rel);
    if (!cert.ok || !m.converged || rel > kSvmDualRelTol) ++bad;
  }
  report(3, bad == 0, since(t0), kBudget3,
         std::to_string(50 - bad) + "/50 instances ok, " + fmt("max KKT violation %.2e, max dual rel gap %.2e", worst_kkt, worst_dual));
}

void criterion4() {
  const auto t0 = Clock::now();
  const auto train = fixture::random_binary(500, 3, 404, 0.0, 0);
  AugmentationParams ap;
  ap.n_synthetic_per_class = 10000;
  ap.noise_fraction = 0.1;
  const auto syn = generate_synthetic(train, ap, 405);
  double worst_std = 0, worst_mean = 0;
  for (int c = 0; c < 2; ++c) {
    const auto real_rows = train.rows_of_class(c), syn_rows = syn.rows_of_class(c);
    for (Eigen::Index j = 0; j < 3; ++j) {
      auto moments = [&](const ExpressionMatrix& m, const std::vector<std::size_t>& rows) {
        double mean = 0, var = 0;
        for (auto i : rows) mean += m.values()(static_cast<Eigen::Index>(i), j);
        mean /= static_cast<double>(rows.size());
        for (auto i : rows) var += std::pow(m.values()(static_cast<Eigen::Index>(i), j) - mean, 2);
        return std::pair{mean, std::sqrt(var / static_cast<double>(rows.size()))};
      };
      const auto [mr, sr] = moments(train, real_rows);
      const auto [ms, ss] = moments(syn, syn_rows);
      worst_std = std::max(worst_std, std::abs(ss / (std::sqrt(1.01) * sr) - 1.0));
      worst_mean = std::max(worst_mean, std::abs(ms - mr) / (sr / std::sqrt(static_cast<double>(syn_rows.size()))));
    }
  }
  report(4, worst_std <= kAugStdRelTol && worst_mean <= kAugMeanSigmas, since(t0), kBudget4,
         fmt("max std ratio error %.4f, max mean shift %.2f sigma/sqrt(n)", worst_std, worst_mean));
}

void criterion5() {
  const auto t0 = Clock::now();
  const auto kept = retain_by_frequency(std::vector<int>{10, 11, 20, 0}, 20, 0.5);
  const bool ok = kept == std::vector<std::size_t>{1, 2};
  report(5, ok, since(t0), 0, ok ? "10/20 excluded, 11/20 included" : "boundary rule violated");
}

void criterion6() {
  const auto t0 = Clock::now();
  int bad = 0;
  for (const auto& r : oracle::published_table()) {
    if (std::abs(r.tp + r.tn - r.acc) > kTableTol || std::abs(r.tp + r.tn + r.fp + r.fn - 100.0) > kTableTol) ++bad;
  }
  // The same identities must hold exactly on the library's own aggregation.
  Rng rng(606);
  std::vector<RunRecord> recs;
  for (int rep = 0; rep < 40; ++rep) {
    RunRecord r;
    r.scenario = rep % 2 ? "a_vs_b" : "a_vs_c";
    r.method = static_cast<Method>(rep % 3);
    r.size = 10;
    r.repeat = rep;
    r.confusion = {rng.below(50), rng.below(50), rng.below(50), 1 + rng.below(50), 0};
    r.confusion.n_test = r.confusion.tp + r.confusion.tn + r.confusion.fp + r.confusion.fn;
    r.accuracy = r.confusion.accuracy();
    recs.push_back(r);
  }
  int bad_own = 0;
  for (const auto& s : aggregate_records(recs, Protocol::bootstrap)) {
    if (std::abs(s.tp_pct + s.tn_pct - s.acc_mean) > kExactTol ||
        std::abs(s.tp_pct + s.tn_pct + s.fp_pct + s.fn_pct - 100.0) > kExactTol)
      ++bad_own;
  }
  report(6, bad == 0 && bad_own == 0, since(t0), 0,
         std::to_string(oracle::published_table().size() - bad) + "/" + std::to_string(oracle::published_table().size()) +
             " published rows consistent, " + std::to_string(bad_own) + " aggregation mismatches");
}

std::map<std::pair<Method, std::size_t>, SummaryRow> pooled(const std::vector<SummaryRow>& rows) {
  std::map<std::pair<Method, std::size_t>, SummaryRow> out;
  for (const auto& r : rows)
    if (r.scenario == kPooledScenario) out[{r.method, r.size}] = r;
  return out;
}

void print_table(const char* title, const std::map<std::pair<Method, std::size_t>, SummaryRow>& t) {
  std::cout << "  " << title << '\n';
  for (const auto& [key, r] : t) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "    %-15s size %3zu  acc %6.2f +- %5.2f  features %7.2f  ok %zu/%zu\n",
                  std::string(method_name(key.first)).c_str(), key.second, r.acc_mean, r.acc_std, r.features_mean, r.n_ok,
                  r.n_records);
    std::cout << buf;
  }
}

void criteria7to9(const fs::path& workdir) {
  const auto t0 = Clock::now();
  const auto pool = generate_benchmark(BenchmarkSpec{});
  ExperimentConfig cfg;
  cfg.sizes = {10, 25, 100, 250};
  cfg.repeats = 10;
  cfg.seed = 2024;
  RunOptions opts;
  const auto boot = run_bootstrap_experiment(cfg, pool, opts);
  const double t_boot = since(t0);
  const auto t_cv0 = Clock::now();
  const auto cv = run_cross_validation(cfg, pool, opts);
  const double t_cv = since(t_cv0);
  const double elapsed7 = since(t0);
  write_records_csv(workdir / "benchmark_records.csv", boot, Protocol::bootstrap);
  write_records_csv(workdir / "benchmark_cv_records.csv", cv, Protocol::cross_validation);

  const auto b = pooled(aggregate_records(boot, Protocol::bootstrap));
  const auto c = pooled(aggregate_records(cv, Protocol::cross_validation));
  print_table("held-out (pooled over 6 scenarios)", b);
  print_table("cross-validation (pooled over 6 scenarios)", c);
  std::cout << fmt("  bootstrap %.0fs, cv %.0fs\n", t_boot, t_cv);

  const std::vector<Method> methods{Method::l1ksvm_aug, Method::l1ksvm_noaug, Method::baseline_lasso};
  auto acc = [&](Method m, std::size_t s) { return b.count({m, s}) ? b.at({m, s}).acc_mean : NAN; };
  auto feats = [&](Method m, std::size_t s) { return b.count({m, s}) ? b.at({m, s}).features_mean : NAN; };

  std::string why;
  bool trend = true;
  for (auto m : methods)
    for (std::size_t k = 1; k < cfg.sizes.size(); ++k) {
      const double lo = acc(m, cfg.sizes[k - 1]), hi = acc(m, cfg.sizes[k]);
      if (!(hi >= lo - kTrendSlack)) {
        trend = false;
        why += " (a) " + std::string(method_name(m)) + " drops at size " + std::to_string(cfg.sizes[k]) + ";";
      }
    }
  bool aug = true;
  for (std::size_t s : {10u, 25u}) {
    const double d = acc(Method::l1ksvm_aug, s) - acc(Method::l1ksvm_noaug, s);
    if (!(d >= 0)) {
      aug = false;
      why += fmt(" (b) aug - noaug = %.2f at size %zu;", d, s);
    }
  }
  bool order = true;
  for (std::size_t s : {100u, 250u}) {
    const double fb = feats(Method::baseline_lasso, s), fa = feats(Method::l1ksvm_aug, s),
                 fn = feats(Method::l1ksvm_noaug, s);
    if (!(fb > fa && fa > fn)) {
      order = false;
      why += " (c) feature order broken at size " + std::to_string(s) + ";";
    }
  }
  report(7, trend && aug && order, elapsed7, kBudget7,
         fmt("aug - noaug at 10/25: %+.2f / %+.2f points; features at 250: baseline %.1f > aug %.1f > noaug %.1f",
             acc(Method::l1ksvm_aug, 10) - acc(Method::l1ksvm_noaug, 10),
             acc(Method::l1ksvm_aug, 25) - acc(Method::l1ksvm_noaug, 25), feats(Method::baseline_lasso, 250),
             feats(Method::l1ksvm_aug, 250), feats(Method::l1ksvm_noaug, 250)) +
             why);

  double worst_gap = 0;
  bool aligned = true;
  for (auto m : methods)
    for (std::size_t s : {100u, 250u}) {
      if (!b.count({m, s}) || !c.count({m, s})) {
        aligned = false;
        continue;
      }
      const double gap = std::abs(c.at({m, s}).acc_mean - b.at({m, s}).acc_mean);
      worst_gap = std::max(worst_gap, gap);
      if (gap > kCvGap) aligned = false;
    }
  report(8, aligned, t_cv, 0, fmt("max |CV - held-out| at sizes >= 100: %.2f points", worst_gap));

  const auto t9 = Clock::now();
  const auto again = run_bootstrap_experiment(cfg, pool, opts);
  const bool same = format_records_csv(again, Protocol::bootstrap) == format_records_csv(boot, Protocol::bootstrap);
  report(9, same, since(t9), 0,
         same ? std::to_string(boot.size()) + " records byte-identical on rerun" : "records differ on rerun");
}

void criterion10(const fs::path& workdir) {
  const auto t0 = Clock::now();
  const auto outcome = smoke::end_to_end(workdir / "smoke");
  report(10, outcome.ok, since(t0), kBudget10, outcome.detail);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "l1ksvm_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--workdir" && i + 1 < argc) {
      workdir = argv[++i];
    } else {
      std::cerr << "usage: l1ksvm_acceptance [--workdir DIR]\n";
      return 2;
    }
  }
  fs::create_directories(workdir);

  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criteria7to9(workdir);
  criterion10(workdir);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
