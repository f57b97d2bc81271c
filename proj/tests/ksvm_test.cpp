#include <gtest/gtest.h>

#include <numeric>

#include "l1ksvm/error.hpp"
#include "l1ksvm/ksvm.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace l1ksvm;

namespace {

KernelParams kernel(int degree, double gamma, double coef0) {
  KernelParams k;
  k.degree = degree;
  k.gamma = gamma;
  k.coef0 = coef0;
  return k;
}

// Hand-built model over two raw features with an identity standardizer.
KsvmModel manual_model(Eigen::MatrixXd svs, std::vector<double> alpha, std::vector<double> y, double bias,
                       KernelParams k) {
  KsvmModel m;
  m.support_vectors = std::move(svs);
  m.dual_coefs = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  m.sv_labels = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  m.sv_rows.resize(alpha.size());
  std::iota(m.sv_rows.begin(), m.sv_rows.end(), 0);
  m.bias = bias;
  m.kernel = k;
  m.standardizer.mean = Eigen::VectorXd::Zero(2);
  m.standardizer.scale = Eigen::VectorXd::Ones(2);
  m.standardizer.constant = {false, false};
  m.feature_subset = {0, 1};
  m.feature_names = {"f0", "f1"};
  m.n_input_features = 2;
  m.classes = {"neg", "pos"};
  return m;
}

std::vector<double> row(const ExpressionMatrix& m, std::size_t i) {
  std::vector<double> r(m.n_features());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = m.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return r;
}

}  // namespace

TEST(Kernel, HandArithmetic) {
  const std::vector<double> x{1, 2}, z{3, 4}, ones{1, 1};
  EXPECT_DOUBLE_EQ(kernel_eval(x, z, kernel(1, 1.0, 0.0)), 11.0);
  EXPECT_DOUBLE_EQ(kernel_eval(ones, ones, kernel(2, 1.0, 1.0)), 9.0);
  EXPECT_THROW(kernel_eval(x, std::vector<double>{1.0}, kernel(1, 1.0, 0.0)), Error);
}

TEST(Kernel, SymmetricOnRandomInputs) {
  l1ksvm::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(5), z(5);
    for (auto& v : x) v = rng.normal();
    for (auto& v : z) v = rng.normal();
    EXPECT_DOUBLE_EQ(kernel_eval(x, z, kernel(3, 0.3, 1.0)), kernel_eval(z, x, kernel(3, 0.3, 1.0)));
  }
}

TEST(Gram, EntriesMatchPairwiseKernelAndSingleRow) {
  const auto data = fixture::random_binary(4, 3, 5);
  const auto k = kernel(3, 0.5, 1.0);
  const Eigen::MatrixXd g = gram_matrix(data.values(), k);
  for (std::size_t i = 0; i < data.n_samples(); ++i)
    for (std::size_t j = 0; j < data.n_samples(); ++j)
      EXPECT_NEAR(g(i, j), kernel_eval(row(data, i), row(data, j), k), 1e-12 * std::abs(g(i, j)));
  const Eigen::MatrixXd one = gram_matrix(data.values().topRows(1), k);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_NEAR(one(0, 0), kernel_eval(row(data, 0), row(data, 0), k), 1e-12);
}

TEST(Gram, PositiveSemidefinite) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = fixture::random_binary(10, 5, seed);
    for (int d : {1, 2, 3}) {
      const Eigen::MatrixXd g = gram_matrix(data.values(), kernel(d, 0.2, 1.0));
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
      EXPECT_GE(lmin, -1e-8 * g.norm()) << "seed " << seed << " degree " << d;
    }
  }
}

TEST(Ksvm, SeparableToyHasNoTrainingErrors) {
  Eigen::MatrixXd x(4, 2);
  x << -2, -1, -1, -2, 1, 2, 2, 1;
  const auto data = fixture::binary(x, {0, 0, 1, 1});
  KsvmParams p;
  p.kernel = kernel(1, 1.0, 0.0);
  p.box_c = 10.0;
  const auto m = fit_ksvm(data, p);
  EXPECT_TRUE(m.converged);
  EXPECT_EQ(predict_ksvm(m, data), (std::vector<std::string>{"neg", "neg", "pos", "pos"}));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(decision_function(m, row(data, i)) >= 0, i >= 2);
}

TEST(Ksvm, KktCertificateAndDualFeasibility) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = fixture::random_binary(12, 4, seed, 1.0);
    const auto m = fit_ksvm(data, {});
    ASSERT_TRUE(m.converged);
    const auto cert = check_kkt(m, data, 1e-3);
    EXPECT_TRUE(cert.ok) << "seed " << seed << " violation " << cert.max_violation;
    EXPECT_NEAR(m.dual_coefs.dot(m.sv_labels), 0.0, 1e-9);
    EXPECT_GT(m.dual_coefs.minCoeff(), 0.0);
    EXPECT_LE(m.dual_coefs.maxCoeff(), m.box_c + 1e-12);
  }
}

TEST(Ksvm, DualObjectiveMatchesProjectedGradientReference) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = fixture::random_binary(10, 3, 100 + seed, 1.0);
    const auto m = fit_ksvm(data, {});
    const Eigen::MatrixXd xs = m.standardizer.transform(data.values());
    const Eigen::MatrixXd k = oracle::poly_gram(xs, *m.kernel.gamma, m.kernel.coef0, m.kernel.degree);
    const auto yv = data.signed_targets();
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    const double ref = oracle::svm_dual_objective(k, y, oracle::svm_dual_reference(k, y, m.box_c));
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(y.size());
    for (std::size_t s = 0; s < m.sv_rows.size(); ++s) alpha(static_cast<Eigen::Index>(m.sv_rows[s])) = m.dual_coefs(s);
    const double got = oracle::svm_dual_objective(k, y, alpha);
    EXPECT_NEAR(got, ref, 1e-3 * std::abs(ref));
    EXPECT_NEAR(dual_objective(m), got, 1e-9 * std::abs(got));
  }
}

TEST(Ksvm, EmptyModelReturnsBias) {
  const auto m = manual_model(Eigen::MatrixXd(0, 2), {}, {}, 0.7, kernel(3, 1.0, 1.0));
  EXPECT_DOUBLE_EQ(decision_function(m, std::vector<double>{5.0, -3.0}), 0.7);
  const auto probe = fixture::random_binary(3, 2, 7);
  for (const auto& label : predict_ksvm(m, probe)) EXPECT_EQ(label, "pos");
}

TEST(Ksvm, SingleSupportVectorHandArithmetic) {
  Eigen::MatrixXd sv(1, 2);
  sv << 1.0, 0.0;
  const auto m = manual_model(sv, {1.0}, {1.0}, 0.0, kernel(1, 1.0, 0.0));
  EXPECT_DOUBLE_EQ(decision_function(m, std::vector<double>{2.0, 0.0}), 2.0);
  EXPECT_THROW(decision_function(m, std::vector<double>{2.0}), Error);
}

TEST(Ksvm, PredictionsFollowDecisionSignsAndRowOrder) {
  const auto train = fixture::random_binary(15, 4, 11, 1.5);
  const auto m = fit_ksvm(train, {});
  const auto probe = fixture::random_binary(10, 4, 12, 1.5);
  const auto scores = decision_scores(m, probe);
  const auto labels = predict_ksvm(m, probe);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(labels[i], scores[i] >= 0 ? "pos" : "neg");
    EXPECT_TRUE(std::isfinite(scores[i]));
  }
  std::vector<std::size_t> order(probe.n_samples());
  std::iota(order.rbegin(), order.rend(), 0);
  const auto reversed = predict_ksvm(m, probe.select_rows(order));
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(reversed[i], labels[order[i]]);
}

TEST(Ksvm, FeatureSubsetIgnoresOtherColumns) {
  const auto train = fixture::random_binary(12, 5, 13, 2.0);
  const std::vector<std::size_t> subset{0, 1};
  const auto m = fit_ksvm(train, {}, subset);
  EXPECT_EQ(m.feature_names, (std::vector<std::string>{"f0", "f1"}));
  auto x = row(train, 0);
  const double before = decision_function(m, x);
  x[4] += 100.0;
  EXPECT_DOUBLE_EQ(decision_function(m, x), before);
}

TEST(Ksvm, AutoGammaFollowsSubsetWidth) {
  const auto train = fixture::random_binary(20, 4, 17);
  const auto m = fit_ksvm(train, {});
  // z-scored columns have unit variance, so gamma = 1 / p.
  EXPECT_NEAR(*m.kernel.gamma, 0.25, 1e-12);
}

TEST(Ksvm, DuplicatedTrainingRowBarelyMovesHeldOutPredictions) {
  const auto train = fixture::random_binary(10, 3, 19, 2.0);
  std::vector<std::size_t> rows(train.n_samples());
  std::iota(rows.begin(), rows.end(), 0);
  const auto m = fit_ksvm(train, {});
  const auto probe = fixture::random_binary(25, 3, 20, 2.0);
  const auto base = predict_ksvm(m, probe);
  rows.push_back(3);
  auto dup_ids = train.sample_ids();
  dup_ids.push_back("dup");
  auto labels = train.labels();
  labels.push_back(train.labels()[3]);
  Eigen::MatrixXd x(train.n_samples() + 1, 3);
  x << train.values(), train.values().row(3);
  const auto m2 = fit_ksvm(ExpressionMatrix(x, train.feature_names(), dup_ids, labels, train.class_names()), {});
  const auto got = predict_ksvm(m2, probe);
  int changed = 0;
  for (std::size_t i = 0; i < got.size(); ++i) changed += got[i] != base[i];
  EXPECT_LE(changed, 5);
}

TEST(Ksvm, RejectsBadInputAndRoundTripsJson) {
  const auto train = fixture::random_binary(6, 3, 23);
  std::vector<int> one(train.n_samples(), 0);
  EXPECT_THROW(fit_ksvm(fixture::binary(train.values(), one), {}), Error);
  KsvmParams bad;
  bad.box_c = -1;
  EXPECT_THROW(fit_ksvm(train, bad), ConfigError);
  const auto m = fit_ksvm(train, {});
  const auto back = ksvm_from_json(nlohmann::json::parse(ksvm_to_json(m).dump()));
  EXPECT_EQ(decision_scores(back, train), decision_scores(m, train));
}
