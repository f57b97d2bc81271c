#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>

#include "l1ksvm/dataio.hpp"
#include "l1ksvm/error.hpp"
#include "l1ksvm/synthbench.hpp"

using namespace l1ksvm;

TEST(Synthbench, DefaultShapeMatchesBalancedPool) {
  const BenchmarkSpec spec;
  const auto m = generate_benchmark(spec);
  EXPECT_EQ(m.n_samples(), 2000u);
  EXPECT_EQ(m.n_features(), 1184u);
  EXPECT_EQ(m.n_classes(), 4u);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(m.class_count(c), 500u);
  EXPECT_EQ(benchmark_informative(spec).size(), 30u);
  EXPECT_EQ(m.feature_names().front(), "hsa-syn-0001");
}

TEST(Synthbench, DeterministicInSeed) {
  BenchmarkSpec spec;
  spec.n_per_class = 20;
  spec.n_features = 50;
  const auto a = generate_benchmark(spec), b = generate_benchmark(spec);
  EXPECT_EQ(a.values(), b.values());
  spec.seed = 1;
  EXPECT_NE(generate_benchmark(spec).values(), a.values());
}

TEST(Synthbench, ClassMeansConvergeToAssignedValues) {
  BenchmarkSpec spec;
  spec.n_per_class = 2000;
  spec.n_features = 40;
  spec.n_informative = 10;
  const auto m = generate_benchmark(spec);
  const Eigen::MatrixXd mu = benchmark_means(spec);
  const double sigma = spec.noise_std * spec.scale;
  for (auto j : benchmark_informative(spec)) {
    for (int c = 0; c < 4; ++c) {
      double s = 0;
      for (auto i : m.rows_of_class(c)) s += m.values()(i, j);
      const double mean = s / spec.n_per_class;
      EXPECT_NEAR(mean, mu(c, j), 5 * sigma / std::sqrt(spec.n_per_class));
      EXPECT_NEAR(std::abs(mu(c, j)), spec.effect_size * spec.scale, 1e-12);
    }
  }
}

TEST(Synthbench, UninformativeFeaturesPassTTestAtNominalRate) {
  BenchmarkSpec spec;
  spec.n_per_class = 50;
  spec.n_features = 1030;
  spec.n_informative = 30;
  const auto m = generate_benchmark(spec);
  const auto informative = benchmark_informative(spec);
  const auto a = m.rows_of_class(0), b = m.rows_of_class(1);
  const boost::math::students_t dist(static_cast<double>(a.size() + b.size() - 2));
  const double crit = boost::math::quantile(boost::math::complement(dist, 0.025));
  int tested = 0, rejected = 0;
  for (std::size_t j = 0; j < spec.n_features; ++j) {
    if (std::binary_search(informative.begin(), informative.end(), j)) continue;
    auto stats = [&](const std::vector<std::size_t>& rows) {
      double s = 0, ss = 0;
      for (auto i : rows) s += m.values()(i, j);
      const double mean = s / rows.size();
      for (auto i : rows) ss += (m.values()(i, j) - mean) * (m.values()(i, j) - mean);
      return std::pair{mean, ss / (rows.size() - 1)};
    };
    const auto [ma, va] = stats(a);
    const auto [mb, vb] = stats(b);
    const double pooled = ((a.size() - 1) * va + (b.size() - 1) * vb) / (a.size() + b.size() - 2);
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / a.size() + 1.0 / b.size()));
    ++tested;
    rejected += std::abs(t) > crit;
  }
  EXPECT_GE(tested, 500);
  EXPECT_NEAR(static_cast<double>(rejected) / tested, 0.05, 0.03);
}

TEST(Synthbench, EveryClassPairDiffersOnSomeInformativeFeature) {
  const BenchmarkSpec spec;
  const Eigen::MatrixXd mu = benchmark_means(spec);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) EXPECT_GT((mu.row(a) - mu.row(b)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Synthbench, ZeroEffectGivesIdenticalClassMeans) {
  BenchmarkSpec spec;
  spec.effect_size = 0;
  EXPECT_EQ(benchmark_means(spec).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Synthbench, RejectsInvalidSpec) {
  BenchmarkSpec spec;
  spec.n_informative = 2000;
  EXPECT_THROW(generate_benchmark(spec), ConfigError);
  spec = {};
  spec.noise_std = 0;
  EXPECT_THROW(generate_benchmark(spec), ConfigError);
  spec = {};
  spec.effect_size = -1;
  EXPECT_THROW(generate_benchmark(spec), ConfigError);
}

TEST(Synthbench, RoundTripsThroughCanonicalCsv) {
  BenchmarkSpec spec;
  spec.n_per_class = 5;
  spec.n_features = 12;
  spec.n_informative = 3;
  const auto m = generate_benchmark(spec);
  EXPECT_EQ(parse_expression_table(format_expression_table(m)).values(), m.values());
}
