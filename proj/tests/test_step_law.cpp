#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include <hyperwalk/step_law.hpp>

using namespace hyperwalk;

TEST(StepLaw, ParsesNames) {
  EXPECT_EQ(StepLaw::parse("uniform").name(), "uniform");
  EXPECT_EQ(StepLaw::parse("paper-triangular").name(), "paper-triangular");
  EXPECT_EQ(StepLaw::parse("triangular:0.21").name(), "triangular:0.21");
  EXPECT_THROW(StepLaw::parse("triangular:x"), ConfigError);
  EXPECT_THROW(StepLaw::parse("triangular:1"), ConfigError);
  EXPECT_THROW(StepLaw::parse("gauss"), ConfigError);
  EXPECT_THROW(StepLaw::parse("table:/nonexistent/file.csv"), ConfigError);
}

TEST(StepLaw, ParsesTableFile) {
  const auto path = std::filesystem::temp_directory_path() / "hyperwalk_table_test.csv";
  {
    std::ofstream f(path);
    f << "# u,x\n0,-0.5\n0.5,0.5\n1,0.9\n";
  }
  const auto law = StepLaw::parse("table:" + path.string());
  EXPECT_DOUBLE_EQ(law.quantile(0.25), 0.0);
  EXPECT_DOUBLE_EQ(law.quantile(0.75), 0.7);
  std::filesystem::remove(path);
}

// The displayed density (100/121)(x+1) on (−1, 0.21] is Triangular(0.21).
TEST(StepLaw, TriangularCdfAtBreakpoint) {
  const auto law = StepLaw::triangular(0.21);
  EXPECT_NEAR(law.cdf(0.21), 0.605, 1e-15);
  EXPECT_NEAR(law.cdf(0.21), 100.0 / 121.0 * 1.21 * 1.21 / 2.0, 1e-15);
  EXPECT_EQ(law.cdf(-1.0), 0.0);
  EXPECT_EQ(law.cdf(1.0), 1.0);
}

TEST(StepLaw, QuantileInvertsCdf) {
  for (const auto& law : {StepLaw::uniform(), StepLaw::triangular(0.1), StepLaw::triangular(-0.7),
                          StepLaw::table({{0.0, -0.5}, {0.3, 0.0}, {1.0, 0.8}})}) {
    for (double u = 0.01; u < 1.0; u += 0.01) {
      EXPECT_NEAR(law.cdf(law.quantile(u)), u, 1e-12) << law.name() << " u=" << u;
    }
  }
}

TEST(StepLaw, TriangularDensityIntegratesToOne) {
  const double m = 0.1;
  const double left = (m + 1.0) * (m + 1.0) / (2.0 * (1.0 + m));
  const double right = (1.0 - m) * (1.0 - m) / (2.0 * (1.0 - m));
  EXPECT_DOUBLE_EQ(left + right, 1.0);
  EXPECT_DOUBLE_EQ(StepLaw::triangular(m).cdf(m), left);
}

TEST(StepLaw, UniformGammaMomentsFromMillionDraws) {
  PhiloxStream rng(2024, 0, Substream::steps);
  const auto law = StepLaw::uniform();
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_step(law, rng);
    ASSERT_GT(s.x, -1.0);
    ASSERT_LT(s.x, 1.0);
    sum += s.gamma;
    sum2 += s.gamma * s.gamma;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double pi2_3 = std::numbers::pi * std::numbers::pi / 3.0;
  EXPECT_NEAR(mean, 0.0, 0.006);
  EXPECT_NEAR(var, pi2_3, 0.01 * pi2_3);
}

TEST(StepLaw, SamplesStayInsideOpenInterval) {
  PhiloxStream rng(5, 1, Substream::steps);
  const auto law = StepLaw::triangular(0.1);
  for (int i = 0; i < 200000; ++i) {
    const auto s = sample_step(law, rng);
    ASSERT_GT(s.x, -1.0);
    ASSERT_LT(s.x, 1.0);
    ASSERT_TRUE(std::isfinite(s.gamma));
    EXPECT_NEAR(s.gamma, std::log((1 + s.x) / (1 - s.x)), 1e-14 * std::max(1.0, std::abs(s.gamma)));
  }
}

TEST(StepLaw, TableValidation) {
  EXPECT_THROW(StepLaw::table({{0.0, 0.1}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.1, 0.0}, {1.0, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.0, 0.0}, {0.9, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.0, -1.0}, {1.0, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.0, 0.0}, {1.0, 1.0}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.0, 0.0}, {0.5, 0.3}, {0.5, 0.4}, {1.0, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw::table({{0.0, 0.3}, {0.5, 0.2}, {1.0, 0.5}}), ConfigError);
  EXPECT_NO_THROW(StepLaw::table({{0.0, 0.2}, {0.5, 0.2}, {1.0, 0.5}}));
}

TEST(StepLaw, ConstantLawIsAPointMass) {
  const auto law = StepLaw::constant(0.5);
  PhiloxStream rng(1, 0, Substream::steps);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(sample_step(law, rng).gamma, std::log(3.0), 1e-15);
  EXPECT_EQ(law.cdf(0.49), 0.0);
  EXPECT_EQ(law.cdf(0.5), 1.0);
}
