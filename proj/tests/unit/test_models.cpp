#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cssm/autocov.hpp"
#include "cssm/longrun.hpp"
#include "cssm/models.hpp"

namespace cssm {
namespace {

double variance_of(const TimeSeries& x, std::size_t from, std::size_t to) {
  double s = 0.0, ss = 0.0;
  for (std::size_t i = from; i < to; ++i) {
    s += x[i];
    ss += x[i] * x[i];
  }
  const double m = static_cast<double>(to - from);
  return ss / m - (s / m) * (s / m);
}

TEST(SimulateTest, DegenerateMovingAverageIsWhiteNoise) {
  const TimeSeries x = simulate(ModelSpec{Ma2{0.0, 0.0}}, 100000, 1);
  const double v = variance_of(x, 0, x.size());
  EXPECT_GE(v, 0.98);
  EXPECT_LE(v, 1.02);
}

TEST(SimulateTest, ProductProcessAutocovariances) {
  const TimeSeries x = simulate(ModelSpec{Product2Dep{0.0, 1.0}}, 100000, 2);
  EXPECT_NEAR(sample_autocov(x, 0), 1.0, 0.02);
  EXPECT_NEAR(sample_autocov(x, 1), 0.0, 0.02);
  EXPECT_NEAR(sample_autocov(x, 2), 0.0, 0.02);
}

TEST(SimulateTest, GarchUnconditionalVariance) {
  const TimeSeries x = simulate(ModelSpec{Garch11{0.5, 0.1, 0.2}}, 100000, 3);
  const double expected = 0.5 / 0.7;
  EXPECT_NEAR(variance_of(x, 0, x.size()), expected, 0.05 * expected);
}

TEST(SimulateTest, MovingAverageTwoAutocovariances) {
  const double t1 = 0.5, t2 = 0.3;
  const std::size_t n = 100000;
  const TimeSeries x = simulate(ModelSpec{Ma2{t1, t2}}, n, 4);
  const std::vector<double> gamma{1 + t1 * t1 + t2 * t2, t1 + t1 * t2, t2};
  // Standard errors from the asymptotic covariance of the estimators.
  const CovMatrix c = bartlett_linear(gamma, 3.0, 2);
  for (std::size_t h = 0; h <= 2; ++h) {
    const double se = std::sqrt(c(h, h) / static_cast<double>(n));
    EXPECT_NEAR(sample_autocov(x, h), gamma[h], 3 * se) << "lag " << h;
  }
}

TEST(SimulateTest, Deterministic) {
  const ModelSpec specs[] = {ModelSpec{Arma11{0.2, 0.1}}, ModelSpec{Ma2{0.3, 0.3}},
                             ModelSpec{Product2Dep{0.0, 1.0}},
                             ModelSpec{Garch11{0.5, 0.1, 0.2}}};
  for (const ModelSpec& s : specs) {
    const TimeSeries a = simulate(s, 500, 42);
    const TimeSeries b = simulate(s, 500, 42);
    const TimeSeries c = simulate(s, 500, 43);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    EXPECT_FALSE(std::equal(a.begin(), a.end(), c.begin()));
  }
}

TEST(SimulateTest, HalvesHaveMatchingVariance) {
  const ModelSpec specs[] = {ModelSpec{Arma11{0.2, 0.1}}, ModelSpec{Ma2{0.3, 0.3}},
                             ModelSpec{Product2Dep{0.0, 1.0}},
                             ModelSpec{Garch11{0.5, 0.1, 0.2}}};
  for (const ModelSpec& s : specs) {
    const TimeSeries x = simulate(s, 100000, kDefaultSeed);
    const double first = variance_of(x, 0, 50000);
    const double second = variance_of(x, 50000, 100000);
    EXPECT_LT(std::abs(first - second) / first, 0.05) << family_name(s.family());
  }
}

TEST(SimulateTest, InvalidSpecsRejected) {
  EXPECT_THROW(simulate(ModelSpec{Garch11{0.5, 0.6, 0.4}}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Garch11{0.0, 0.1, 0.2}}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Garch11{0.5, -0.1, 0.2}}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Arma11{1.0, 0.0}}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Product2Dep{0.0, 0.0}}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Ma2{0.1, 0.1}, -1.0}, 10, 1), ConfigError);
  EXPECT_THROW(simulate(ModelSpec{Ma2{}}, 0, 1), DomainError);
}

TEST(SimulateWithChangeTest, NoChangeIsBitwiseIdenticalToSimulate) {
  const ModelSpec specs[] = {ModelSpec{Arma11{0.2, 0.1}}, ModelSpec{Ma2{0.3, 0.3}},
                             ModelSpec{Product2Dep{0.5, 1.2}},
                             ModelSpec{Garch11{0.5, 0.1, 0.2}}};
  for (const ModelSpec& s : specs) {
    const TimeSeries a = simulate(s, 800, 9);
    const TimeSeries b = simulate_with_change(ChangeSpec{400, s, s}, 800, 9);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << family_name(s.family());
  }
}

TEST(SimulateWithChangeTest, PrefixUnaffectedByLaterParameters) {
  const ChangeSpec a{300, ModelSpec{Arma11{0.2, 0.1}}, ModelSpec{Arma11{0.7, 0.6}}};
  const TimeSeries x = simulate_with_change(a, 600, 5);
  const TimeSeries y = simulate(a.before, 600, 5);
  EXPECT_TRUE(std::equal(x.begin(), x.begin() + 300, y.begin()));
  EXPECT_NE(x[300], y[300]);
  // State carried across the break: X_301 = phi' X_300 + Z_301 + theta' Z_300.
  // With phi' = phi and theta' = theta the paths coincide everywhere.
  const ChangeSpec same{300, a.before, a.before};
  const TimeSeries z = simulate_with_change(same, 600, 5);
  EXPECT_TRUE(std::equal(z.begin(), z.end(), y.begin()));
}

TEST(SimulateWithChangeTest, ProductVarianceJump) {
  // Var X = sigma_z^6 for the three-factor product.
  const ChangeSpec cs{100000, ModelSpec{Product2Dep{0.0, 1.0}},
                      ModelSpec{Product2Dep{0.0, 1.26}}};
  const TimeSeries x = simulate_with_change(cs, 200000, 11);
  const double before = variance_of(x, 0, 100000);
  const double after = variance_of(x, 100000, 200000);
  EXPECT_NEAR(before, 1.0, 0.10);
  EXPECT_NEAR(after, std::pow(1.26, 6), 0.10 * std::pow(1.26, 6));
}

TEST(SimulateWithChangeTest, Validation) {
  const ModelSpec arma{Arma11{0.2, 0.1}};
  const ModelSpec garch{Garch11{}};
  EXPECT_THROW(simulate_with_change(ChangeSpec{0, arma, arma}, 10, 1), DomainError);
  EXPECT_THROW(simulate_with_change(ChangeSpec{10, arma, arma}, 10, 1), DomainError);
  EXPECT_THROW(simulate_with_change(ChangeSpec{5, arma, garch}, 10, 1), ConfigError);
  EXPECT_THROW(simulate_with_change(ChangeSpec{5, arma, ModelSpec{Arma11{1.2, 0}}}, 10, 1),
               ConfigError);
}

}  // namespace
}  // namespace cssm
