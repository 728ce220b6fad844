#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cssm/longrun.hpp"
#include "cssm/models.hpp"
#include "support/oracles.hpp"

namespace cssm {
namespace {

TEST(TruncationLagTest, Examples) {
  EXPECT_EQ(truncation_lag(1000, 0.3), 7u);
  EXPECT_EQ(truncation_lag(500, 0.3), 6u);
  EXPECT_EQ(truncation_lag(2, 0.3), 1u);
  EXPECT_EQ(truncation_lag(20000, 0.3), 19u);
}

TEST(TruncationLagTest, RejectsBetaOutsideOpenHalfInterval) {
  EXPECT_THROW(truncation_lag(100, 0.0), ConfigError);
  EXPECT_THROW(truncation_lag(100, 0.5), ConfigError);
  EXPECT_THROW(truncation_lag(100, -0.1), ConfigError);
  EXPECT_THROW((EstimatorConfig{0.3, 0.0}.validate()), ConfigError);
}

TEST(SigmaBarTest, ZeroSeries) {
  const TimeSeries x(std::vector<double>(12, 0.0));
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_EQ(sigma_bar(x, 0, 1, l), 0.0);
    EXPECT_EQ(sigma_bar(x, 2, 2, l), 0.0);
  }
}

TEST(SigmaBarTest, ConstantOnesAtZeroDisplacement) {
  EXPECT_DOUBLE_EQ(sigma_bar(TimeSeries({1, 1, 1, 1}), 0, 0, 0), 0.0);
}

TEST(SigmaBarTest, AlternatingOneTwo) {
  const std::vector<double> raw{1, 2, 1, 2};
  // Hand evaluation: retained i = 1..3, Y1 = Y2 = 4, gamma(0) = 2.5,
  // so 3 * (8 - 2 * 6.25) = -13.5.
  EXPECT_DOUBLE_EQ(testing::ref_sigma_bar(raw, 0, 0, 1), -13.5);
  EXPECT_DOUBLE_EQ(sigma_bar(TimeSeries(raw), 0, 0, 1), -13.5);
}

TEST(SigmaBarTest, IndexBounds) {
  const TimeSeries x({1, 2, 3, 4, 5});
  EXPECT_THROW(sigma_bar(x, 5, 0, 0), DomainError);
  EXPECT_THROW(sigma_bar(x, 0, 0, 5), DomainError);
  // l + max(h, k) must leave at least one product.
  EXPECT_THROW(sigma_bar(x, 2, 1, 3), DomainError);
  EXPECT_NO_THROW(sigma_bar(x, 2, 1, 2));
}

TEST(SigmaBarTest, MatchesLiteralReference) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> raw = testing::random_series(rng, 6, 50);
    const TimeSeries x(raw);
    const std::size_t n = raw.size();
    for (std::size_t h = 0; h <= 2; ++h) {
      for (std::size_t k = 0; k <= 2; ++k) {
        for (std::size_t l = 0; l + std::max(h, k) < n; ++l) {
          const double fast = sigma_bar(x, h, k, l);
          const double ref = testing::ref_sigma_bar(raw, h, k, l);
          worst = std::max(worst, std::abs(fast - ref));
        }
      }
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(ThetaBarTest, ZeroSeries) {
  EXPECT_EQ(theta_bar(TimeSeries(std::vector<double>(40, 0.0)), 0, 1, {}), 0.0);
}

TEST(ThetaBarTest, ExactlySymmetric) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeSeries x(testing::random_series(rng, 20, 200));
    for (std::size_t h = 0; h <= 3; ++h) {
      for (std::size_t k = h + 1; k <= 3; ++k) {
        EXPECT_EQ(theta_bar(x, h, k, {}), theta_bar(x, k, h, {}));
      }
    }
  }
}

TEST(ThetaBarTest, EqualsScaledSumOfSigmaBar) {
  std::mt19937_64 rng(5);
  const std::vector<double> raw = testing::random_series(rng, 64, 64);
  const TimeSeries x(raw);
  const std::size_t trunc = truncation_lag(64, 0.3);
  double s = 0.0;
  for (std::size_t l = 0; l <= trunc; ++l) s += testing::ref_sigma_bar(raw, 1, 2, l);
  EXPECT_NEAR(theta_bar(x, 1, 2, {}), s / 64.0, 1e-10);
}

TEST(ThetaBarTest, MovingAverageTopLeftEntry) {
  // c_00 = 2(1 + 4 theta^2 + theta^4) = 4.125 at theta = 0.5.
  const TimeSeries x = simulate(ModelSpec{Ma2{0.5, 0.0}}, 20000, 314);
  EXPECT_NEAR(theta_bar(x, 0, 0, {}), 4.125, 0.4125);
}

TEST(EstimateLongrunCovTest, WhiteNoise) {
  const TimeSeries x = simulate(ModelSpec{Ma2{0.0, 0.0}}, 20000, 2718);
  const CovMatrix c = estimate_longrun_cov(x, 1, {});
  EXPECT_NEAR(c(0, 0), 2.0, 0.30);
  EXPECT_NEAR(c(1, 1), 1.0, 0.15);
  EXPECT_NEAR(c(0, 1), 0.0, 0.15);
  EXPECT_EQ(c(0, 1), c(1, 0));
}

TEST(EstimateLongrunCovTest, ZeroSeriesGivesFloorTimesIdentity) {
  EstimatorConfig cfg;
  cfg.eps_floor = 1e-6;
  const CovMatrix c = estimate_longrun_cov(TimeSeries(std::vector<double>(100, 0.0)), 2, cfg);
  EXPECT_TRUE(c.entries().isApprox(1e-6 * Eigen::MatrixXd::Identity(3, 3), 1e-12));
}

TEST(EstimateLongrunCovTest, InsufficientDataNamesMinimum) {
  const std::size_t minimum = minimum_sample_size(3, 0.3);
  EXPECT_GE(minimum, 5u);
  std::mt19937_64 rng(3);
  const auto raw = testing::random_series(rng, minimum - 1, minimum - 1);
  try {
    estimate_longrun_cov(TimeSeries(raw), 3, {});
    FAIL() << "expected InsufficientDataError";
  } catch (const InsufficientDataError& e) {
    EXPECT_EQ(e.minimum(), minimum);
    EXPECT_NE(std::string(e.what()).find(std::to_string(minimum)), std::string::npos);
  }
  const auto ok = testing::random_series(rng, minimum, minimum);
  EXPECT_NO_THROW(estimate_longrun_cov(TimeSeries(ok), 3, {}));
}

TEST(FloorEigenvaluesTest, RankDeficientInputIsLifted) {
  Eigen::MatrixXd raw(3, 3);
  raw << 1, 1, 0, 1, 1, 0, 0, 0, 2;  // eigenvalues 0, 2, 2
  const Eigen::MatrixXd out = floor_eigenvalues(raw, 0.01);
  const CovMatrix c(out);
  EXPECT_GE(c.min_eigenvalue(), 0.01 * (1 - 1e-9));
  EXPECT_NEAR(out(2, 2), 2.0, 1e-12);
  // Already above the floor: returned unchanged.
  const Eigen::MatrixXd pd = Eigen::Vector3d(1, 2, 3).asDiagonal();
  EXPECT_EQ(floor_eigenvalues(pd, 0.5), pd);
}

TEST(EstimateLongrunCovTest, AlwaysPositiveDefinite) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> raw = testing::random_series(rng, 20, 120);
    const TimeSeries x(raw);
    const std::size_t max_lag = trial % 4;
    const EstimatorConfig cfg;
    const Eigen::MatrixXd unreg = raw_longrun_cov(x, max_lag, cfg);
    const CovMatrix c = estimate_longrun_cov(x, max_lag, cfg);
    const double floor = applied_floor(unreg, cfg);
    EXPECT_GT(floor, 0.0);
    EXPECT_GE(c.min_eigenvalue(), floor * (1 - 1e-6));
    EXPECT_EQ(c.entries(), c.entries().transpose());
  }
}

// Closed-form matrix for MA(1) with unit innovation variance.
Eigen::Matrix2d ma1_closed_form(double theta) {
  const double t2 = theta * theta;
  Eigen::Matrix2d c;
  c << 2 * (1 + 4 * t2 + t2 * t2), 4 * theta * (1 + t2),
       4 * theta * (1 + t2), 1 + 5 * t2 + t2 * t2;
  return c;
}

TEST(BartlettLinearTest, MovingAverageOneClosedForm) {
  for (double theta : {-0.8, -0.3, 0.0, 0.5, 0.9}) {
    const std::vector<double> gamma{1 + theta * theta, theta};
    const CovMatrix c = bartlett_linear(gamma, 3.0, 1);
    const Eigen::Matrix2d expected = ma1_closed_form(theta);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        EXPECT_NEAR(c(i, j), expected(i, j), 1e-12) << "theta=" << theta;
      }
    }
    EXPECT_NEAR(c(0, 0), 2 * gamma[0] * gamma[0] + 4 * gamma[1] * gamma[1], 1e-12);
  }
}

TEST(BartlettLinearTest, InnovationScaleEntersToTheFourthPower) {
  const double sigma2 = 2.0, theta = 0.5;
  const std::vector<double> gamma{(1 + theta * theta) * sigma2, theta * sigma2};
  const CovMatrix c = bartlett_linear(gamma, 3.0, 1);
  EXPECT_NEAR(c(0, 0), 4.125 * sigma2 * sigma2, 1e-12);
}

TEST(BartlettLinearTest, WhiteNoise) {
  const std::vector<double> gamma{1.0};
  const CovMatrix c = bartlett_linear(gamma, 3.0, 3);
  const Eigen::Vector4d diag(2, 1, 1, 1);
  EXPECT_TRUE(c.entries().isApprox(Eigen::MatrixXd(diag.asDiagonal()), 1e-14));
}

TEST(BartlettLinearTest, KurtosisTerm) {
  const std::vector<double> gamma{1.25, 0.5};
  const CovMatrix gauss = bartlett_linear(gamma, 3.0, 1);
  const CovMatrix heavy = bartlett_linear(gamma, 9.0, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(heavy(i, j) - gauss(i, j), 6.0 * gamma[i] * gamma[j], 1e-12);
    }
  }
  EXPECT_THROW(bartlett_linear(gamma, 0.0, 1), ConfigError);
}

}  // namespace
}  // namespace cssm
