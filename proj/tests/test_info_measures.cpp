#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace covert;

namespace {

// 40-digit reference values of the closed forms below.
constexpr double kKlP1Row1Row0 = 0.24555968055008805;
constexpr double kChi2QRow1 = 0.6113040935672515;
constexpr double kChi2QRow2 = 0.6632812865497075;
constexpr double kCrossQRows12 = 0.05019005847953213;
constexpr double kBsc02UniformMi = 0.19274475702175743;

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
  return oracle::random_channel(rng, 1, n, 0.0).front();
}

}  // namespace

TEST(KlDivergence, Basics) {
  EXPECT_DOUBLE_EQ(kl_divergence(std::vector{0.3, 0.7}, std::vector{0.3, 0.7}), 0.0);
  EXPECT_NEAR(kl_divergence(std::vector{1.0, 0.0}, std::vector{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_divergence(fixtures::kP1[1], fixtures::kP1[0]), kKlP1Row1Row0, 1e-14);
}

TEST(KlDivergence, AbsoluteContinuityViolationReportsIndex) {
  try {
    kl_divergence(std::vector{0.5, 0.5, 0.0}, std::vector{1.0, 0.0, 0.0});
    FAIL();
  } catch (const SupportError& e) {
    EXPECT_EQ(e.kind(), SupportError::Kind::AbsoluteContinuity);
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(KlDivergence, ZeroTimesLogZeroIsZero) {
  EXPECT_NEAR(kl_divergence(std::vector{0.0, 1.0}, std::vector{0.0, 1.0}), 0.0, 0.0);
}

TEST(Chi2, Example1WardenRows) {
  const auto& q = fixtures::kQ;
  EXPECT_DOUBLE_EQ(chi2_distance(q[0], q[0]), 0.0);
  EXPECT_NEAR(chi2_distance(q[1], q[0]), kChi2QRow1, 1e-14);
  EXPECT_NEAR(chi2_distance(q[2], q[0]), kChi2QRow2, 1e-14);
}

TEST(Chi2, DivisionSupport) {
  try {
    chi2_distance(std::vector{0.5, 0.5}, std::vector{1.0, 0.0});
    FAIL();
  } catch (const SupportError& e) {
    EXPECT_EQ(e.kind(), SupportError::Kind::DivisionSupport);
    EXPECT_EQ(e.index(), 1u);
  }
  EXPECT_DOUBLE_EQ(chi2_distance(std::vector{1.0, 0.0}, std::vector{1.0, 0.0}), 0.0);
}

TEST(CrossChi2, Example1AndCollapses) {
  const auto& q = fixtures::kQ;
  EXPECT_NEAR(cross_chi2(q[1], q[2], q[0]), kCrossQRows12, 1e-14);
  EXPECT_DOUBLE_EQ(cross_chi2(q[0], q[2], q[0]), 0.0);
  EXPECT_NEAR(cross_chi2(q[1], q[1], q[0]), chi2_distance(q[1], q[0]), 1e-15);
}

TEST(CrossChi2, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_pmf(rng, 5), b = random_pmf(rng, 5), q = random_pmf(rng, 5);
    EXPECT_NEAR(cross_chi2(a, b, q), static_cast<double>(oracle::cross(a, b, q)), 1e-11);
    EXPECT_NEAR(chi2_distance(a, q), static_cast<double>(oracle::chi2(a, q)), 1e-11);
    EXPECT_NEAR(kl_divergence(a, q), static_cast<double>(oracle::kl(a, q)), 1e-13);
  }
}

TEST(OutputDistribution, Examples) {
  const Channel q(fixtures::kQ);
  const auto z0 = output_distribution(std::vector{1.0, 0.0, 0.0}, q);
  for (std::size_t z = 0; z < 4; ++z) EXPECT_DOUBLE_EQ(z0[z], fixtures::kQ[0][z]);

  const auto u = output_distribution(std::vector(3, 1.0 / 3.0), Channel::identity(3));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(u[i], 1.0 / 3.0, 1e-16);

  const auto mix = output_distribution(std::vector{0.0, 0.8, 0.2}, q);
  for (std::size_t z = 0; z < 4; ++z)
    EXPECT_NEAR(mix[z], 0.8 * fixtures::kQ[1][z] + 0.2 * fixtures::kQ[2][z], 1e-16);

  EXPECT_THROW(output_distribution(std::vector{0.5, 0.5}, q), ModelError);
}

TEST(MutualInformation, Examples) {
  const Channel equal_rows{{0.3, 0.7}, {0.3, 0.7}};
  EXPECT_NEAR(mutual_information(std::vector{0.4, 0.6}, equal_rows), 0.0, 1e-16);
  const Channel bsc{{0.8, 0.2}, {0.2, 0.8}};
  EXPECT_NEAR(mutual_information(std::vector{0.5, 0.5}, bsc), kBsc02UniformMi, 1e-15);
  EXPECT_NEAR(mutual_information(std::vector{0.5, 0.5}, Channel::identity(2)), std::log(2.0), 1e-15);
}

TEST(MutualInformation, MatchesJointTableOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto ch = oracle::random_channel(rng, 4, 3, 0.0);
    const auto px = random_pmf(rng, 4);
    const double mi = mutual_information(px, Channel(ch));
    EXPECT_GE(mi, 0.0);
    EXPECT_NEAR(mi, static_cast<double>(oracle::mi(px, ch)), 1e-13);
  }
}

TEST(ConditionalMutualInformation, Collapses) {
  const Channel ch(fixtures::kP1);
  const std::vector<double> row{0.2, 0.5, 0.3};
  EXPECT_NEAR(conditional_mutual_information(std::vector{1.0}, Channel({row}), ch),
              mutual_information(row, ch), 1e-15);
  EXPECT_NEAR(conditional_mutual_information(std::vector{0.4, 0.6}, Channel({row, row}), ch),
              mutual_information(row, ch), 1e-15);
}

TEST(ConditionalMutualInformation, MatchesBruteForceJoint) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto pu = random_pmf(rng, 2);
    const auto pxu = oracle::random_channel(rng, 2, 3, 0.0);
    const auto ch = oracle::random_channel(rng, 3, 4, 0.0);
    EXPECT_NEAR(conditional_mutual_information(pu, Channel(pxu), Channel(ch)),
                static_cast<double>(oracle::cmi(pu, pxu, ch)), 1e-12);
  }
}

TEST(Properties, NonnegativityAndIdentity) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_pmf(rng, 4), q = random_pmf(rng, 4);
    EXPECT_GE(kl_divergence(p, q), 0.0);
    EXPECT_GE(chi2_distance(p, q), 0.0);
    EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-12);
    EXPECT_NEAR(chi2_distance(p, p), 0.0, 1e-12);
  }
}

TEST(Properties, ChainIdentity) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto pu = random_pmf(rng, 3);
    const Channel pxu(oracle::random_channel(rng, 3, 4, 0.0));
    const Channel ch(oracle::random_channel(rng, 4, 3, 0.0));
    const auto px = output_vector(pu, pxu);
    const double lhs = mutual_information(px, ch) - mutual_information(pu, pxu.then(ch));
    EXPECT_NEAR(lhs, conditional_mutual_information(pu, pxu, ch), 1e-10);
  }
}

TEST(Properties, DataProcessingUnderDegradation) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const auto p1 = oracle::random_channel(rng, 3, 4, 0.0);
    const auto w = oracle::random_channel(rng, 4, 3, 0.0);
    const Channel c1(p1), c2(oracle::multiply(p1, w));
    const auto px = random_pmf(rng, 3);
    EXPECT_LE(mutual_information(px, c2), mutual_information(px, c1) + 1e-12);
  }
}
