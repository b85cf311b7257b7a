#include "lattice_lab/operator.hpp"

#include <gtest/gtest.h>

#include "lattice_lab/filtration.hpp"
#include "lattice_lab/sampling.hpp"
#include "oracles.hpp"

namespace lattice_lab {
namespace {

SpaceRef Sup(std::size_t n) { return make_space(LatticeSpace::sup(n)); }

LatticeVector V(const SpaceRef& s, std::vector<double> c) { return LatticeVector(s, std::move(c)); }

TEST(PosOperator, RejectsNonSquare) {
  EXPECT_THROW(PosOperator::from_rows(Sup(2), {{1, 0}, {0, 1, 2}}), lattice_error);
  EXPECT_THROW(PosOperator::from_rows(Sup(2), {{1, 0}}), lattice_error);
  EXPECT_THROW(PosOperator(Sup(2), std::vector<double>(3)), lattice_error);
}

TEST(Apply, IdentityAndZero) {
  const auto s = Sup(3);
  const auto x = V(s, {1, -2, 3});
  EXPECT_EQ(apply(PosOperator::identity(s), x), x);
  EXPECT_EQ(apply(PosOperator::zero(s), x), LatticeVector::zero(s));
}

TEST(Apply, PairingLevelAveragesTrailingPair) {
  // Two leading ones then one averaging block.
  const auto s = Sup(4);
  const PosOperator E = pairing_operator(s, 2);
  EXPECT_EQ(apply(E, V(s, {-1, 1, -1, 1})), V(s, {-1, 1, 0, 0}));
}

TEST(Apply, SpaceMismatchThrows) {
  EXPECT_THROW(apply(PosOperator::identity(Sup(2)), V(Sup(3), {1, 2, 3})), lattice_error);
}

TEST(Compose, IdentityAndTruncationOrderLaw) {
  const Filtration F = build_truncation(4);
  const auto& E1 = F.level(1);
  const auto& E2 = F.level(2);
  EXPECT_EQ(compose(PosOperator::identity(F.space()), E2), E2);
  EXPECT_EQ(compose(E1, E2), E1);
  EXPECT_EQ(compose(E2, E1), E1);
}

TEST(IsPositive, Examples) {
  const auto s = Sup(2);
  EXPECT_TRUE(is_positive(PosOperator::identity(s)));
  EXPECT_FALSE(is_positive(PosOperator::from_rows(s, {{1, -0.5}, {0, 1}})));
  const Filtration D = build_dyadic(3);
  for (const auto& E : D.operators()) {
    EXPECT_TRUE(is_positive(E));
    for (double v : E.entries()) {
      // entries are 0 or 2^-k
      if (v != 0.0) {
        EXPECT_EQ(std::exp2(std::round(std::log2(v))), v);
      }
    }
  }
}

TEST(IsProjection, Examples) {
  const auto s = Sup(2);
  EXPECT_TRUE(is_projection(PosOperator::identity(s)));
  EXPECT_TRUE(is_projection(PosOperator::from_rows(s, {{0.5, 0.5}, {0.5, 0.5}})));
  EXPECT_FALSE(is_projection(PosOperator::diagonal(s, {2, 2})));
}

TEST(OperatorNorm, Examples) {
  EXPECT_EQ(operator_norm(PosOperator::identity(Sup(3))), 1.0);
  EXPECT_EQ(operator_norm(PosOperator::identity(make_space(LatticeSpace::uniform_l1(3)))), 1.0);
  EXPECT_DOUBLE_EQ(operator_norm(build_pairing(3).level(1)), 1.0);
  EXPECT_DOUBLE_EQ(operator_norm(build_dyadic(2).level(1)), 1.0);
}

TEST(OperatorNorm, SupIsMaxAbsoluteRowSum) {
  const auto s = Sup(2);
  EXPECT_DOUBLE_EQ(operator_norm(PosOperator::from_rows(s, {{1, -2}, {0.5, 0.5}})), 3.0);
}

TEST(OperatorNorm, WeightedL1IsMaxWeightedColumnSum) {
  const auto s = make_space(LatticeSpace::weighted_l1({0.25, 0.75}));
  // column 0: (0.25*1 + 0.75*1) / 0.25 = 4;  column 1: (0.25*0 + 0.75*1) / 0.75 = 1
  EXPECT_DOUBLE_EQ(operator_norm(PosOperator::from_rows(s, {{1, 0}, {1, 1}})), 4.0);
}

class OperatorNormOracle : public ::testing::TestWithParam<NormKind> {};

TEST_P(OperatorNormOracle, DominatesSamplingAndIsTightOnSmallDims) {
  for (std::uint64_t t = 0; t < 40; ++t) {
    Rng rng = trial_stream(21, t);
    const std::size_t n = uniform_index(rng, 1, 5);
    SpaceRef s;
    if (GetParam() == NormKind::Sup) {
      s = Sup(n);
    } else {
      std::vector<double> w(n);
      for (double& v : w) v = uniform(rng, 0.1, 1.0);
      s = make_space(LatticeSpace::weighted_l1(w));
    }
    const PosOperator T = random_positive_operator(s, rng);
    const double formula = operator_norm(T);
    const double sampled = oracle::sampled_operator_norm(T, rng);
    EXPECT_GE(formula, sampled - 1e-9);
    EXPECT_LE(formula, sampled * 1.02);
  }
}

INSTANTIATE_TEST_SUITE_P(BothNorms, OperatorNormOracle, ::testing::Values(NormKind::Sup, NormKind::WeightedL1),
                         [](const auto& info) { return std::string(info.param == NormKind::Sup ? "Sup" : "L1"); });

TEST(IsContractive, ScaledIdentityIsNot) {
  EXPECT_TRUE(is_contractive(PosOperator::identity(Sup(2))));
  EXPECT_FALSE(is_contractive(PosOperator::diagonal(Sup(2), {1.5, 1})));
}

TEST(IsBandProjection, Examples) {
  const auto s = Sup(4);
  EXPECT_TRUE(is_band_projection(PosOperator::diagonal(s, {1, 1, 0, 0})));
  EXPECT_TRUE(is_band_projection(PosOperator::identity(s)));
  EXPECT_FALSE(is_band_projection(pairing_operator(s, 0)));
  EXPECT_FALSE(is_band_projection(PosOperator::diagonal(s, {1, 0.5, 0, 0})));
}

TEST(IsBandProjection, CommutesWithAbs) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_stream(22, t);
    const std::size_t n = uniform_index(rng, 1, 8);
    const auto s = Sup(n);
    std::vector<double> mask(n);
    for (double& m : mask) m = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : 1.0;
    const PosOperator P = PosOperator::diagonal(s, mask);
    ASSERT_TRUE(is_band_projection(P));
    const auto x = random_vector(s, rng);
    EXPECT_EQ(apply(P, abs(x)), abs(apply(P, x)));
  }
}

TEST(Disjoint, Examples) {
  const auto s = Sup(3);
  EXPECT_TRUE(disjoint(LatticeVector::unit(s, 1), LatticeVector::unit(s, 2)));
  const auto x = V(s, {0, -3, 1});
  EXPECT_FALSE(disjoint(x, x));
  EXPECT_TRUE(disjoint(V(s, {1, 1, 0}), V(s, {0, 0, 5})));
}

}  // namespace
}  // namespace lattice_lab
