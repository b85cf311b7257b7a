#include "lattice_lab/lattice.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lattice_lab/rng.hpp"
#include "lattice_lab/sampling.hpp"

namespace lattice_lab {
namespace {

SpaceRef Sup(std::size_t n) { return make_space(LatticeSpace::sup(n)); }

LatticeVector V(const SpaceRef& s, std::vector<double> c) { return LatticeVector(s, std::move(c)); }

TEST(LatticeSpace, RejectsDegenerateSpaces) {
  EXPECT_THROW(LatticeSpace::sup(0), lattice_error);
  EXPECT_THROW(LatticeSpace::weighted_l1({}), lattice_error);
  EXPECT_THROW(LatticeSpace::weighted_l1({0.5, 0.0, 0.5}), lattice_error);
  EXPECT_THROW(LatticeSpace::weighted_l1({0.5, -0.1}), lattice_error);
}

TEST(LatticeSpace, SupIgnoresWeights) {
  const LatticeSpace s = LatticeSpace::sup(3);
  EXPECT_TRUE(s.weights().empty());
  EXPECT_EQ(s.weight(2), 1.0);
}

TEST(LatticeVector, RejectsWrongLength) {
  EXPECT_THROW(V(Sup(2), {1.0, 2.0, 3.0}), lattice_error);
}

TEST(Lattice, JoinMeetExamples) {
  const auto s = Sup(2);
  EXPECT_EQ(join(V(s, {1, -2}), V(s, {0, 3})), V(s, {1, 3}));
  EXPECT_EQ(meet(V(s, {1, -2}), V(s, {0, 3})), V(s, {0, -2}));
  const auto x = V(s, {0.25, -7});
  EXPECT_EQ(join(x, x), x);
  EXPECT_EQ(meet(x, x), x);
  EXPECT_EQ(meet(abs(V(s, {1, 0})), abs(V(s, {0, 2}))), V(s, {0, 0}));
}

TEST(Lattice, JoinAgainstScalarMax) {
  const auto s = Sup(4);
  const auto x = V(s, {-1, 1, 0, 0});
  const auto y = V(s, {1, -1, 0, 0});
  const auto j = join(x, y);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(j[i], std::max(x[i], y[i]));
  EXPECT_EQ(j, V(s, {1, 1, 0, 0}));
}

TEST(Lattice, MismatchedSpacesThrow) {
  EXPECT_THROW(join(V(Sup(2), {1, 2}), V(Sup(3), {1, 2, 3})), lattice_error);
  const auto l1 = make_space(LatticeSpace::uniform_l1(2));
  EXPECT_THROW(meet(V(Sup(2), {1, 2}), V(l1, {1, 2})), lattice_error);
  EXPECT_THROW(leq(V(Sup(2), {1, 2}), V(l1, {1, 2})), lattice_error);
}

TEST(Lattice, AbsExamples) {
  const auto s = Sup(3);
  EXPECT_EQ(abs(V(s, {-1, 1, 0})), V(s, {1, 1, 0}));
  EXPECT_EQ(abs(LatticeVector::zero(s)), LatticeVector::zero(s));
}

TEST(Lattice, LeqExamples) {
  const auto s = Sup(2);
  EXPECT_TRUE(leq(V(s, {0, 0}), V(s, {1, 2})));
  EXPECT_FALSE(leq(V(s, {1, 0}), V(s, {0, 1})));
  EXPECT_FALSE(leq(V(s, {0, 1}), V(s, {1, 0})));
}

TEST(Lattice, NormExamples) {
  EXPECT_EQ(norm(V(Sup(4), {-1, 1, 0, 0})), 1.0);
  const auto half = make_space(LatticeSpace::weighted_l1({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(norm(V(half, {1, -1})), 1.0);
}

class LatticeProperties : public ::testing::TestWithParam<NormKind> {
protected:
  SpaceRef space(Rng& rng) {
    const std::size_t n = uniform_index(rng, 1, 9);
    if (GetParam() == NormKind::Sup) return Sup(n);
    std::vector<double> w(n);
    for (double& v : w) v = uniform(rng, 0.1, 2.0);
    return make_space(LatticeSpace::weighted_l1(w));
  }
};

TEST_P(LatticeProperties, AxiomsOnRandomTriples) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_stream(11, t);
    const auto s = space(rng);
    const auto x = random_vector(s, rng);
    const auto y = random_vector(s, rng);
    const auto z = random_vector(s, rng);
    EXPECT_EQ(join(x, y), join(y, x));
    EXPECT_EQ(meet(x, y), meet(y, x));
    EXPECT_EQ(join(join(x, y), z), join(x, join(y, z)));
    EXPECT_EQ(meet(meet(x, y), z), meet(x, meet(y, z)));
    EXPECT_EQ(join(x, meet(x, y)), x);
    EXPECT_EQ(meet(x, join(x, y)), x);
    EXPECT_TRUE(leq(meet(x, y), join(x, y)));
    EXPECT_EQ(abs(x), join(x, negate(x)));
    EXPECT_EQ(norm(abs(x)), norm(x));
  }
}

TEST_P(LatticeProperties, NormIsMonotoneAndSatisfiesLatticeEstimates) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_stream(12, t);
    const auto s = space(rng);
    const auto x = abs(random_vector(s, rng));
    const auto y = x + abs(random_vector(s, rng));  // 0 <= x <= y
    ASSERT_TRUE(leq(x, y));
    EXPECT_LE(norm(x), norm(y));

    const auto a = random_vector(s, rng);
    const auto b = random_vector(s, rng);
    EXPECT_LE(norm(a + b), norm(a) + norm(b) + 1e-12);
    EXPECT_TRUE(leq(abs(abs(a) - abs(b)), abs(a - b)));
    EXPECT_LE(norm(abs(a) - abs(b)), norm(a - b) + 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(BothNorms, LatticeProperties, ::testing::Values(NormKind::Sup, NormKind::WeightedL1),
                         [](const auto& info) { return std::string(info.param == NormKind::Sup ? "Sup" : "L1"); });

}  // namespace
}  // namespace lattice_lab
