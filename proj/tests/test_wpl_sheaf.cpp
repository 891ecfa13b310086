#include "test_support.hpp"
#include "wpl/sheaf.hpp"

#include <gtest/gtest.h>

using namespace wpl;
using namespace wpl::testing;

namespace {

WeightData line(std::vector<int> w) {
  std::vector<GaussRat> pts{GaussRat(0), GaussRat(1), GaussRat(-1), GaussRat(2)};
  pts.resize(w.size());
  return {pts, w};
}

PatchedSheaf trivial(const WeightData& W, std::size_t n) {
  std::vector<Flag> flags;
  for (std::size_t i = 0; i < W.size(); ++i) flags.push_back(Flag::from_interior(n, std::vector<GMat>(W.weight(i) - 1, GMat(n, 0))));
  return parabolic_to_sheaf(n, flags, W);
}

GMat e(std::size_t n, std::size_t j) {
  GMat v(n, 1);
  v(j, 0) = GaussRat(1);
  return v;
}

bool mentions(const Report& r, const std::string& needle) {
  return r.summary().find(needle) != std::string::npos;
}

}  // namespace

TEST(CheckCycle, Examples) {
  const Charts ch(line({2, 2}));
  const RatFun x = ch.uniformizer(0);
  EXPECT_TRUE(check_cycle({0, 2, {RatMat::scalar(2, x)}}, Charts(line({1, 2}))).ok());
  EXPECT_TRUE(check_cycle({0, 1, {RatMat{{RatFun(1)}}, RatMat{{x}}}}, ch).ok());
  const Report bad = check_cycle({0, 1, {RatMat{{RatFun(1)}}, RatMat{{x * x}}}}, ch);
  EXPECT_FALSE(bad.ok());
  EXPECT_TRUE(mentions(bad, "s=0"));
  EXPECT_THROW(check_cycle({0, 2, {RatMat{{x}}, RatMat{{x}}}}, ch), std::invalid_argument);
}

TEST(CheckSheaf, PatchingUnits) {
  const WeightData W = line({1, 1, 1});
  PatchedSheaf S = trivial(W, 1);
  EXPECT_TRUE(check_sheaf(S).ok());
  // (z - a_3)/(z - a_1) is a unit on every overlap
  const RatFun u(Poly::linear(W.point(2)), RatFun::Denominator{{W.point(0), 1}});
  const RatFun u_inv = u.inverse(W.points);
  S.patching[0][1] = S.patching[0][2] = RatMat{{u}};
  S.patching[1][0] = S.patching[2][0] = RatMat{{u_inv}};
  EXPECT_TRUE(check_sheaf(S).ok()) << check_sheaf(S).summary();
  // z - a_3 alone has a pole at infinity, which lies in every chart
  PatchedSheaf T = trivial(W, 1);
  T.patching[0][1] = RatMat{{RatFun(Poly::linear(W.point(2)))}};
  EXPECT_FALSE(check_sheaf(T).ok());
  PatchedSheaf Z = trivial(W, 2);
  Z.patching[0][1] = RatMat{{RatFun(1), RatFun(1)}, {RatFun(1), RatFun(1)}};
  EXPECT_TRUE(mentions(check_sheaf(Z), "not invertible"));
}

TEST(ExtractFlags, RankOneExamples) {
  const WeightData W = line({2, 1});
  const Charts ch(W);
  const RatFun x0 = ch.uniformizer(0), x1 = ch.uniformizer(1);
  PatchedSheaf S = trivial(W, 1);
  S.cycles[0].mats = {RatMat{{RatFun(1)}}, RatMat{{x0}}};
  EXPECT_EQ(extract_flags(S)[0].dims(), (std::vector<std::size_t>{1, 1, 0}));
  S.cycles[0].mats = {RatMat{{x0}}, RatMat{{RatFun(1)}}};
  EXPECT_EQ(extract_flags(S)[0].dims(), (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(extract_flags(S)[1].dims(), (std::vector<std::size_t>{1, 0}));
  (void)x1;
}

TEST(ParabolicToSheaf, Examples) {
  const WeightData W = line({2, 2});
  const Charts ch(W);
  PatchedSheaf S = trivial(W, 1);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_EQ(S.cycles[i].mats, (std::vector<RatMat>{RatMat{{ch.uniformizer(i)}}, RatMat{{RatFun(1)}}}));

  const RatFun x = ch.uniformizer(0);
  std::vector<Flag> flags{Flag::from_interior(2, {e(2, 1)}), Flag::from_interior(2, {GMat(2, 0)})};
  PatchedSheaf T = parabolic_to_sheaf(2, flags, W);
  EXPECT_EQ(T.cycles[0].mats[0], RatMat::diagonal({x, RatFun(1)}));
  EXPECT_EQ(T.cycles[0].mats[1], RatMat::diagonal({RatFun(1), x}));

  const WeightData W1 = line({1, 1, 1});
  PatchedSheaf O = trivial(W1, 1);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(O.cycles[i].mats[0], RatMat{{Charts(W1).uniformizer(i)}});
  EXPECT_TRUE(check_sheaf(O).ok());
  EXPECT_THROW(parabolic_to_sheaf(3, flags, W), std::invalid_argument);
}

TEST(ParabolicToSheaf, FlagRoundTripProperty) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 25; ++t) {
    const WeightData W = random_weights(rng, 4, 3);
    const std::size_t n = 1 + rng() % 3;
    const auto flags = random_flags(rng, n, W);
    const PatchedSheaf S = parabolic_to_sheaf(n, flags, W);
    ASSERT_TRUE(check_sheaf(S).ok()) << check_sheaf(S).summary();
    const auto back = extract_flags(S);
    for (std::size_t i = 0; i < W.size(); ++i) EXPECT_TRUE(back[i].same_subspaces(flags[i])) << "point " << i;
  }
}

TEST(ShiftSheaf, Examples) {
  const WeightData W = line({2, 3});
  const PatchedSheaf S = trivial(W, 1);
  EXPECT_EQ(shift_sheaf(S, {0, 0}), S);
  const PatchedSheaf F = shift_sheaf(S, {2, 0});
  EXPECT_TRUE(check_sheaf(F).ok());
  EXPECT_EQ(F.cycles, S.cycles);
  EXPECT_EQ(underlying_degree(F), underlying_degree(S) + 1);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(extract_flags(F)[i].same_subspaces(extract_flags(S)[i]));

  const PatchedSheaf T = parabolic_to_sheaf(2, {Flag::from_interior(2, {e(2, 1)}), Flag::from_interior(2, {GMat(2, 0), GMat(2, 0)})}, W);
  const PatchedSheaf R = shift_sheaf(T, {1, 0});
  EXPECT_TRUE(check_sheaf(R).ok());
  EXPECT_EQ(R.cycles[0].mats[0], T.cycles[0].mats[1]);
  EXPECT_EQ(R.cycles[0].mats[1], T.cycles[0].mats[0]);
  // phi'_0 = diag(1, x) so the new first layer is e_1 at a_1
  EXPECT_TRUE(span_equal(extract_flags(R)[0].subspaces[1], e(2, 0)));
}

TEST(ShiftSheaf, AdditivityProperty) {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 20; ++t) {
    const PatchedSheaf S = random_sheaf(rng, 3, 3, 3);
    std::vector<long> r, q, sum;
    for (std::size_t i = 0; i < S.weights.size(); ++i) {
      r.push_back(static_cast<long>(rng() % 7) - 3);
      q.push_back(static_cast<long>(rng() % 7) - 3);
      sum.push_back(r.back() + q.back());
    }
    const PatchedSheaf a = shift_sheaf(shift_sheaf(S, r), q);
    EXPECT_TRUE(check_sheaf(a).ok());
    EXPECT_EQ(a, shift_sheaf(S, sum));
  }
}

TEST(TwistOmega, LevelsAndDegree) {
  const WeightData W = line({2, 1});
  const PatchedSheaf T = parabolic_to_sheaf(2, {Flag::from_interior(2, {e(2, 1)}), Flag::from_interior(2, {})}, W);
  const PatchedSheaf F = twist_omega(T);
  EXPECT_TRUE(check_sheaf(F).ok());
  EXPECT_EQ(F.rank, T.rank);
  EXPECT_EQ(F.cycles[0].mats, (std::vector<RatMat>{T.cycles[0].mats[1], T.cycles[0].mats[0]}));

  for (std::size_t k : {2u, 3u, 4u})
    for (std::size_t n : {1u, 2u}) {
      const PatchedSheaf S = trivial(line(std::vector<int>(k, 1)), n);
      EXPECT_EQ(underlying_degree(twist_omega(S)), underlying_degree(S) - 2 * static_cast<long>(n)) << k << " " << n;
    }
}

TEST(TwistOmega, ValidityProperty) {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 20; ++t) {
    const PatchedSheaf S = random_sheaf(rng, 3, 3, 3);
    const PatchedSheaf F = twist_omega(S);
    EXPECT_TRUE(check_sheaf(F).ok()) << check_sheaf(F).summary();
  }
}

TEST(VerifyMorphism, Examples) {
  const WeightData W = line({2, 2});
  const PatchedSheaf S = trivial(W, 1);
  EXPECT_TRUE(verify_morphism(S, S, identity_morphism(S)).ok());
  EXPECT_TRUE(verify_morphism(S, S, identity_morphism(S, RatFun(2))).ok());
  SheafMorphism f = identity_morphism(S);
  f.levels[0][0] = RatMat{{Charts(W).uniformizer(0)}};
  EXPECT_FALSE(verify_morphism(S, S, f).ok());
  SheafMorphism g = identity_morphism(S);
  g.levels[0].pop_back();
  EXPECT_FALSE(verify_morphism(S, S, g).ok());
}

TEST(SheafProperties, RandomSheavesSatisfyCycleLaw) {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 20; ++t) {
    const PatchedSheaf S = random_sheaf(rng);
    EXPECT_TRUE(check_sheaf(S).ok()) << check_sheaf(S).summary();
  }
}
