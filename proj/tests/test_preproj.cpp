#include "test_support.hpp"
#include "wpl/quiver.hpp"

#include <gtest/gtest.h>

using namespace wpl;
using namespace wpl::testing;

namespace {

WeightData weights(std::vector<int> w) {
  std::vector<GaussRat> pts;
  for (std::size_t i = 0; i < w.size(); ++i) pts.push_back(q(static_cast<long>(i)));
  return {pts, w};
}

}  // namespace

TEST(StarQuiver, Examples) {
  const WeightData d4 = weights({2, 2, 2});
  const StarQuiver sq = star_quiver(d4);
  EXPECT_EQ(sq.quiver.vertices, (std::vector<std::string>{"0", "[0,1]", "[1,1]", "[2,1]"}));
  EXPECT_EQ(star_dims(d4, 2, {{1}, {1}, {1}}), (DimVector{2, 1, 1, 1}));
  for (const auto& a : sq.quiver.arrows) EXPECT_EQ(a.head, 0u);

  const StarQuiver one = star_quiver(weights({1, 1, 1}));
  EXPECT_EQ(one.quiver.vertices.size(), 1u);
  EXPECT_TRUE(one.quiver.arrows.empty());

  const WeightData w32 = weights({3, 2});
  const StarQuiver sq2 = star_quiver(w32);
  EXPECT_EQ(sq2.quiver.vertices.size(), 4u);
  EXPECT_EQ(sq2.arm_vertex[0].size(), 2u);
  EXPECT_EQ(sq2.arm_vertex[1].size(), 1u);
  EXPECT_EQ(sq2.quiver.arrows[1].tail, sq2.vertex(0, 2));
  EXPECT_EQ(sq2.quiver.arrows[1].head, sq2.vertex(0, 1));
  EXPECT_EQ(star_dims(w32, 2, {{2, 1}, {1}}), (DimVector{2, 2, 1, 1}));
  EXPECT_THROW(star_dims(w32, 2, {{1, 2}, {1}}), std::invalid_argument);
  EXPECT_THROW(star_dims(w32, 2, {{3, 1}, {1}}), std::invalid_argument);
}

TEST(StarQuiver, TreeShapeProperty) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const WeightData W = random_weights(rng, 6, 5);
    const StarQuiver sq = star_quiver(W);
    std::size_t arms = 0;
    for (auto w : W.weights) arms += static_cast<std::size_t>(w - 1);
    EXPECT_EQ(sq.quiver.vertices.size(), 1 + arms);
    EXPECT_EQ(sq.quiver.arrows.size(), arms);
  }
}

TEST(ZetaToLambda, Examples) {
  const WeightData W = weights({2, 2, 2});
  EXPECT_EQ(zeta_to_lambda(ZetaData{W.points, {{q(0), q(0)}, {q(0), q(0)}, {q(0), q(0)}}}), LambdaVec(4));
  const ZetaData z{W.points, {{q(1, 2), q(0)}, {q(1, 2), q(0)}, {q(-1, 2), q(0)}}};
  EXPECT_EQ(zeta_to_lambda(z), (LambdaVec{q(-1, 2), q(1, 2), q(1, 2), q(-1, 2)}));
  const WorkedInstance ac;
  EXPECT_EQ(zeta_to_lambda(ac.zeta), (LambdaVec{q(-1, 2), q(1, 2), q(1, 2), q(0)}));
}

TEST(ZetaToLambda, TelescopingLinearityAndNormalization) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 30; ++t) {
    const WeightData W = random_weights(rng, 5, 4);
    const ZetaData z = random_zeta(rng, W, false), y = random_zeta(rng, W, false);
    const LambdaVec l = zeta_to_lambda(z);
    GaussRat total, last;
    for (const auto& v : l) total += v;
    for (std::size_t i = 0; i < W.size(); ++i) last += z.at(i, W.weight(i));
    EXPECT_EQ(total, -last);

    ZetaData sum = z;
    for (std::size_t i = 0; i < W.size(); ++i)
      for (int s = 1; s <= W.weight(i); ++s) sum.zeta[i][s - 1] = z.at(i, s) * q(3) + y.at(i, s);
    const LambdaVec ly = zeta_to_lambda(y), ls = zeta_to_lambda(sum);
    for (std::size_t v = 0; v < l.size(); ++v) EXPECT_EQ(ls[v], l[v] * q(3) + ly[v]);

    EXPECT_EQ(zeta_to_lambda(normalize_zeta(z).zeta), l);
  }
}

TEST(MomentDefect, Examples) {
  const Quiver point{{"0"}, {}};
  EXPECT_TRUE(defect_is_zero(moment_defect(point, DoubledRep{{0}, {}, {}}, {q(5)})));
  EXPECT_TRUE(defect_is_zero(moment_defect(point, DoubledRep{{3}, {}, {}}, {q(0)})));

  const Quiver a2{{"1", "2"}, {{0, 1, "a"}}};
  const GaussRat x = q(2, 3), y = q(-5);
  const DoubledRep rep{{1, 1}, {GMat{{x}}}, {GMat{{y}}}};
  const LambdaVec l{q(1), q(7)};
  const auto d = moment_defect(a2, rep, l);
  EXPECT_EQ(d[1], GMat{{x * y - l[1]}});
  EXPECT_EQ(d[0], GMat{{-(y * x) - l[0]}});
  EXPECT_TRUE(defect_is_zero(moment_defect(a2, rep, {-(x * y), x * y})));
  EXPECT_THROW(moment_defect(a2, DoubledRep{{1, 2}, {GMat{{x}}}, {GMat{{y}}}}, l), std::invalid_argument);
}

TEST(MomentDefect, TracesOfRelationsCancel) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const WeightData W = random_weights(rng, 4, 4);
    const StarQuiver sq = star_quiver(W);
    DimVector d;
    for (std::size_t v = 0; v < sq.quiver.vertices.size(); ++v) d.push_back(rng() % 4);
    DoubledRep rep{d, {}, {}};
    for (const auto& a : sq.quiver.arrows) {
      GMat x(d[a.head], d[a.tail]), y(d[a.tail], d[a.head]);
      for (auto& e : x.data()) e = random_scalar(rng);
      for (auto& e : y.data()) e = random_scalar(rng);
      rep.X.push_back(x);
      rep.Xstar.push_back(y);
    }
    LambdaVec l;
    for (std::size_t v = 0; v < d.size(); ++v) l.push_back(random_scalar(rng));
    GaussRat traces;
    for (const auto& m : moment_defect(sq.quiver, rep, l))
      for (std::size_t r = 0; r < m.rows(); ++r) traces += m(r, r);
    EXPECT_EQ(traces, -trace_pairing(l, d));
  }
}

TEST(TracePairing, Examples) {
  EXPECT_EQ(trace_pairing(LambdaVec(4), {2, 1, 1, 0}), q(0));
  EXPECT_EQ(trace_pairing({q(-1, 2), q(1, 2), q(1, 2), q(0)}, {2, 1, 1, 0}), q(0));
  EXPECT_EQ(trace_pairing({q(1), q(2)}, {3, 1}), q(5));
}

TEST(TitsForm, Examples) {
  EXPECT_EQ(tits_form(Quiver{{"0"}, {}}, {1}), 1);
  EXPECT_EQ(tits_form(star_quiver(weights({2, 2, 2, 2})).quiver, {2, 1, 1, 1, 1}), 0);
  EXPECT_EQ(tits_form(Quiver{{"1", "2"}, {{0, 1, "a"}}}, {1, 1}), 1);
}
