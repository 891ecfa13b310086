#include "test_support.hpp"
#include "wpl/bridge.hpp"

#include <gtest/gtest.h>

using namespace wpl;
using namespace wpl::testing;

namespace {

FuchsianTuple worked_tuple() {
  const WorkedInstance ac;
  return {ac.W, 2, ac.F.residues, ac.flags, ac.zeta};
}

void expect_same_tuple(const FuchsianTuple& a, const FuchsianTuple& b) {
  EXPECT_EQ(a.residues, b.residues);
  ASSERT_EQ(a.flags.size(), b.flags.size());
  for (std::size_t i = 0; i < a.flags.size(); ++i) EXPECT_TRUE(a.flags[i].same_subspaces(b.flags[i])) << "flag " << i;
}

}  // namespace

TEST(FuchsToRep, SingleVertex) {
  const WeightData W{{q(0), q(1)}, {1, 1}};
  const FuchsianTuple T{W, 1, {GMat{{q(1, 2)}}, GMat{{q(-1, 2)}}}, {Flag::from_interior(1, {}), Flag::from_interior(1, {})},
                        ZetaData{W.points, {{q(1, 2)}, {q(-1, 2)}}}};
  const BridgeRep b = fuchs_to_rep(T);
  EXPECT_EQ(b.rep.dims, (DimVector{1}));
  EXPECT_EQ(b.lambda, (LambdaVec{q(0)}));
  EXPECT_TRUE(defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)));
}

TEST(FuchsToRep, WorkedInstance) {
  const BridgeRep b = fuchs_to_rep(worked_tuple());
  EXPECT_EQ(b.rep.dims, (DimVector{2, 1, 1, 0}));
  EXPECT_EQ(b.lambda, (LambdaVec{q(-1, 2), q(1, 2), q(1, 2), q(0)}));
  EXPECT_EQ(b.rep.X[0], (GMat{{q(0)}, {q(1)}}));
  EXPECT_EQ(b.rep.Xstar[0], (GMat{{q(0), q(-1, 2)}}));
  const auto defect = moment_defect(b.star.quiver, b.rep, b.lambda);
  EXPECT_TRUE(defect_is_zero(defect));
  GMat center(2, 2);
  for (std::size_t a = 0; a < 3; ++a) center += b.rep.X[a] * b.rep.Xstar[a];
  EXPECT_EQ(center, GMat::scalar(2, q(-1, 2)));
  EXPECT_EQ(trace_pairing(b.lambda, b.rep.dims), q(0));
}

TEST(FuchsToRep, NilpotentUndeformed) {
  // nilpotent residues with image filtrations, zeta = 0
  const WeightData W{{q(0), q(1), q(2)}, {3, 3, 2}};
  const GMat N{{q(0), q(1), q(0)}, {q(0), q(0), q(1)}, {q(0), q(0), q(0)}};
  const GMat N2 = N * N;
  const FuchsianTuple T{W, 3, {N, GMat(3, 3) - N, GMat(3, 3)},
                        {Flag::from_interior(3, {column_basis(N), column_basis(N2)}),
                         Flag::from_interior(3, {column_basis(N), column_basis(N2)}), Flag::from_interior(3, {GMat(3, 0)})},
                        ZetaData{W.points, {{q(0), q(0), q(0)}, {q(0), q(0), q(0)}, {q(0), q(0)}}}};
  ASSERT_TRUE(T.check().ok()) << T.check().summary();
  const BridgeRep b = fuchs_to_rep(T);
  EXPECT_EQ(b.lambda, LambdaVec(b.star.quiver.vertices.size()));
  EXPECT_TRUE(defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)));
}

TEST(RepToFuchs, WorkedRoundTrip) {
  const FuchsianTuple T = worked_tuple();
  const BridgeRep b = fuchs_to_rep(T);
  const FuchsianTuple back = rep_to_fuchs(b.star, b.rep, b.lambda, T.zeta);
  expect_same_tuple(back, T);
  const BridgeRep again = fuchs_to_rep(back);
  EXPECT_TRUE(check_rep_isomorphism(b.star.quiver, b.rep, again.rep, canonical_intertwiner(b.star, b.rep, back)).ok());
}

TEST(RepToFuchs, FlagsStoredInOtherBases) {
  // V_0 stored as a non-standard basis of C^2 must not change the center coordinates
  FuchsianTuple T = worked_tuple();
  const GMat g{{q(1), q(1)}, {q(0), q(1)}};
  for (auto& f : T.flags) f.subspaces[0] = g;
  T.flags[0].subspaces[1] = GMat{{q(0)}, {q(3)}};
  const BridgeRep b = fuchs_to_rep(T);
  EXPECT_EQ(b.rep.X[0], (GMat{{q(0)}, {q(3)}}));
  EXPECT_TRUE(defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)));
  expect_same_tuple(rep_to_fuchs(b.star, b.rep, b.lambda, T.zeta), T);
}

TEST(RepToFuchs, SingleVertexGivesScalarResidues) {
  const WeightData W{{q(0), q(1), q(2)}, {1, 1, 1}};
  const ZetaData z{W.points, {{q(1)}, {q(-3)}, {q(2)}}};
  const StarQuiver sq = star_quiver(W);
  const FuchsianTuple T = rep_to_fuchs(sq, DoubledRep{{2}, {}, {}}, zeta_to_lambda(z), z);
  EXPECT_EQ(T.residues, (std::vector<GMat>{GMat::scalar(2, q(1)), GMat::scalar(2, q(-3)), GMat::scalar(2, q(2))}));
}

TEST(RepToFuchs, NonInjectiveArm) {
  const WeightData W{{q(0), q(1)}, {2, 2}};
  const ZetaData z{W.points, {{q(0), q(0)}, {q(0), q(0)}}};
  const StarQuiver sq = star_quiver(W);
  const DoubledRep rep{{1, 1, 1}, {GMat{{q(0)}}, GMat{{q(1)}}}, {GMat{{q(0)}}, GMat{{q(0)}}}};
  ASSERT_TRUE(defect_is_zero(moment_defect(sq.quiver, rep, zeta_to_lambda(z))));
  try {
    rep_to_fuchs(sq, rep, zeta_to_lambda(z), z);
    FAIL() << "expected non-injective arm";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("non-injective arm (i,s)=(0,1)"), std::string::npos) << e.what();
  }
}

TEST(SectionToRep, WorkedInstanceAndRejection) {
  const FuchsianTuple T = worked_tuple();
  const PatchedSheaf S = parabolic_to_sheaf(2, T.flags, T.weights);
  ConnectionSection sigma = connection_to_section(T.flags, T.weights, T.zeta, T.connection());
  const BridgeRep direct = fuchs_to_rep(T);
  const BridgeRep via = section_to_rep(S, T.zeta, sigma);
  EXPECT_EQ(via.lambda, direct.lambda);
  const FuchsianTuple via_tuple = rep_to_fuchs(via.star, via.rep, via.lambda, T.zeta);
  EXPECT_TRUE(check_rep_isomorphism(direct.star.quiver, direct.rep, via.rep, flag_intertwiner(direct.star, T, via_tuple)).ok());

  sigma.charts[1][0](0, 1) = sigma.charts[1][0](0, 1) + RatFun(1);
  EXPECT_THROW(section_to_rep(S, T.zeta, sigma), std::domain_error);
}

TEST(RandomInstance, RejectsNonzeroTracePairing) {
  const WeightData W{{q(0), q(1), q(-1)}, {2, 2, 2}};
  GeneratorOptions opt;
  opt.zeta = ZetaData{W.points, {{q(1), q(0)}, {q(0), q(0)}, {q(0), q(0)}}};
  try {
    random_instance(W, 2, {{1}, {1}, {1}}, 1, opt);
    FAIL() << "expected rejection";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("trace pairing"), std::string::npos);
  }
}

TEST(RandomInstance, StarShapeSucceedsDeterministically) {
  const WeightData W{{q(0), q(1), q(-1), q(2)}, {2, 2, 2, 2}};
  const FuchsianTuple a = random_instance(W, 2, {{1}, {1}, {1}, {1}}, 99);
  const FuchsianTuple b = random_instance(W, 2, {{1}, {1}, {1}, {1}}, 99);
  EXPECT_EQ(a.residues, b.residues);
  EXPECT_EQ(a.zeta, b.zeta);
  EXPECT_TRUE(a.check().ok());
  const BridgeRep r = fuchs_to_rep(a);
  EXPECT_TRUE(defect_is_zero(moment_defect(r.star.quiver, r.rep, r.lambda)));
  EXPECT_EQ(trace_pairing(r.lambda, r.rep.dims), q(0));
}

TEST(RandomInstance, RankOneShapes) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    InstanceShape sh = random_shape(rng, 4, 4, 1);
    const FuchsianTuple T = random_instance(sh.weights, 1, sh.flag_dims, t);
    EXPECT_TRUE(T.check().ok());
  }
}

TEST(BridgeProperties, GeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const FuchsianTuple T = generate_instance(seed, 4, 3, 3);
    ASSERT_TRUE(T.check().ok()) << T.check().summary();
    const BridgeRep b = fuchs_to_rep(T);
    EXPECT_TRUE(defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)));
    const FuchsianTuple back = rep_to_fuchs(b.star, b.rep, b.lambda, T.zeta);
    expect_same_tuple(back, T);
    for (std::size_t i = 0; i < T.weights.size(); ++i) {
      GMat prod = GMat::identity(T.rank);
      for (int s = 1; s <= T.weights.weight(i); ++s) prod = prod * (T.residues[i] - GMat::scalar(T.rank, T.zeta.at(i, s)));
      EXPECT_TRUE(prod.is_zero());
    }
    // center relation <=> residues sum to zero, given the arm relations
    DoubledRep broken = b.rep;
    for (std::size_t a = 0; a < b.star.quiver.arrows.size(); ++a)
      if (b.star.quiver.arrows[a].head == 0 && broken.dims[b.star.quiver.arrows[a].tail] > 0) {
        broken.Xstar[a](0, 0) += q(1);
        EXPECT_FALSE(moment_defect(b.star.quiver, broken, b.lambda)[0].is_zero());
        break;
      }

    const PatchedSheaf S = parabolic_to_sheaf(T.rank, T.flags, T.weights);
    const BridgeRep via = section_to_rep(S, T.zeta, connection_to_section(T.flags, T.weights, T.zeta, T.connection()));
    const FuchsianTuple via_tuple = rep_to_fuchs(via.star, via.rep, via.lambda, T.zeta);
    EXPECT_TRUE(check_rep_isomorphism(b.star.quiver, b.rep, via.rep, flag_intertwiner(b.star, T, via_tuple)).ok());
  }
}
