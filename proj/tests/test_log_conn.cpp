#include "test_support.hpp"
#include "wpl/connection.hpp"

#include <gtest/gtest.h>

using namespace wpl;
using namespace wpl::testing;

namespace {

PatchedSheaf trivial_sheaf(const WeightData& W, std::size_t n) {
  std::vector<Flag> flags;
  for (std::size_t i = 0; i < W.size(); ++i) flags.push_back(Flag::from_interior(n, std::vector<GMat>(W.weight(i) - 1, GMat(n, 0))));
  return parabolic_to_sheaf(n, flags, W);
}

std::string what_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(NormalizeZeta, Examples) {
  const ZetaData same{{q(0), q(1)}, {{q(3)}, {q(3), q(1)}}};
  const auto n0 = normalize_zeta(same);
  EXPECT_EQ(n0.zeta, same);
  EXPECT_EQ(n0.shift, (std::vector<GaussRat>{q(0), q(0)}));

  const auto n1 = normalize_zeta(ZetaData{{q(0), q(1)}, {{q(1)}, {q(0)}}});
  EXPECT_EQ(n1.shift, (std::vector<GaussRat>{q(-1, 2), q(1, 2)}));
  EXPECT_EQ(n1.zeta.at(0, 1), q(1, 2));
  EXPECT_EQ(n1.zeta.at(1, 1), q(1, 2));
}

TEST(NormalizeZeta, ShiftsSumToZero) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto nz = normalize_zeta(random_zeta(rng, random_weights(rng), false));
    GaussRat total;
    for (const auto& c : nz.shift) total += c;
    EXPECT_TRUE(total.is_zero());
    EXPECT_TRUE(nz.zeta.normalized());
  }
}

TEST(ZetaData, QuasiPeriodicExtension) {
  const ZetaData z{{q(0), q(1)}, {{q(1, 3), q(5)}, {q(2)}}};
  EXPECT_EQ(z.tilde(0, 1), q(1, 3));
  EXPECT_EQ(z.tilde(0, 3), q(4, 3));
  EXPECT_EQ(z.tilde(0, 0), q(4));
  EXPECT_EQ(z.tilde(0, -1), q(-2, 3));
  EXPECT_EQ(z.delta(0, 0), q(5) - q(1, 3));
  EXPECT_EQ(z.delta(0, 1), q(1, 3) + q(1) - q(5));
  EXPECT_EQ(z.delta(1, 0), q(1));
}

TEST(FuchsianConnection, AddingScalarFormShiftsResidues) {
  const WorkedInstance ac;
  FuchsianConnection G = ac.F;
  const std::vector<GaussRat> c{q(1), q(-3, 2), q(1, 2)};
  RatFun form;
  for (std::size_t j = 0; j < 3; ++j) {
    G.residues[j] += GMat::scalar(2, c[j]);
    form = form + RatFun::pole(ac.W.point(j)).scaled(c[j]);
  }
  EXPECT_EQ(G.global_form(), ac.F.global_form() + RatMat::scalar(2, form));
}

TEST(BuildDZeta, MihaiCaseHasNoCoupling) {
  const WeightData W{{q(0), q(1), q(2)}, {1, 1, 1}};
  const PatchedSheaf S = trivial_sheaf(W, 2);
  const ZetaData z{W.points, {{q(1, 3)}, {q(1, 3)}, {q(1, 3)}}};
  const DZetaSheaf D = build_dzeta(S, z);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(D.sheaf.cycles[i].mats[0].block(2, 0, 2, 2).is_zero());
  EXPECT_EQ(D.sheaf.rank, 4u);
  EXPECT_TRUE(check_dzeta(S, z, D).ok()) << check_dzeta(S, z, D).summary();
}

TEST(BuildDZeta, WeightTwoLowerLeftBlocks) {
  const WeightData W{{q(0), q(1)}, {2, 1}};
  const PatchedSheaf S = trivial_sheaf(W, 1);
  const ZetaData z{W.points, {{q(1, 2), q(-3)}, {q(1, 2)}}};
  const DZetaSheaf D = build_dzeta(S, z);
  EXPECT_EQ(D.naive_psi[0][0](1, 0), RatFun(q(-3) - q(1, 2)));
  // the last coefficient of a period carries the +1 of the extension
  EXPECT_EQ(D.naive_psi[0][1](1, 0), RatFun(q(1, 2) - q(-3) + q(1)));
  EXPECT_TRUE(check_dzeta(S, z, D).ok()) << check_dzeta(S, z, D).summary();
}

TEST(BuildDZeta, RejectsUnnormalizedZeta) {
  const WeightData W{{q(0), q(1)}, {1, 1}};
  EXPECT_THROW(build_dzeta(trivial_sheaf(W, 1), ZetaData{W.points, {{q(1)}, {q(0)}}}), std::invalid_argument);
}

TEST(BuildDZeta, RandomSheavesProperty) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 12; ++t) {
    const PatchedSheaf S = random_sheaf(rng, 2, 3, 3);
    const ZetaData z = random_zeta(rng, S.weights, true);
    const DZetaSheaf D = build_dzeta(S, z);
    const Report r = check_dzeta(S, z, D);
    EXPECT_TRUE(r.ok()) << r.summary();
  }
}

TEST(VerifySection, RankOneWeightOne) {
  const WeightData W{{q(0), q(1), q(-1)}, {1, 1, 1}};
  const PatchedSheaf S = trivial_sheaf(W, 1);
  const ZetaData z{W.points, {{q(1, 2)}, {q(-1, 3)}, {q(-1, 6)}}};
  const Charts ch(W);
  RatFun M;
  for (std::size_t j = 0; j < 3; ++j) M = M + RatFun::pole(W.point(j)).scaled(z.at(j, 1));
  // by hand: M_i = x_i N_0 + zeta_i with M_i = M / lambda_i
  ConnectionSection sigma;
  for (std::size_t i = 0; i < 3; ++i) {
    const RatFun Mi = M.divided_by(ch.log_frame(i), ch.roots());
    sigma.charts.push_back({RatMat{{(Mi - RatFun(z.at(i, 1))).divided_by(ch.uniformizer(i), ch.roots())}}});
  }
  EXPECT_TRUE(verify_section(S, z, sigma).ok()) << verify_section(S, z, sigma).summary();
  const auto forms = section_to_connection(S, z, sigma);
  ASSERT_TRUE(forms.fuchsian.has_value());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(forms.fuchsian->residues[i], GMat{{z.at(i, 1)}});

  ConnectionSection bad = sigma;
  bad.charts[0][0](0, 0) = bad.charts[0][0](0, 0) + RatFun(1);
  // rank 1, w = 1: the recursion N x + 1 = x N + 1 holds for every N, so only gluing can fail
  const Report r = verify_section(S, z, bad);
  EXPECT_FALSE(r.ok());
  EXPECT_NE(r.summary().find("do not glue"), std::string::npos) << r.summary();
}

TEST(VerifySection, PerturbationBreaksRecursion) {
  const WorkedInstance ac;
  const PatchedSheaf S = parabolic_to_sheaf(2, ac.flags, ac.W);
  ConnectionSection bad = connection_to_section(ac.flags, ac.W, ac.zeta, ac.F);
  bad.charts[0][0](0, 0) = bad.charts[0][0](0, 0) + RatFun(1);
  const Report r = verify_section(S, ac.zeta, bad);
  EXPECT_NE(r.summary().find("recursion fails at (i,s)=(0,0)"), std::string::npos) << r.summary();
}

TEST(CheckZetaCondition, WeightOneNeedsScalarResidue) {
  const WeightData W{{q(0), q(1)}, {1, 1}};
  const std::vector<Flag> flags{Flag::from_interior(2, {}), Flag::from_interior(2, {})};
  const ZetaData z{W.points, {{q(1)}, {q(-1)}}};
  EXPECT_TRUE(check_zeta_condition(FuchsianConnection{W.points, {GMat::scalar(2, q(1)), GMat::scalar(2, q(-1))}}, flags, z).ok());
  const FuchsianConnection F{W.points, {GMat::diagonal({q(1), q(0)}), GMat::diagonal({q(-1), q(0)})}};
  EXPECT_FALSE(check_zeta_condition(F, flags, z).ok());
}

TEST(CheckZetaCondition, FlagExamples) {
  const WeightData W{{q(0), q(1)}, {2, 2}};
  const FuchsianConnection F{W.points, {GMat::diagonal({q(1, 2), q(0)}), GMat::diagonal({q(-1, 2), q(0)})}};
  const std::vector<Flag> flags{Flag::from_interior(2, {column(2, 1)}), Flag::from_interior(2, {column(2, 1)})};
  EXPECT_TRUE(check_zeta_condition(F, flags, ZetaData{W.points, {{q(1, 2), q(0)}, {q(-1, 2), q(0)}}}).ok());
  // (A - 0)(C^2) = span(e_1) is not inside span(e_2)
  const Report r = check_zeta_condition(F, flags, ZetaData{W.points, {{q(0), q(1, 2)}, {q(-1, 2), q(0)}}});
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.failures.front().find("(i,s)=(0,1)"), std::string::npos) << r.summary();

  const WorkedInstance ac;
  EXPECT_TRUE(check_zeta_condition(ac.F, ac.flags, ac.zeta).ok());
}

TEST(ConnectionToSection, RankOneTwoPoints) {
  const WeightData W{{q(0), q(1)}, {1, 1}};
  const FuchsianConnection F{W.points, {GMat{{q(1, 2)}}, GMat{{q(-1, 2)}}}};
  const std::vector<Flag> flags{Flag::from_interior(1, {}), Flag::from_interior(1, {})};
  const ZetaData z{W.points, {{q(1, 2)}, {q(-1, 2)}}};
  const ConnectionSection sigma = connection_to_section(flags, W, z, F);
  const PatchedSheaf S = parabolic_to_sheaf(1, flags, W);
  EXPECT_TRUE(verify_section(S, z, sigma).ok());
  EXPECT_EQ(section_to_connection(S, z, sigma).fuchsian, F);

  const ZetaData wrong{W.points, {{q(1, 3)}, {q(-1, 2)}}};
  const std::string msg = what_of([&] { connection_to_section(flags, W, wrong, F); });
  EXPECT_NE(msg.find("(i,s)=(0,1)"), std::string::npos) << msg;
}

TEST(ConnectionToSection, WorkedInstanceRoundTrip) {
  const WorkedInstance ac;
  const PatchedSheaf S = parabolic_to_sheaf(2, ac.flags, ac.W);
  const ConnectionSection sigma = connection_to_section(ac.flags, ac.W, ac.zeta, ac.F);
  EXPECT_TRUE(verify_section(S, ac.zeta, sigma).ok()) << verify_section(S, ac.zeta, sigma).summary();
  const auto forms = section_to_connection(S, ac.zeta, sigma);
  EXPECT_EQ(forms.fuchsian, ac.F);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(forms.flags[i].same_subspaces(ac.flags[i]));

  const auto nz = normalize_zeta(ac.zeta);
  const PatchedSheaf& S2 = S;
  const ConnectionSection sigma2 = twist_section(S2, nz.shift, sigma);
  EXPECT_TRUE(verify_section(S2, nz.zeta, sigma2).ok());
  const DZetaSheaf D = build_dzeta(S2, nz.zeta);
  EXPECT_TRUE(verify_section_in_dzeta(S2, D, sigma2).ok()) << verify_section_in_dzeta(S2, D, sigma2).summary();
}

TEST(ResidueTower, WorkedInstance) {
  const WorkedInstance ac;
  const PatchedSheaf S = parabolic_to_sheaf(2, ac.flags, ac.W);
  const ResidueTower t = residue_tower(S, ac.zeta, connection_to_section(ac.flags, ac.W, ac.zeta, ac.F));
  EXPECT_TRUE(t.ok());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.charts[i].residue, ac.F.residues[i]);
    EXPECT_TRUE(t.charts[i].identities.ok()) << t.charts[i].identities.summary();
  }
  // (A_1 - 1/2)(A_1 - 0) = 0 directly
  EXPECT_TRUE(((ac.F.residues[0] - GMat::scalar(2, q(1, 2))) * ac.F.residues[0]).is_zero());
}

TEST(ResidueTower, WeightOneAndFactorizationEvidence) {
  const WeightData W{{q(0), q(1)}, {1, 1}};
  const FuchsianConnection F{W.points, {GMat{{q(2)}}, GMat{{q(-2)}}}};
  const std::vector<Flag> flags{Flag::from_interior(1, {}), Flag::from_interior(1, {})};
  const ZetaData z{W.points, {{q(2)}, {q(-2)}}};
  const PatchedSheaf S = parabolic_to_sheaf(1, flags, W);
  const ResidueTower t = residue_tower(S, z, connection_to_section(flags, W, z, F));
  EXPECT_TRUE(t.ok());
  EXPECT_EQ(t.charts[0].residue, GMat{{q(2)}});
  // C_0 = Id when w = 1, so x u is not killed
  EXPECT_FALSE(t.charts[0].factorization.ok());
}

TEST(ResidueTower, RankOneScalars) {
  const WeightData W{{q(0), q(1)}, {3, 1}};
  const std::vector<Flag> flags{Flag::from_interior(1, {GMat(1, 0), GMat(1, 0)}), Flag::from_interior(1, {})};
  const FuchsianConnection F{W.points, {GMat{{q(5)}}, GMat{{q(-5)}}}};
  const ZetaData z{W.points, {{q(5), q(7), q(-1, 2)}, {q(-5)}}};
  const PatchedSheaf S = parabolic_to_sheaf(1, flags, W);
  const ResidueTower t = residue_tower(S, z, connection_to_section(flags, W, z, F));
  EXPECT_TRUE(t.ok());
  // here P_1 = x, so R_0 is the only level tied to Res: Phi_0(a) = 0, Res - zeta_1 = 0
  EXPECT_EQ(t.charts[0].residue, GMat{{q(5)}});
}

TEST(ShiftSection, ConnectionsFollowShiftedSheaves) {
  const WorkedInstance ac;
  const PatchedSheaf S = parabolic_to_sheaf(2, ac.flags, ac.W);
  const ConnectionSection sigma = connection_to_section(ac.flags, ac.W, ac.zeta, ac.F);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 8; ++t) {
    std::vector<long> r;
    for (int i = 0; i < 3; ++i) r.push_back(static_cast<long>(rng() % 7) - 3);
    const PatchedSheaf F = shift_sheaf(S, r);
    const Report rep = verify_section(F, shift_zeta(ac.zeta, r), shift_section(sigma, r));
    EXPECT_TRUE(rep.ok()) << rep.summary();
  }
}
