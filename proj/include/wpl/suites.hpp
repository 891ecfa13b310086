#pragma once

// Acceptance suites AC-1..AC-7, shared by the acceptance binary and `wpl-cli selftest`.
// Instance idx of a suite is drawn from mt19937_64(seed_seq{seed, idx, salt}), so results
// do not depend on the job count.

#include "wpl/bridge.hpp"
#include "wpl/examples.hpp"
#include "wpl/random.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace wpl::suites {

struct Options {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  unsigned jobs = 1;
  int retries = 50;
};

struct SuiteResult {
  std::string name;
  std::string title;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;  // "#idx: message", in index order
  double seconds = 0;
  double time_limit = 0;  // 0: none

  bool ok() const { return passed == total && (time_limit == 0 || seconds < time_limit); }
};

inline std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t idx, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(idx),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

/// Runs body(idx) for idx < count on `jobs` threads; an exception counts as a failure.
inline SuiteResult run_indexed(std::string name, std::string title, std::size_t count, unsigned jobs,
                               const std::function<Report(std::size_t)>& body) {
  SuiteResult res{std::move(name), std::move(title), 0, count, {}, 0, 0};
  std::vector<Report> reports(count);
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        reports[i] = body(i);
      } catch (const std::exception& e) {
        reports[i].fail(std::string("exception: ") + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (std::size_t i = 0; i < count; ++i) {
    if (reports[i].ok())
      ++res.passed;
    else
      res.failures.push_back("#" + std::to_string(i) + ": " + reports[i].summary());
  }
  return res;
}

namespace detail {

inline std::vector<long> small_shift(std::mt19937_64& rng, std::size_t k) {
  std::vector<long> r;
  for (std::size_t i = 0; i < k; ++i) r.push_back(static_cast<long>(rng() % 7) - 3);
  return r;
}

/// Parabolic sheaf of a random shape plus the flags it was built from (AC-1, AC-2).
struct SheafInstance {
  std::size_t n;
  std::vector<Flag> flags;
  PatchedSheaf parabolic;
  PatchedSheaf shifted;  // nontrivial patching
};

inline SheafInstance sheaf_instance(std::mt19937_64& rng) {
  const WeightData W = gen::random_weights(rng, 4, 4);
  const std::size_t n = 1 + rng() % 4;
  auto flags = gen::random_flags(rng, n, W);
  PatchedSheaf S = parabolic_to_sheaf(n, flags, W);
  PatchedSheaf T = shift_sheaf(S, small_shift(rng, W.size()));
  return {n, std::move(flags), std::move(S), std::move(T)};
}

inline Report same_tuple(const FuchsianTuple& a, const FuchsianTuple& b) {
  Report r;
  for (std::size_t i = 0; i < a.residues.size(); ++i) {
    r.require(a.residues[i] == b.residues[i], "residue " + std::to_string(i) + " differs");
    r.require(a.flags[i].same_subspaces(b.flags[i]), "flag " + std::to_string(i) + " differs as subspaces");
  }
  return r;
}

/// Both compositions of the section/connection correspondence are the identity, exactly.
inline Report bijection(const FuchsianTuple& T) {
  Report r;
  const FuchsianConnection F = T.connection();
  const PatchedSheaf S = parabolic_to_sheaf(T.rank, T.flags, T.weights);
  const ConnectionSection sigma = connection_to_section(T.flags, T.weights, T.zeta, F);
  r.merge(verify_section(S, T.zeta, sigma), "section: ");
  const ConnectionForms forms = section_to_connection(S, T.zeta, sigma);
  if (!forms.fuchsian) {
    r.fail("section_to_connection found no global form");
    return r;
  }
  r.require(forms.fuchsian->global_form() == F.global_form(), "global forms differ after connection -> section -> connection");
  for (std::size_t i = 0; i < T.flags.size(); ++i)
    r.require(forms.flags[i].same_subspaces(T.flags[i]), "flag " + std::to_string(i) + " not recovered");
  // the sheaf is built from T.flags, so its sections are computed in those bases
  r.require(connection_to_section(T.flags, T.weights, T.zeta, *forms.fuchsian) == sigma,
            "section differs after section -> connection -> section");
  return r;
}

/// Product over s of (A_i - zeta_{is}).
inline Report residue_products(const FuchsianTuple& T) {
  Report r;
  for (std::size_t i = 0; i < T.residues.size(); ++i) {
    GMat p = GMat::identity(T.rank);
    for (int s = 1; s <= T.weights.weight(i); ++s) p = p * (T.residues[i] - GMat::scalar(T.rank, T.zeta.at(i, s)));
    r.require(p.is_zero(), "prod_s (A_i - zeta_is) != 0 at i=" + std::to_string(i));
  }
  return r;
}

inline Report correspondence(const FuchsianTuple& T) {
  Report r;
  const BridgeRep b = fuchs_to_rep(T);
  r.require(defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)), "moment defect is nonzero");
  r.require(trace_pairing(b.lambda, b.rep.dims).is_zero(), "trace pairing is nonzero");
  const FuchsianTuple back = rep_to_fuchs(b.star, b.rep, b.lambda, T.zeta);
  r.merge(same_tuple(back, T), "rep -> tuple: ");
  return r;
}

/// The same tuple with every flag layer stored in a random basis of the same subspace.
inline FuchsianTuple rebase_flags(std::mt19937_64& rng, FuchsianTuple T) {
  for (auto& f : T.flags)
    for (auto& l : f.subspaces)
      if (l.cols() > 0) l = l * gen::random_invertible(rng, l.cols());
  return T;
}

/// The worked rank-2 instance, conjugated by g and translated by b (identity for idx 0).
inline FuchsianTuple worked_tuple(const GMat& g, const GaussRat& b) {
  const examples::WorkedInstance w;
  FuchsianTuple T;
  std::vector<GaussRat> pts;
  for (const auto& p : w.W.points) pts.push_back(p + b);
  T.weights = WeightData(pts, w.W.weights);
  T.rank = 2;
  const GMat gi = inverse(g);
  for (const auto& a : w.F.residues) T.residues.push_back(g * a * gi);
  for (const auto& f : w.flags) {
    std::vector<GMat> layers;
    for (const auto& l : f.subspaces) layers.push_back(l.cols() ? GMat(g * l) : l);
    T.flags.emplace_back(2, std::move(layers));
  }
  T.zeta = ZetaData{pts, w.zeta.zeta};
  return T;
}

}  // namespace detail

inline SuiteResult ac1(const Options& o) {
  auto r = run_indexed("AC-1", "sheaf calculus", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 1);
    const auto inst = detail::sheaf_instance(rng);
    Report r;
    for (const auto* S : {&inst.parabolic, &inst.shifted}) {
      for (const auto& c : S->cycles) r.merge(check_cycle(c, S->charts()), "check_cycle: ");
      r.merge(check_sheaf(*S), "check_sheaf: ");
    }
    const auto flags = extract_flags(inst.parabolic);
    for (std::size_t i = 0; i < flags.size(); ++i)
      r.require(flags[i].same_subspaces(inst.flags[i]), "extract_flags does not invert parabolic_to_sheaf at " + std::to_string(i));
    const std::size_t k = inst.parabolic.weights.size();
    const auto a = detail::small_shift(rng, k), b = detail::small_shift(rng, k);
    std::vector<long> ab(k);
    for (std::size_t i = 0; i < k; ++i) ab[i] = a[i] + b[i];
    r.require(shift_sheaf(shift_sheaf(inst.shifted, a), b) == shift_sheaf(inst.shifted, ab), "shift is not additive");
    const PatchedSheaf T = twist_omega(inst.shifted);
    r.merge(check_sheaf(T), "twist_omega: ");
    // E_0(omega) = E_1 ⊗ Omega(log D): deg E_0 - sum_i codim(E_1 in E_0 at a_i) + n(k - 2)
    long expected = underlying_degree(inst.shifted) + static_cast<long>(inst.n) * (static_cast<long>(k) - 2);
    for (const auto& f : extract_flags(inst.shifted)) expected -= static_cast<long>(inst.n - f.dim(1));
    r.require(underlying_degree(T) == expected, "twist_omega has the wrong degree");
    return r;
  });
  r.time_limit = 30;
  return r;
}

inline SuiteResult ac2(const Options& o) {
  return run_indexed("AC-2", "D_zeta construction", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 1);  // same sheaves as AC-1
    const auto inst = detail::sheaf_instance(rng);
    Report r;
    for (const auto* S : {&inst.parabolic, &inst.shifted}) {
      const ZetaData z = gen::random_zeta(rng, S->weights, true);
      r.merge(check_dzeta(*S, z, build_dzeta(*S, z)));
    }
    return r;
  });
}

inline SuiteResult ac3(const Options& o) {
  auto res = run_indexed("AC-3", "worked instance", std::max<std::size_t>(1, o.count), o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 3);
    const bool literal = idx == 0;
    const GMat g = literal ? GMat::identity(2) : gen::random_invertible(rng, 2);
    const GaussRat b = literal ? GaussRat() : GaussRat(static_cast<long>(rng() % 7) - 3);
    const FuchsianTuple T = detail::worked_tuple(g, b);
    Report r;
    r.merge(check_zeta_condition(T.connection(), T.flags, T.zeta), "check_zeta: ");
    const examples::WorkedInstance w;
    r.require(zeta_to_lambda(T.zeta) == LambdaVec{examples::q(-1, 2), examples::q(1, 2), examples::q(1, 2), examples::q(0)}, "lambda != (-1/2; 1/2, 1/2, 0)");
    const BridgeRep br = fuchs_to_rep(T);
    r.require(br.rep.dims == DimVector{2, 1, 1, 0}, "d != (2; 1, 1, 0)");
    r.require(defect_is_zero(moment_defect(br.star.quiver, br.rep, br.lambda)), "fuchs_to_rep defect is nonzero");
    if (literal) {
      r.require(br.rep.X[0] == GMat{{examples::q(0)}, {examples::q(1)}}, "arm 1: X != (0,1)^T");
      r.require(br.rep.Xstar[0] == GMat{{examples::q(0), examples::q(-1, 2)}}, "arm 1: X* != (0,-1/2)");
    }
    r.merge(detail::same_tuple(rep_to_fuchs(br.star, br.rep, br.lambda, T.zeta), T), "rep_to_fuchs: ");
    r.merge(detail::bijection(T), "bijection: ");
    const PatchedSheaf S = parabolic_to_sheaf(2, T.flags, T.weights);
    const ConnectionSection sigma = connection_to_section(T.flags, T.weights, T.zeta, T.connection());
    const ResidueTower tower = residue_tower(S, T.zeta, sigma);
    for (std::size_t i = 0; i < tower.charts.size(); ++i) {
      r.require(tower.charts[i].residue == T.residues[i], "residue tower: residue " + std::to_string(i) + " differs");
      r.merge(tower.charts[i].identities, "residue tower: ");
    }
    r.merge(detail::residue_products(T));
    const BridgeRep via = section_to_rep(S, T.zeta, sigma);
    const FuchsianTuple via_tuple = rep_to_fuchs(via.star, via.rep, via.lambda, T.zeta);
    r.merge(check_rep_isomorphism(br.star.quiver, br.rep, via.rep, flag_intertwiner(br.star, T, via_tuple)), "section -> rep: ");
    return r;
  });
  res.time_limit = 1.0 * static_cast<double>(res.total);
  return res;
}

inline SuiteResult ac4(const Options& o) {
  return run_indexed("AC-4", "section/connection bijection", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 4);
    return detail::bijection(generate_instance(rng(), 4, 4, 4, o.retries));
  });
}

inline SuiteResult ac5(const Options& o) {
  return run_indexed("AC-5", "star-quiver correspondence", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 5);
    const FuchsianTuple T = generate_instance(rng(), 4, 4, 4, o.retries);
    Report r = detail::correspondence(T);
    r.merge(detail::correspondence(detail::rebase_flags(rng, T)), "rebased flags: ");
    r.merge(detail::residue_products(T));
    return r;
  });
}

namespace detail {

/// All weights 1: the lower-left blocks of the honest psi vanish.
inline Report mihai_case(std::mt19937_64& rng) {
  WeightData W = gen::random_weights(rng, 4, 1);
  const std::size_t n = 1 + rng() % 3;
  const PatchedSheaf S = shift_sheaf(parabolic_to_sheaf(n, gen::random_flags(rng, n, W), W), small_shift(rng, W.size()));
  const ZetaData z = gen::random_zeta(rng, W, true);
  const DZetaSheaf D = build_dzeta(S, z);
  Report r = check_dzeta(S, z, D);
  for (std::size_t i = 0; i < W.size(); ++i)
    r.require(D.sheaf.cycles[i].mats[0].block(n, 0, n, n).is_zero(), "lower-left block of psi at " + std::to_string(i) + " is nonzero");
  return r;
}

/// Rank one, weights one: M_i = (sum_j a_j/(z - a_j)) / lambda_i and N_0 = (M_i - a_i) / x_i by hand.
inline Report scalar_case(std::mt19937_64& rng) {
  const WeightData W = gen::random_weights(rng, 4, 1);
  const std::size_t k = W.size();
  std::vector<GaussRat> a(k);
  GaussRat sum;
  for (std::size_t i = 0; i + 1 < k; ++i) sum += (a[i] = gen::random_scalar(rng, 3));
  a[k - 1] = -sum;
  ZetaData z{W.points, {}};
  FuchsianConnection F{W.points, {}};
  std::vector<Flag> flags;
  for (std::size_t i = 0; i < k; ++i) {
    z.zeta.push_back({a[i]});
    F.residues.push_back(GMat{{a[i]}});
    flags.push_back(Flag::from_interior(1, {}));
  }
  const Charts ch(W);
  RatFun M;
  for (std::size_t j = 0; j < k; ++j) M = M + RatFun::pole(W.point(j)).scaled(a[j]);
  ConnectionSection hand;
  for (std::size_t i = 0; i < k; ++i) {
    const RatFun Mi = M.divided_by(ch.log_frame(i), ch.roots());
    hand.charts.push_back({RatMat{{(Mi - RatFun(a[i])).divided_by(ch.uniformizer(i), ch.roots())}}});
  }
  Report r;
  r.require(connection_to_section(flags, W, z, F) == hand, "connection_to_section differs from the closed form");
  r.merge(verify_section(parabolic_to_sheaf(1, flags, W), z, hand), "closed form: ");
  const LambdaVec l = zeta_to_lambda(z);
  r.require(l.size() == 1 && l[0].is_zero(), "lambda_0 != -sum a_i = 0");
  const FuchsianTuple T{W, 1, F.residues, flags, z};
  const BridgeRep b = fuchs_to_rep(T);
  r.require(b.rep.dims == DimVector{1} && defect_is_zero(moment_defect(b.star.quiver, b.rep, b.lambda)), "rank-one rep is not a solution");
  return r;
}

/// zeta = 0: nilpotent residues, lambda = 0, undeformed relation.
inline Report nilpotent_case(std::mt19937_64& rng, int retries) {
  for (int attempt = 0; attempt < retries; ++attempt) {
    const InstanceShape sh = random_shape(rng, 4, 4, 4);
    ZetaData zero{sh.weights.points, {}};
    for (std::size_t i = 0; i < sh.weights.size(); ++i) zero.zeta.emplace_back(sh.weights.weight(i), GaussRat());
    FuchsianTuple T;
    try {
      T = random_instance(sh.weights, sh.rank, sh.flag_dims, rng(), GeneratorOptions{zero, 4, 3});
    } catch (const std::runtime_error&) {
      continue;
    }
    Report r;
    const BridgeRep b = fuchs_to_rep(T);
    for (const auto& l : b.lambda) r.require(l.is_zero(), "lambda is not 0");
    r.require(defect_is_zero(moment_defect(b.star.quiver, b.rep, LambdaVec(b.lambda.size()))), "undeformed relation fails");
    for (std::size_t i = 0; i < T.residues.size(); ++i) {
      GMat p = GMat::identity(T.rank);
      for (int s = 0; s < T.weights.weight(i); ++s) p = p * T.residues[i];
      r.require(p.is_zero(), "A_" + std::to_string(i) + "^w != 0");
    }
    r.merge(correspondence(T));
    r.merge(bijection(T), "bijection: ");
    return r;
  }
  throw std::runtime_error("no feasible zeta = 0 shape after " + std::to_string(retries) + " retries");
}

}  // namespace detail

inline SuiteResult ac6(const Options& o) {
  return run_indexed("AC-6", "degenerate regimes", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 6);
    Report r;
    r.merge(detail::mihai_case(rng), "weights 1: ");
    r.merge(detail::scalar_case(rng), "rank 1: ");
    r.merge(detail::nilpotent_case(rng, o.retries), "zeta 0: ");
    return r;
  });
}

inline SuiteResult ac7(const Options& o) {
  return run_indexed("AC-7", "normalization", o.count, o.jobs, [&](std::size_t idx) {
    auto rng = instance_rng(o.seed, idx, 7);
    const FuchsianTuple T = generate_instance(rng(), 4, 4, 4, o.retries);
    Report r;
    const NormalizedZeta nz = normalize_zeta(T.zeta);
    r.require(zeta_to_lambda(nz.zeta) == zeta_to_lambda(T.zeta), "normalization changes lambda");
    const PatchedSheaf S = parabolic_to_sheaf(T.rank, T.flags, T.weights);
    const ConnectionSection sigma = connection_to_section(T.flags, T.weights, T.zeta, T.connection());
    const ConnectionSection moved = twist_section(S, nz.shift, sigma);
    r.merge(verify_section(S, nz.zeta, moved), "twisted section: ");
    const ConnectionForms forms = section_to_connection(S, nz.zeta, moved);
    if (!forms.fuchsian) {
      r.fail("twisted section has no global form");
      return r;
    }
    for (std::size_t i = 0; i < T.residues.size(); ++i)
      r.require(forms.fuchsian->residues[i] == T.residues[i] + GMat::scalar(T.rank, nz.shift[i]),
                "residue " + std::to_string(i) + " is not A_i + c_i");
    r.merge(check_dzeta(S, nz.zeta, build_dzeta(S, nz.zeta)), "D_zeta: ");
    return r;
  });
}

inline std::vector<SuiteResult> run_all(const Options& o) {
  return {ac1(o), ac2(o), ac3(o), ac4(o), ac5(o), ac6(o), ac7(o)};
}

}  // namespace wpl::suites
