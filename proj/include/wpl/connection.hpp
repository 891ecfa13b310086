#pragma once

#include "wpl/sheaf.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpl {

/// Eigenvalue data zeta_{is}, i = 0..k-1 (chart), s = 1..w_i (row i has w_i entries).
struct ZetaData {
  std::vector<GaussRat> points;
  std::vector<std::vector<GaussRat>> zeta;

  std::size_t size() const { return zeta.size(); }
  int weight(std::size_t i) const { return static_cast<int>(zeta.at(i).size()); }

  /// zeta_{is} for 1 <= s <= w_i.
  const GaussRat& at(std::size_t i, int s) const { return zeta.at(i).at(static_cast<std::size_t>(s - 1)); }

  /// Quasi-periodic extension to every integer s: zeta~_{i,s+w_i} = zeta~_{is} + 1.
  GaussRat tilde(std::size_t i, long s) const {
    const long w = weight(i);
    const long r = ((s - 1) % w + w) % w;
    return zeta.at(i).at(static_cast<std::size_t>(r)) + GaussRat((s - 1 - r) / w);
  }

  /// Coefficient Delta_s = zeta~_{s+2} - zeta~_{s+1} of the lower-left block of psi_s, 0 <= s < w_i.
  GaussRat delta(std::size_t i, long s) const { return tilde(i, s + 2) - tilde(i, s + 1); }

  bool normalized() const {
    for (const auto& row : zeta)
      if (!(row.at(0) == zeta.at(0).at(0))) return false;
    return true;
  }

  void check_shape(const WeightData& W) const {
    if (!(points == W.points)) throw std::invalid_argument("zeta data lives on different marked points");
    if (zeta.size() != W.size()) throw std::invalid_argument("one zeta row per marked point required");
    for (std::size_t i = 0; i < W.size(); ++i)
      if (weight(i) != W.weight(i))
        throw std::invalid_argument("zeta row " + std::to_string(i) + " has length " + std::to_string(weight(i)) +
                                    ", weight is " + std::to_string(W.weight(i)));
  }

  WeightData weights() const {
    std::vector<int> w;
    for (std::size_t i = 0; i < zeta.size(); ++i) w.push_back(weight(i));
    return {points, w};
  }

  friend bool operator==(const ZetaData&, const ZetaData&) = default;
};

struct NormalizedZeta {
  ZetaData zeta;
  std::vector<GaussRat> shift;  // c_i, summing to 0
};

/// Shift every row by c_i = mean_j(zeta_{j1}) - zeta_{i1} so that the zeta_{i1} agree.
inline NormalizedZeta normalize_zeta(const ZetaData& z) {
  GaussRat mean;
  for (const auto& row : z.zeta) mean += row.at(0);
  mean = mean / GaussRat(static_cast<long>(z.size()));
  NormalizedZeta out{z, {}};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const GaussRat c = mean - z.zeta[i].at(0);
    out.shift.push_back(c);
    for (auto& v : out.zeta.zeta[i]) v += c;
  }
  return out;
}

/// Logarithmic connection on the trivial bundle: M(z) = sum_i A_i / (z - a_i), sum_i A_i = 0.
struct FuchsianConnection {
  std::vector<GaussRat> points;
  std::vector<GMat> residues;

  std::size_t rank() const { return residues.empty() ? 0 : residues.front().rows(); }

  void validate() const {
    if (points.size() != residues.size()) throw std::invalid_argument("one residue per marked point required");
    if (residues.empty()) throw std::invalid_argument("no residues");
    const std::size_t n = rank();
    GMat sum(n, n);
    for (const auto& a : residues) {
      if (a.rows() != n || a.cols() != n) throw std::invalid_argument("residues must be square of equal size");
      sum += a;
    }
    if (!sum.is_zero()) throw std::invalid_argument("residues do not sum to zero (pole at infinity)");
  }

  /// The dz-coefficient M(z).
  RatMat global_form() const {
    const std::size_t n = rank();
    RatMat m(n, n);
    for (std::size_t j = 0; j < points.size(); ++j) m += scale(RatFun::pole(points[j]), lift(residues[j]));
    return m;
  }

  friend bool operator==(const FuchsianConnection&, const FuchsianConnection&) = default;
};

/// A section of B_zeta(E) -> E, recorded by the matrices N^i_s: in honest coordinates
/// sigma^i_s = (Id; N^i_s), and nabla^i_s(v) = N^i_s v + C^i_s dv/dx_i against dx_i/x_i.
struct ConnectionSection {
  std::vector<std::vector<RatMat>> charts;

  const RatMat& N(std::size_t i, long s) const {
    const auto& row = charts.at(i);
    const long w = static_cast<long>(row.size());
    return row[static_cast<std::size_t>(((s % w) + w) % w)];
  }

  friend bool operator==(const ConnectionSection&, const ConnectionSection&) = default;
};

/// The sheaf D_zeta(E) written in A-linear coordinates (e, f - C_s de/dx) on D_s = E_s ⋉ E_{s+1},
/// together with the maps of the extension E(omega) -> D -> E.
struct DZetaSheaf {
  PatchedSheaf sheaf;              // rank 2n
  PatchedSheaf omega_twist;        // E(omega)
  SheafMorphism inclusion;         // E(omega) -> D, (0; Id)
  SheafMorphism projection;        // D -> E, (Id 0)
  std::vector<std::vector<RatMat>> twist;      // C^i_s
  std::vector<std::vector<RatMat>> naive_psi;  // psi^i_s in the coordinates (e, f)
};

namespace detail {

inline RatMat block_lower(const RatMat& tl, const RatMat& bl, const RatMat& br) {
  const std::size_t n = tl.rows();
  RatMat m(2 * n, 2 * n);
  m.set_block(0, 0, tl);
  m.set_block(n, 0, bl);
  m.set_block(n, n, br);
  return m;
}

inline std::string at_is(std::size_t i, long s) {
  return "(i,s)=(" + std::to_string(i) + "," + std::to_string(s) + ")";
}

inline bool trivial_patching(const PatchedSheaf& S) {
  for (std::size_t i = 0; i < S.weights.size(); ++i)
    for (std::size_t j = 0; j < S.weights.size(); ++j)
      if (!(S.g(i, j) == RatMat::identity(S.rank))) return false;
  return true;
}

}  // namespace detail

/// Matrix, in naive coordinates, of multiplication by a in A_i on D^i_s: a(e, f) = (ae, af + da/dx_i C_s e).
inline RatMat dzeta_action(const PatchedSheaf& S, std::size_t i, long s, const RatFun& a) {
  const std::size_t n = S.rank;
  const Charts ch = S.charts();
  return detail::block_lower(RatMat::scalar(n, a), scale(ch.d_dx(i, a), S.cycles[i].twist_map(s)), RatMat::scalar(n, a));
}

inline DZetaSheaf build_dzeta(const PatchedSheaf& S, const ZetaData& z) {
  z.check_shape(S.weights);
  if (!z.normalized()) throw std::invalid_argument("zeta must be normalized (equal zeta_{i1}); apply normalize_zeta first");
  const std::size_t k = S.weights.size();
  const std::size_t n = S.rank;
  const Charts ch = S.charts();
  const RatMat id = RatMat::identity(n), zero(n, n);

  DZetaSheaf D;
  D.omega_twist = twist_omega(S);
  D.sheaf.weights = S.weights;
  D.sheaf.rank = 2 * n;
  D.twist.resize(k);
  D.naive_psi.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Cycle& c = S.cycles[i];
    Cycle dc{i, 2 * n, {}};
    for (long s = 0; s < static_cast<long>(c.period()); ++s) {
      const RatMat C = c.twist_map(s);
      const RatMat delta = RatMat::scalar(n, RatFun(z.delta(i, s)));
      D.twist[i].push_back(C);
      D.naive_psi[i].push_back(detail::block_lower(c.phi(s), delta, c.phi(s + 1)));
      dc.mats.push_back(detail::block_lower(c.phi(s), delta - C * ch.d_dx(i, c.phi(s)), c.phi(s + 1)));
    }
    D.sheaf.cycles.push_back(std::move(dc));
  }

  // alpha_i identifies D^i_0 with E^i_0 ⋉ (E^i_0 ⊗ dx_i/x_i); l_ij patches the latter.
  std::vector<RatMat> alpha(k), alpha_inv(k);
  for (std::size_t i = 0; i < k; ++i) {
    const RatMat& phi0 = S.cycles[i].phi(0);
    const RatMat phi0_inv = inverse(phi0, ch.roots());
    const RatMat zi = RatMat::scalar(n, RatFun(z.at(i, 1)));
    alpha[i] = detail::block_lower(id, zi, phi0);
    alpha_inv[i] = detail::block_lower(id, zero - phi0_inv * zi, phi0_inv);
  }
  D.sheaf.patching.assign(k, std::vector<RatMat>(k, RatMat::identity(2 * n)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const RatMat& g = S.g(i, j);
      const RatMat l = detail::block_lower(g, zero - ch.log_derivation(i, g), scale(ch.frame_change(i, j), g));
      D.sheaf.patching[i][j] = alpha_inv[i] * l * alpha[j];
    }

  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t w = S.cycles[i].period();
    D.inclusion.levels.emplace_back(w, vcat(zero, id));
    D.projection.levels.emplace_back(w, hcat(id, zero));
  }
  return D;
}

/// Everything build_dzeta promises: sheaf axioms, period products, the extension
/// E(omega) -> D -> E as sheaf morphisms, the naive psi matching the honest one,
/// and the ⋉ action axioms on generators of A_i and their pairwise products.
inline Report check_dzeta(const PatchedSheaf& S, const ZetaData& z, const DZetaSheaf& D) {
  Report r;
  r.merge(check_sheaf(D.sheaf), "D: ");
  const std::size_t n = S.rank;
  const Charts ch = S.charts();
  r.merge(verify_morphism(D.omega_twist, D.sheaf, D.inclusion), "inclusion: ");
  r.merge(verify_morphism(D.sheaf, S, D.projection), "projection: ");
  for (std::size_t i = 0; i < S.weights.size(); ++i) {
    const Cycle& c = S.cycles[i];
    const long w = static_cast<long>(c.period());
    const RatFun x = ch.uniformizer(i);
    for (long s = 0; s < w; ++s) {
      const std::string at = " at " + detail::at_is(i, s);
      if (!(D.projection.levels[i][s] * D.inclusion.levels[i][s]).is_zero()) r.fail("projection∘inclusion != 0" + at);
      if (rank(D.inclusion.levels[i][s]) != n || rank(D.projection.levels[i][s]) != n) r.fail("extension maps lose rank" + at);
      const RatMat& C = D.twist[i][s];
      if (!(c.phi(s) * C == RatMat::scalar(n, x)) || !(C * c.phi(s) == RatMat::scalar(n, x))) r.fail("Phi_s C_s != x Id" + at);
      // naive -> honest change of coordinates (e, f) -> (e, f - C de/dx) intertwines the two psi
      // (checked on the generic vector by comparing matrices of the composite differential operators)
      const RatMat lower = D.naive_psi[i][s].block(n, 0, n, n) - C * ch.d_dx(i, c.phi(s));
      if (!(D.sheaf.cycles[i].mats[s].block(n, 0, n, n) == lower)) r.fail("honest psi disagrees with naive psi" + at);
      if (!(D.naive_psi[i][s].block(n, 0, n, n) == RatMat::scalar(n, RatFun(z.delta(i, s)))))
        r.fail("naive psi lower-left block is not (zeta~_{s+2} - zeta~_{s+1}) Id" + at);

      // generators of A_i and their degree-2 products
      std::vector<RatFun> gens{x};
      for (std::size_t j = 0; j < S.weights.size(); ++j)
        if (j != i) gens.push_back(RatFun::pole(S.weights.point(j)));
      const RatMat& C_next = D.twist[i][static_cast<std::size_t>((s + 1) % w)];
      auto act = [&](const RatMat& twist, const RatFun& a) {
        return detail::block_lower(RatMat::scalar(n, a), scale(ch.d_dx(i, a), twist), RatMat::scalar(n, a));
      };
      if (!(act(C, RatFun(1)) == RatMat::identity(2 * n))) r.fail("1 does not act as identity" + at);
      std::vector<RatFun> elems = gens;
      std::vector<RatMat> gen_act;
      for (const auto& g : gens) gen_act.push_back(act(C, g));
      for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a; b < gens.size(); ++b) {
          const RatFun ab = gens[a] * gens[b];
          elems.push_back(ab);
          if (!(act(C, ab) == gen_act[a] * gen_act[b])) r.fail("(ab)v != a(bv)" + at);
          if (!(act(C, gens[a] + gens[b]) == gen_act[a] + gen_act[b])) r.fail("(a+b)v != av + bv" + at);
        }
      for (const auto& e : elems)
        if (!(D.naive_psi[i][s] * act(C_next, e) == act(C, e) * D.naive_psi[i][s])) r.fail("psi is not A-linear for the ⋉ action" + at);
    }
    if (!(D.sheaf.cycles[i].product(0, w) == RatMat::scalar(2 * n, x))) r.fail("psi period product != x Id at chart " + std::to_string(i));
  }
  return r;
}

/// Per-chart global forms M_i = Phi^i_0 N^i_0 + zeta_{i1} Id (against dx_i/x_i).
inline std::vector<RatMat> chart_forms(const PatchedSheaf& S, const ZetaData& z, const ConnectionSection& sigma) {
  std::vector<RatMat> m;
  for (std::size_t i = 0; i < S.weights.size(); ++i)
    m.push_back(S.cycles[i].phi(0) * sigma.N(i, 0) + RatMat::scalar(S.rank, RatFun(z.at(i, 1))));
  return m;
}

inline Report verify_section(const PatchedSheaf& S, const ZetaData& z, const ConnectionSection& sigma) {
  z.check_shape(S.weights);
  const std::size_t k = S.weights.size();
  const std::size_t n = S.rank;
  if (sigma.charts.size() != k) throw std::invalid_argument("section needs one entry per chart");
  for (std::size_t i = 0; i < k; ++i) {
    if (sigma.charts[i].size() != S.cycles[i].period()) throw std::invalid_argument("section chart " + std::to_string(i) + " needs w_i levels");
    for (const auto& N : sigma.charts[i])
      if (N.rows() != n || N.cols() != n) throw std::invalid_argument("section matrix has wrong shape");
  }
  Report r;
  const Charts ch = S.charts();
  for (std::size_t i = 0; i < k; ++i) {
    const Cycle& c = S.cycles[i];
    for (long s = 0; s < static_cast<long>(c.period()); ++s) {
      if (!ch.in_chart(i, sigma.N(i, s))) r.fail("N outside A_i at " + detail::at_is(i, s));
      const RatMat lhs = sigma.N(i, s) * c.phi(s) + c.twist_map(s) * ch.d_dx(i, c.phi(s));
      const RatMat rhs = c.phi(s + 1) * sigma.N(i, s + 1) + RatMat::scalar(n, RatFun(z.delta(i, s)));
      if (!(lhs == rhs)) r.fail("recursion fails at " + detail::at_is(i, s));
    }
  }
  const auto M = chart_forms(S, z, sigma);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const RatMat& g = S.g(i, j);
      if (!(M[i] * g == scale(ch.frame_change(i, j), g * M[j]) - ch.log_derivation(i, g)))
        r.fail("global forms do not glue on overlap (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return r;
}

/// The section as a morphism E -> D_zeta(E): sigma^i_s = (Id; N^i_s), checked with verify_morphism.
inline Report verify_section_in_dzeta(const PatchedSheaf& S, const DZetaSheaf& D, const ConnectionSection& sigma) {
  SheafMorphism f;
  for (std::size_t i = 0; i < S.weights.size(); ++i) {
    f.levels.emplace_back();
    for (long s = 0; s < static_cast<long>(S.cycles[i].period()); ++s)
      f.levels.back().push_back(vcat(RatMat::identity(S.rank), sigma.N(i, s)));
  }
  Report r = verify_morphism(S, D.sheaf, f);
  for (std::size_t i = 0; i < S.weights.size(); ++i)
    for (long s = 0; s < static_cast<long>(S.cycles[i].period()); ++s)
      if (!(D.projection.levels[i][s] * f.levels[i][s] == RatMat::identity(S.rank))) r.fail("projection∘sigma != Id at " + detail::at_is(i, s));
  return r;
}

struct ConnectionForms {
  std::vector<RatMat> chart_forms;                 // M_i against dx_i/x_i
  std::optional<FuchsianConnection> fuchsian;      // when the underlying bundle is trivial
  std::vector<Flag> flags;
};

inline ConnectionForms section_to_connection(const PatchedSheaf& S, const ZetaData& z, const ConnectionSection& sigma) {
  if (const Report r = verify_section(S, z, sigma); !r.ok()) throw std::domain_error("section is not valid: " + r.summary());
  const Charts ch = S.charts();
  ConnectionForms out{chart_forms(S, z, sigma), std::nullopt, extract_flags(S)};
  if (detail::trivial_patching(S)) {
    const RatMat M = scale(ch.log_frame(0), out.chart_forms[0]);
    FuchsianConnection F{S.weights.points, {}};
    for (const auto& a : S.weights.points) F.residues.push_back(M.map([&a](const RatFun& f) { return f.residue_at(a); }));
    if (!(F.global_form() == M)) throw std::logic_error("glued form is not of Fuchsian shape");
    out.fuchsian = std::move(F);
  }
  return out;
}

/// (Res_{a_i} - zeta_{is})(E_{i,s-1}) ⊆ E_{is} for all i and 1 <= s <= w_i.
inline Report check_zeta_condition(const FuchsianConnection& F, const std::vector<Flag>& flags, const ZetaData& z) {
  F.validate();
  if (flags.size() != F.points.size() || z.size() != F.points.size()) throw std::invalid_argument("one flag and zeta row per marked point required");
  Report r;
  const std::size_t n = F.rank();
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i].ambient != n) throw std::invalid_argument("flag ambient dimension differs from rank");
    if (static_cast<int>(flags[i].length()) != z.weight(i)) throw std::invalid_argument("flag length differs from zeta row length");
    for (int s = 1; s <= z.weight(i); ++s) {
      const GMat shifted = F.residues[i] - GMat::scalar(n, z.at(i, s));
      if (!span_contained(shifted * flags[i].subspaces[s - 1], flags[i].subspaces[s]))
        r.fail("zeta condition fails at " + detail::at_is(i, s));
    }
  }
  return r;
}

inline ConnectionSection connection_to_section(const std::vector<Flag>& flags, const WeightData& W, const ZetaData& z,
                                               const FuchsianConnection& F) {
  F.validate();
  if (!(F.points == W.points)) throw std::invalid_argument("connection lives on different marked points");
  z.check_shape(W);
  if (const Report r = check_zeta_condition(F, flags, z); !r.ok()) throw std::domain_error(r.failures.front());
  const Charts ch(W);
  const std::size_t n = F.rank();
  const RatMat M = F.global_form();
  ConnectionSection sigma;
  for (std::size_t i = 0; i < W.size(); ++i) {
    const LatticeBases lb = lattice_bases(flags[i], ch, i);
    const RatMat Mi = M.map([&](const RatFun& f) { return f.divided_by(ch.log_frame(i), ch.roots()); });
    std::vector<RatMat> levels;
    for (long s = 0; s < W.weight(i); ++s) {
      const RatMat& P = lb.bases[s];
      const RatMat shifted = Mi - RatMat::scalar(n, RatFun(z.tilde(i, s + 1)));
      RatMat N = lb.inverses[s + 1] * (shifted * P + ch.log_derivation(i, P));
      if (!ch.in_chart(i, N)) throw std::logic_error("constructed N leaves A_i at " + detail::at_is(i, s));
      levels.push_back(std::move(N));
    }
    sigma.charts.push_back(std::move(levels));
  }
  return sigma;
}

/// Section for zeta' = zeta + c (sum c_i = 0): add the global form sum_i c_i dz/(z - a_i).
inline ConnectionSection twist_section(const PatchedSheaf& S, const std::vector<GaussRat>& c, const ConnectionSection& sigma) {
  const std::size_t k = S.weights.size();
  if (c.size() != k) throw std::invalid_argument("one residue per marked point required");
  GaussRat total;
  RatFun form;
  for (std::size_t j = 0; j < k; ++j) {
    total += c[j];
    form = form + RatFun::pole(S.weights.point(j)).scaled(c[j]);
  }
  if (!total.is_zero()) throw std::invalid_argument("residues of the added form must sum to zero");
  const Charts ch = S.charts();
  ConnectionSection out = sigma;
  for (std::size_t i = 0; i < k; ++i) {
    const RatFun omega = form.divided_by(ch.log_frame(i), ch.roots());
    const RatFun f = (omega - RatFun(c[i])).divided_by(ch.uniformizer(i), ch.roots());
    for (long s = 0; s < static_cast<long>(S.cycles[i].period()); ++s)
      out.charts[i][s] = sigma.N(i, s) + scale(f, S.cycles[i].twist_map(s));
  }
  return out;
}

/// Zeta data matching shift_sheaf(S, r): row i becomes zeta~_{i,1-r_i} .. zeta~_{i,w_i-r_i}.
inline ZetaData shift_zeta(const ZetaData& z, const std::vector<long>& r) {
  if (r.size() != z.size()) throw std::invalid_argument("one shift per marked point required");
  ZetaData out = z;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (int s = 1; s <= z.weight(i); ++s) out.zeta[i][s - 1] = z.tilde(i, s - r[i]);
  return out;
}

/// The same connection seen as a section for shift_sheaf(S, r): levels are reindexed.
inline ConnectionSection shift_section(const ConnectionSection& sigma, const std::vector<long>& r) {
  if (r.size() != sigma.charts.size()) throw std::invalid_argument("one shift per marked point required");
  ConnectionSection out = sigma;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t s = 0; s < sigma.charts[i].size(); ++s) out.charts[i][s] = sigma.N(i, static_cast<long>(s) - r[i]);
  return out;
}

/// Fibre maps R^i_s = N^i_s(a_i) and the identities they satisfy.
struct ResidueTowerChart {
  GMat residue;                // Res_{a_i} in chart-i fibre coordinates
  std::vector<GMat> R;         // R_0..R_{w-1}
  Report identities;           // provable, lift-independent identities
  Report factorization;        // whether (1⊗Res) nabla_s kills m_i E_s, i.e. C_s(a_i) = 0
  Report literal_intertwining; // R_s Phi_s(a) = Phi_{s+1}(a) R_{s+1} + Delta_s, without projecting
};

struct ResidueTower {
  std::vector<ResidueTowerChart> charts;
  bool ok() const {
    for (const auto& c : charts)
      if (!c.identities.ok()) return false;
    return true;
  }
};

inline ResidueTower residue_tower(const PatchedSheaf& S, const ZetaData& z, const ConnectionSection& sigma) {
  if (const Report r = verify_section(S, z, sigma); !r.ok()) throw std::domain_error("section is not valid: " + r.summary());
  const std::size_t n = S.rank;
  const auto M = chart_forms(S, z, sigma);
  ResidueTower tower;
  for (std::size_t i = 0; i < S.weights.size(); ++i) {
    const Cycle& c = S.cycles[i];
    const GaussRat& a = S.weights.point(i);
    const long w = static_cast<long>(c.period());
    ResidueTowerChart t;
    t.residue = eval_at(M[i], a);
    for (long s = 0; s < w; ++s) t.R.push_back(eval_at(sigma.N(i, s), a));
    auto shifted = [&](long s) { return t.residue - GMat::scalar(n, z.at(i, static_cast<int>(s))); };

    if (!(eval_at(c.phi(0), a) * t.R[0] == shifted(1))) t.identities.fail("Phi_0(a) R_0 != Res - zeta_1 at chart " + std::to_string(i));
    for (long s = 0; s < w; ++s) {
      const GMat P = eval_at(c.product(0, s), a), P_next = eval_at(c.product(0, s + 1), a);
      if (!(P_next * t.R[s] == shifted(s + 1) * P)) t.identities.fail("P_{s+1}(a) R_s != (Res - zeta_{s+1}) P_s(a) at " + detail::at_is(i, s));
      const GMat defect = t.R[s] * eval_at(c.phi(s), a) - eval_at(c.phi(s + 1), a) * t.R[(s + 1) % w] - GMat::scalar(n, z.delta(i, s));
      if (!(P_next * defect).is_zero()) t.identities.fail("projected intertwining fails at " + detail::at_is(i, s));
      if (!defect.is_zero()) t.literal_intertwining.fail("R_s Phi_s(a) - Phi_{s+1}(a) R_{s+1} - Delta_s != 0 at " + detail::at_is(i, s));
      const GMat Ca = eval_at(c.twist_map(s), a);
      if (!Ca.is_zero())
        t.factorization.fail("(1⊗Res) nabla_s does not kill m E_s at " + detail::at_is(i, s) + ": x u ↦ C_s(a) u with C_s(a) of rank " +
                             std::to_string(rank(Ca)));
    }
    GMat prod = GMat::identity(n);
    for (long s = 1; s <= w; ++s) prod = prod * shifted(s);
    if (!prod.is_zero()) t.identities.fail("prod_s (Res - zeta_s) != 0 at chart " + std::to_string(i));
    tower.charts.push_back(std::move(t));
  }
  return tower;
}

}  // namespace wpl
