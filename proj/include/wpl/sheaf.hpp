#pragma once

#include "wpl/chart.hpp"
#include "wpl/flag.hpp"
#include "wpl/report.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace wpl {

/// A w_i-cycle of free A_i-modules of rank n. mats[s] is the matrix of
/// phi_s : E_{s+1} -> E_s. Bases of E_{s+w} are x_i ⊗ (bases of E_s), so the
/// stored matrices are read periodically and the cycle law says that every
/// product of w consecutive matrices equals x_i * Id.
struct Cycle {
  std::size_t chart = 0;
  std::size_t rank = 0;
  std::vector<RatMat> mats;

  std::size_t period() const { return mats.size(); }
  /// phi_s for any integer s.
  const RatMat& phi(long s) const {
    const long w = static_cast<long>(mats.size());
    return mats[static_cast<std::size_t>(((s % w) + w) % w)];
  }
  /// phi_s phi_{s+1} ... phi_{s+len-1}
  RatMat product(long s, long len) const {
    RatMat p = RatMat::identity(rank);
    for (long t = 0; t < len; ++t) p = p * phi(s + t);
    return p;
  }
  /// Matrix of e ↦ phi_{s+1}...phi_{s+w-1}(x_i ⊗ e), E_s -> E_{s+1}.
  RatMat twist_map(long s) const { return product(s + 1, static_cast<long>(mats.size()) - 1); }

  friend bool operator==(const Cycle& a, const Cycle& b) {
    return a.chart == b.chart && a.rank == b.rank && a.mats == b.mats;
  }
};

/// A vector bundle on the weighted projective line: one cycle per chart plus
/// patching matrices g_ij : (chart j coordinates) -> (chart i coordinates).
struct PatchedSheaf {
  WeightData weights;
  std::size_t rank = 0;
  std::vector<Cycle> cycles;
  std::vector<std::vector<RatMat>> patching;  // k × k, patching[i][i] = Id

  const RatMat& g(std::size_t i, std::size_t j) const { return patching.at(i).at(j); }
  Charts charts() const { return Charts(weights); }

  friend bool operator==(const PatchedSheaf& a, const PatchedSheaf& b) {
    return a.weights == b.weights && a.rank == b.rank && a.cycles == b.cycles && a.patching == b.patching;
  }
};

/// Per-chart, per-level maps f^i_s : E^i_s -> F^i_s (rank_F × rank_E), stored periodically.
struct SheafMorphism {
  std::vector<std::vector<RatMat>> levels;
};

inline Report check_cycle(const Cycle& c, const Charts& charts) {
  Report r;
  const std::size_t i = c.chart;
  if (i >= charts.weights().size()) throw std::invalid_argument("cycle chart index out of range");
  if (c.mats.empty()) throw std::invalid_argument("cycle has no matrices");
  for (std::size_t s = 0; s < c.mats.size(); ++s)
    if (c.mats[s].rows() != c.rank || c.mats[s].cols() != c.rank)
      throw std::invalid_argument("cycle matrix " + std::to_string(s) + " is " + c.mats[s].shape() +
                                  ", expected rank " + std::to_string(c.rank));
  if (static_cast<int>(c.mats.size()) != charts.weights().weight(i))
    r.fail("chart " + std::to_string(i) + ": period " + std::to_string(c.mats.size()) + " != weight " +
           std::to_string(charts.weights().weight(i)));
  for (std::size_t s = 0; s < c.mats.size(); ++s)
    if (!charts.in_chart(i, c.mats[s]))
      r.fail("chart " + std::to_string(i) + ": phi_" + std::to_string(s) + " has entries outside A_i");
  const RatMat target = RatMat::scalar(c.rank, charts.uniformizer(i));
  const long w = static_cast<long>(c.mats.size());
  for (long s = 0; s < w; ++s) {
    if (!(c.product(s, w) == target)) {
      r.fail("chart " + std::to_string(i) + ": cycle product starting at s=" + std::to_string(s) +
             " is not x_i*Id");
      break;
    }
  }
  return r;
}

inline Report check_sheaf(const PatchedSheaf& S) {
  Report r;
  const Charts charts = S.charts();
  const std::size_t k = S.weights.size();
  if (S.cycles.size() != k) throw std::invalid_argument("one cycle per marked point required");
  if (S.patching.size() != k) throw std::invalid_argument("patching must be k × k");
  for (std::size_t i = 0; i < k; ++i) {
    if (S.cycles[i].chart != i) r.fail("cycle " + std::to_string(i) + " labelled with chart " + std::to_string(S.cycles[i].chart));
    if (S.cycles[i].rank != S.rank) throw std::invalid_argument("cycle rank differs from sheaf rank");
    r.merge(check_cycle(S.cycles[i], charts));
    if (S.patching[i].size() != k) throw std::invalid_argument("patching must be k × k");
    for (std::size_t j = 0; j < k; ++j)
      if (S.g(i, j).rows() != S.rank || S.g(i, j).cols() != S.rank)
        throw std::invalid_argument("patching matrix has wrong shape");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(S.g(i, i) == RatMat::identity(S.rank))) r.fail("g_" + std::to_string(i) + std::to_string(i) + " != Id");
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const std::string name = "g_" + std::to_string(i) + std::to_string(j);
      const bool in_ring = charts.in_overlap(S.g(i, j));
      if (!in_ring) r.fail(name + " has poles outside the marked points");
      // g_ji over the overlap ring with g_ji g_ij = Id already certifies invertibility;
      // the determinant is only consulted to explain a failure
      if (!(S.g(j, i) * S.g(i, j) == RatMat::identity(S.rank))) {
        r.fail("g_" + std::to_string(j) + std::to_string(i) + " * " + name + " != Id");
        if (in_ring && !charts.is_overlap_invertible(S.g(i, j))) r.fail(name + " is not invertible on the overlap");
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) {
        if (i == j || j == l || i == l) continue;
        if (!(S.g(i, j) * S.g(j, l) == S.g(i, l)))
          r.fail("cocycle g_" + std::to_string(i) + std::to_string(j) + " g_" + std::to_string(j) +
                 std::to_string(l) + " != g_" + std::to_string(i) + std::to_string(l));
      }
  return r;
}

/// Flags of the underlying parabolic bundle, in the chart-i fibre coordinates.
inline std::vector<Flag> extract_flags(const PatchedSheaf& S) {
  std::vector<Flag> flags;
  for (std::size_t i = 0; i < S.weights.size(); ++i) {
    const Cycle& c = S.cycles[i];
    const GaussRat& a = S.weights.point(i);
    std::vector<GMat> layers;
    RatMat p = RatMat::identity(S.rank);
    layers.push_back(mat_image_mod_point(p, a));
    for (std::size_t s = 1; s <= c.period(); ++s) {
      p = p * c.mats[s - 1];
      layers.push_back(mat_image_mod_point(p, a));
    }
    flags.emplace_back(S.rank, std::move(layers));
  }
  return flags;
}

/// Basis of C^n adapted to a flag: the last dim(V_s) columns span V_s.
inline GMat adapted_basis(const Flag& f) {
  const std::size_t n = f.ambient;
  GMat cols(n, 0);
  for (std::size_t s = f.subspaces.size(); s-- > 0;) {
    const GMat& layer = f.subspaces[s];
    for (std::size_t c = 0; c < layer.cols(); ++c) {
      GMat candidate = hcat(cols, layer.column(c));
      if (rank(candidate) > cols.cols()) cols = std::move(candidate);
    }
  }
  if (cols.cols() != n) throw std::invalid_argument("flag does not span the fibre");
  // deepest layer was collected first; put it last
  GMat b(n, n);
  for (std::size_t c = 0; c < n; ++c) b.set_block(0, n - 1 - c, cols.column(c));
  return b;
}

namespace detail {

/// Basis (columns) of the lattice {v : v(a_i) ∈ V_s} for 0 < s < w; P_0 = Id, P_w = x Id.
inline RatMat lattice_basis(const Flag& f, const GMat& basis, std::size_t s, const RatFun& x) {
  const std::size_t n = f.ambient;
  const std::size_t w = f.length();
  if (s == 0) return RatMat::identity(n);
  if (s == w) return RatMat::scalar(n, x);
  const std::size_t d = f.dim(s);
  std::vector<RatFun> diag(n, x);
  for (std::size_t j = n - d; j < n; ++j) diag[j] = RatFun(1);
  return lift(basis) * RatMat::diagonal(diag);
}

inline RatMat lattice_basis_inverse(const Flag& f, const GMat& basis_inv, std::size_t s, const RatFun& x_inv) {
  const std::size_t n = f.ambient;
  const std::size_t w = f.length();
  if (s == 0) return RatMat::identity(n);
  if (s == w) return RatMat::scalar(n, x_inv);
  const std::size_t d = f.dim(s);
  std::vector<RatFun> diag(n, x_inv);
  for (std::size_t j = n - d; j < n; ++j) diag[j] = RatFun(1);
  return RatMat::diagonal(diag) * lift(basis_inv);
}

}  // namespace detail

/// Lattice bases P_0..P_w of the parabolic sheaf built from `flag` at chart i.
/// phi_s = P_s^{-1} P_{s+1}; P_0 = Id and P_w = x_i Id.
struct LatticeBases {
  std::vector<RatMat> bases;
  std::vector<RatMat> inverses;
};

inline LatticeBases lattice_bases(const Flag& f, const Charts& charts, std::size_t i) {
  const RatFun x = charts.uniformizer(i);
  const RatFun x_inv = x.inverse(charts.roots());
  const GMat b = adapted_basis(f);
  const GMat b_inv = inverse(b);
  LatticeBases lb;
  for (std::size_t s = 0; s <= f.length(); ++s) {
    lb.bases.push_back(detail::lattice_basis(f, b, s, x));
    lb.inverses.push_back(detail::lattice_basis_inverse(f, b_inv, s, x_inv));
  }
  return lb;
}

/// The vector bundle on the weighted line attached to the trivial rank-n
/// bundle with the given flags (one per marked point). Patching is the identity.
inline PatchedSheaf parabolic_to_sheaf(std::size_t n, const std::vector<Flag>& flags, const WeightData& W) {
  W.validate();
  if (flags.size() != W.size()) throw std::invalid_argument("one flag per marked point required");
  const Charts charts(W);
  PatchedSheaf S;
  S.weights = W;
  S.rank = n;
  for (std::size_t i = 0; i < W.size(); ++i) {
    const Flag& f = flags[i];
    if (f.ambient != n) throw std::invalid_argument("flag ambient dimension differs from rank");
    if (static_cast<int>(f.length()) != W.weight(i)) throw std::invalid_argument("flag length differs from weight");
    if (auto rep = f.check(); !rep.ok()) throw std::invalid_argument("malformed flag: " + rep.summary());
    const LatticeBases lb = lattice_bases(f, charts, i);
    Cycle c{i, n, {}};
    for (std::size_t s = 0; s < f.length(); ++s) c.mats.push_back(lb.inverses[s] * lb.bases[s + 1]);
    S.cycles.push_back(std::move(c));
  }
  S.patching.assign(W.size(), std::vector<RatMat>(W.size(), RatMat::identity(n)));
  return S;
}

/// Matrix of the canonical map E_0 -> E_{-r} on the overlap.
inline RatMat canonical_shift_map(const Cycle& c, long r, const Charts& charts) {
  if (r == 0) return RatMat::identity(c.rank);
  if (r > 0) return c.product(-r, r);
  return inverse(c.product(0, -r), charts.roots());
}

/// E(sum r_i x_i): levels F^i_s = E^i_{s-r_i}.
inline PatchedSheaf shift_sheaf(const PatchedSheaf& S, const std::vector<long>& r) {
  const std::size_t k = S.weights.size();
  if (r.size() != k) throw std::invalid_argument("one shift per marked point required");
  const Charts charts = S.charts();
  PatchedSheaf F = S;
  std::vector<RatMat> q(k), q_inv(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Cycle& c = S.cycles[i];
    for (std::size_t s = 0; s < c.period(); ++s) F.cycles[i].mats[s] = c.phi(static_cast<long>(s) - r[i]);
    q[i] = canonical_shift_map(c, r[i], charts);
    q_inv[i] = r[i] == 0 ? RatMat::identity(S.rank) : inverse(q[i], charts.roots());
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) F.patching[i][j] = q[i] * S.g(i, j) * q_inv[j];
  return F;
}

/// E(omega): chart-i level s is E^i_{s+1} ⊗ Omega^1(log D), trivialised by dx_i/x_i.
inline PatchedSheaf twist_omega(const PatchedSheaf& S) {
  const std::size_t k = S.weights.size();
  const Charts charts = S.charts();
  PatchedSheaf F = S;
  std::vector<RatMat> phi0_inv(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Cycle& c = S.cycles[i];
    for (std::size_t s = 0; s < c.period(); ++s) F.cycles[i].mats[s] = c.phi(static_cast<long>(s) + 1);
    phi0_inv[i] = inverse(c.phi(0), charts.roots());
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j)
        F.patching[i][j] = scale(charts.frame_change(i, j), phi0_inv[i] * S.g(i, j) * S.cycles[j].phi(0));
  return F;
}

/// Degree of the underlying bundle on P^1: the divisor of det of the chart-0 frame.
inline long underlying_degree(const PatchedSheaf& S) {
  long d = 0;
  for (std::size_t i = 1; i < S.weights.size(); ++i)
    d += det(S.g(i, 0), S.weights.points).order_at(S.weights.point(i));
  return d;
}

inline Report verify_morphism(const PatchedSheaf& S, const PatchedSheaf& T, const SheafMorphism& f) {
  Report r;
  const std::size_t k = S.weights.size();
  if (!(S.weights == T.weights)) throw std::invalid_argument("sheaves live on different weighted lines");
  if (f.levels.size() != k) throw std::invalid_argument("one list of maps per chart required");
  const Charts charts = S.charts();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& lv = f.levels[i];
    const std::size_t w = S.cycles[i].period();
    if (lv.size() != w) {
      r.fail("chart " + std::to_string(i) + ": expected " + std::to_string(w) + " levels (w_i-periodic storage)");
      continue;
    }
    for (std::size_t s = 0; s < w; ++s) {
      if (lv[s].rows() != T.rank || lv[s].cols() != S.rank) throw std::invalid_argument("morphism matrix has wrong shape");
      if (!charts.in_chart(i, lv[s])) r.fail("chart " + std::to_string(i) + ": f_" + std::to_string(s) + " outside A_i");
      const RatMat& next = lv[(s + 1) % w];
      if (!(T.cycles[i].mats[s] * next == lv[s] * S.cycles[i].mats[s]))
        r.fail("chart " + std::to_string(i) + ": phi_s f_{s+1} != f_s phi_s at s=" + std::to_string(s));
    }
  }
  if (!r.ok()) return r;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && !(T.g(i, j) * f.levels[j][0] == f.levels[i][0] * S.g(i, j)))
        r.fail("patching square (" + std::to_string(i) + "," + std::to_string(j) + ") does not commute");
  return r;
}

inline SheafMorphism identity_morphism(const PatchedSheaf& S, const RatFun& scalar = RatFun(1)) {
  SheafMorphism f;
  for (const auto& c : S.cycles) f.levels.emplace_back(c.period(), RatMat::scalar(S.rank, scalar));
  return f;
}

}  // namespace wpl
