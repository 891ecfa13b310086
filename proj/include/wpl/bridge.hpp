#pragma once

#include "wpl/quiver.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpl {

/// Residues of a logarithmic connection on the trivial bundle with flags and eigenvalue data.
struct FuchsianTuple {
  WeightData weights;
  std::size_t rank = 0;
  std::vector<GMat> residues;
  std::vector<Flag> flags;
  ZetaData zeta;

  FuchsianConnection connection() const { return {weights.points, residues}; }

  /// Shapes, sum of residues, flags and the zeta condition.
  Report check() const {
    weights.validate();
    zeta.check_shape(weights);
    Report r;
    try {
      connection().validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
      return r;
    }
    if (residues.front().rows() != rank) r.fail("residues do not match the rank");
    for (std::size_t i = 0; i < flags.size(); ++i) r.merge(flags[i].check(), "flag " + std::to_string(i) + ": ");
    if (!r.ok()) return r;
    r.merge(check_zeta_condition(connection(), flags, zeta));
    return r;
  }

  std::vector<std::vector<std::size_t>> flag_dims() const {
    std::vector<std::vector<std::size_t>> d;
    for (const auto& f : flags) {
      const auto all = f.dims();
      d.emplace_back(all.begin() + 1, all.end() - 1);
    }
    return d;
  }
};

struct BridgeRep {
  StarQuiver star;
  DoubledRep rep;
  LambdaVec lambda;
};

namespace detail {

/// Basis matrix used for the fibre of a flag layer: the stored columns when independent.
/// V_0 is the center vertex in standard coordinates, whatever basis the flag stores for it.
inline GMat layer_basis(const Flag& f, std::size_t s) {
  return s == 0 ? GMat::identity(f.ambient) : column_basis(f.subspaces.at(s));
}

inline GMat solve_exact(const GMat& a, const GMat& b, const std::string& what) {
  auto x = solve(a, b);
  if (!x) throw std::logic_error("no exact solution for " + what);
  return *x;
}

}  // namespace detail

/// V_0 = C^n, V_[i,s] = E_is; X = inclusion, X* = (A_i - zeta_is) restricted and corestricted.
inline BridgeRep fuchs_to_rep(const FuchsianTuple& T) {
  if (const Report r = T.check(); !r.ok()) throw std::invalid_argument("not a valid Fuchsian tuple: " + r.summary());
  BridgeRep out{star_quiver(T.weights), {}, zeta_to_lambda(T.zeta)};
  out.rep.dims = star_dims(T.weights, T.rank, T.flag_dims());
  const std::size_t arrows = out.star.quiver.arrows.size();
  out.rep.X.resize(arrows);
  out.rep.Xstar.resize(arrows);
  for (std::size_t i = 0; i < T.weights.size(); ++i) {
    const GMat& A = T.residues[i];
    for (int s = 1; s < T.weights.weight(i); ++s) {
      const GMat prev = detail::layer_basis(T.flags[i], s - 1), cur = detail::layer_basis(T.flags[i], s);
      const std::size_t a = out.star.arm_arrow[i][s - 1];
      const std::string at = detail::at_is(i, s);
      out.rep.X[a] = detail::solve_exact(prev, cur, "inclusion at " + at);
      out.rep.Xstar[a] = detail::solve_exact(cur, (A - GMat::scalar(T.rank, T.zeta.at(i, s))) * prev, "starred map at " + at);
    }
  }
  return out;
}

/// Composite arm map X_[i,1] ... X_[i,s] : V_[i,s] -> V_0.
inline GMat arm_composite(const StarQuiver& sq, const DoubledRep& rep, std::size_t i, std::size_t s) {
  GMat m = GMat::identity(rep.dims[0]);
  for (std::size_t t = 1; t <= s; ++t) m = m * rep.X[sq.arm_arrow[i][t - 1]];
  return m;
}

inline FuchsianTuple rep_to_fuchs(const StarQuiver& sq, const DoubledRep& rep, const LambdaVec& lambda, const ZetaData& z) {
  const WeightData W = z.weights();
  if (!(star_quiver(W).quiver == sq.quiver)) throw std::invalid_argument("quiver is not the star quiver of the zeta shape");
  if (!(zeta_to_lambda(z) == lambda)) throw std::invalid_argument("lambda is not zeta_to_lambda(zeta)");
  if (!defect_is_zero(moment_defect(sq.quiver, rep, lambda))) throw std::invalid_argument("representation has nonzero moment defect");
  const std::size_t n = rep.dims[0];
  FuchsianTuple T{W, n, {}, {}, z};
  for (std::size_t i = 0; i < W.size(); ++i) {
    const int w = W.weight(i);
    GMat A = GMat::scalar(n, z.at(i, 1));
    if (w > 1) A += rep.X[sq.arm_arrow[i][0]] * rep.Xstar[sq.arm_arrow[i][0]];
    std::vector<GMat> interior;
    for (int s = 1; s < w; ++s) {
      GMat c = arm_composite(sq, rep, i, static_cast<std::size_t>(s));
      if (rank(c) != c.cols()) throw std::domain_error("non-injective arm " + detail::at_is(i, s));
      interior.push_back(std::move(c));
    }
    T.residues.push_back(std::move(A));
    T.flags.push_back(Flag::from_interior(n, interior));
  }
  if (const Report r = T.check(); !r.ok()) throw std::logic_error("rep_to_fuchs produced an invalid tuple: " + r.summary());
  return T;
}

/// Per-vertex isomorphism U_v from one representation to another.
using RepIso = std::vector<GMat>;

/// U_h X_a = X'_a U_t and U_t X*_a = X*'_a U_h for every arrow, each U_v invertible.
inline Report check_rep_isomorphism(const Quiver& Q, const DoubledRep& from, const DoubledRep& to, const RepIso& U) {
  Report r;
  if (from.dims != to.dims) {
    r.fail("dimension vectors differ");
    return r;
  }
  if (U.size() != Q.vertices.size()) throw std::invalid_argument("one matrix per vertex required");
  for (std::size_t v = 0; v < U.size(); ++v)
    if (U[v].rows() != from.dims[v] || U[v].cols() != from.dims[v] || rank(U[v]) != from.dims[v])
      r.fail("U at vertex " + Q.vertices[v] + " is not invertible");
  for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
    const auto& ar = Q.arrows[a];
    if (!(U[ar.head] * from.X[a] == to.X[a] * U[ar.tail])) r.fail("X does not intertwine on " + ar.name);
    if (!(U[ar.tail] * from.Xstar[a] == to.Xstar[a] * U[ar.head])) r.fail("X* does not intertwine on " + ar.name);
  }
  return r;
}

/// Base change from the representation `rep` to fuchs_to_rep(rep_to_fuchs(rep)): identity at the
/// center, and at [i,s] the coordinates of the arm composite in the chosen flag basis.
inline RepIso canonical_intertwiner(const StarQuiver& sq, const DoubledRep& rep, const FuchsianTuple& T) {
  RepIso U(sq.quiver.vertices.size());
  U[0] = GMat::identity(rep.dims[0]);
  for (std::size_t i = 0; i < sq.arm_vertex.size(); ++i)
    for (std::size_t s = 1; s <= sq.arm_vertex[i].size(); ++s)
      U[sq.vertex(i, s)] = detail::solve_exact(detail::layer_basis(T.flags[i], s), arm_composite(sq, rep, i, s), "intertwiner");
  return U;
}

/// Base change between the reps of two tuples with equal residues and equal flags as subspaces.
inline RepIso flag_intertwiner(const StarQuiver& sq, const FuchsianTuple& from, const FuchsianTuple& to) {
  RepIso U(sq.quiver.vertices.size());
  U[0] = GMat::identity(from.rank);
  for (std::size_t i = 0; i < sq.arm_vertex.size(); ++i)
    for (std::size_t s = 1; s <= sq.arm_vertex[i].size(); ++s)
      U[sq.vertex(i, s)] =
          detail::solve_exact(detail::layer_basis(to.flags[i], s), detail::layer_basis(from.flags[i], s), "flag intertwiner");
  return U;
}

/// fuchs_to_rep of the connection of a valid section on a parabolic sheaf with trivial patching.
inline BridgeRep section_to_rep(const PatchedSheaf& S, const ZetaData& z, const ConnectionSection& sigma) {
  const ConnectionForms forms = section_to_connection(S, z, sigma);
  if (!forms.fuchsian) throw std::invalid_argument("underlying bundle is not trivial");
  return fuchs_to_rep(FuchsianTuple{S.weights, S.rank, forms.fuchsian->residues, forms.flags, z});
}

struct GeneratorOptions {
  std::optional<ZetaData> zeta;  // random (with trace pairing 0) when absent
  int retries = 50;
  long range = 3;                // entries drawn from [-range, range] (numerators)
};

namespace detail {

inline GaussRat draw(std::mt19937_64& rng, long range) {
  std::uniform_int_distribution<long> num(-range, range), den(1, 2);
  return {num(rng), den(rng)};
}

inline GMat draw_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long range) {
  GMat m(r, c);
  for (auto& e : m.data()) e = draw(rng, range);
  return m;
}

/// Eigenvalue multiplicities m_is = d_{i,s-1} - d_is (d_i0 = n, d_iw = 0).
inline std::vector<std::vector<long>> multiplicities(std::size_t n, const std::vector<std::vector<std::size_t>>& flag_dims) {
  std::vector<std::vector<long>> m;
  for (const auto& row : flag_dims) {
    std::vector<long> mi;
    std::size_t prev = n;
    for (auto d : row) {
      mi.push_back(static_cast<long>(prev) - static_cast<long>(d));
      prev = d;
    }
    mi.push_back(static_cast<long>(prev));
    m.push_back(mi);
  }
  return m;
}

}  // namespace detail

/// Random Fuchsian tuple of the given shape, built on the quiver side and converted
/// with rep_to_fuchs. Deterministic for a given seed.
inline FuchsianTuple random_instance(const WeightData& W, std::size_t n, const std::vector<std::vector<std::size_t>>& flag_dims,
                                     std::uint64_t seed, const GeneratorOptions& opt = {}) {
  W.validate();
  if (n == 0) throw std::invalid_argument("rank must be positive");
  const StarQuiver sq = star_quiver(W);
  const DimVector d = star_dims(W, n, flag_dims);
  std::mt19937_64 rng(seed);

  ZetaData z{W.points, {}};
  if (opt.zeta) {
    z = *opt.zeta;
    z.check_shape(W);
    const GaussRat tp = trace_pairing(zeta_to_lambda(z), d);
    if (!tp.is_zero())
      throw std::domain_error("trace pairing of lambda with the dimension vector is " + tp.str() +
                              ", not 0: no representation (and no Fuchsian system) of this shape exists");
  } else {
    // sum_is m_is zeta_is = 0 is the only constraint; solve it for the last coordinate with m != 0
    const auto m = detail::multiplicities(n, flag_dims);
    for (std::size_t i = 0; i < W.size(); ++i) {
      z.zeta.emplace_back();
      for (int s = 0; s < W.weight(i); ++s) z.zeta[i].push_back(detail::draw(rng, opt.range));
    }
    std::size_t fi = 0, fs = 0;
    GaussRat rest;
    for (std::size_t i = 0; i < W.size(); ++i)
      for (std::size_t s = 0; s < m[i].size(); ++s)
        if (m[i][s] != 0) fi = i, fs = s;
    for (std::size_t i = 0; i < W.size(); ++i)
      for (std::size_t s = 0; s < m[i].size(); ++s)
        if (i != fi || s != fs) rest += z.zeta[i][s] * GaussRat(m[i][s]);
    z.zeta[fi][fs] = -rest / GaussRat(m[fi][fs]);
  }
  const LambdaVec lambda = zeta_to_lambda(z);

  for (int attempt = 0; attempt < std::max(1, opt.retries); ++attempt) {
    DoubledRep rep{d, std::vector<GMat>(sq.quiver.arrows.size()), std::vector<GMat>(sq.quiver.arrows.size())};
    // arms, from the tip inward: X* = R L with L a random left inverse of X, so X* X = R
    std::vector<GMat> annihilator;
    std::vector<std::size_t> first_arrow;
    bool singular = false;
    for (std::size_t i = 0; i < W.size() && !singular; ++i) {
      GMat R_next;  // X_{s+1} X*_{s+1}, absent at the tip
      for (std::size_t s = sq.arm_vertex[i].size(); s >= 1; --s) {
        const std::size_t a = sq.arm_arrow[i][s - 1];
        const std::size_t v = sq.vertex(i, s), u = sq.vertex(i, s - 1);
        GMat R = GMat::scalar(d[v], -lambda[v]);
        if (s < sq.arm_vertex[i].size()) R += R_next;
        GMat X, Y;
        for (int draw = 0; draw < 64; ++draw) {
          X = detail::draw_matrix(rng, d[u], d[v], opt.range);
          Y = detail::draw_matrix(rng, d[v], d[u], opt.range);
          if (rank(Y * X) == d[v]) break;  // implies X injective
        }
        if (rank(Y * X) != d[v]) {
          singular = true;
          break;
        }
        const GMat L = inverse(Y * X) * Y;
        rep.X[a] = X;
        rep.Xstar[a] = R * L;
        R_next = X * rep.Xstar[a];
        if (s == 1) {
          first_arrow.push_back(a);
          // rows of K span the left annihilator of X
          annihilator.push_back(kernel(X.transpose()).transpose());
        }
      }
    }
    if (singular) continue;

    // center: sum_i X_i (X*_i + W_i K_i) = lambda_0 Id, linear in the entries of the W_i
    GMat target = GMat::scalar(n, lambda[0]);
    for (auto a : first_arrow) target -= rep.X[a] * rep.Xstar[a];
    std::size_t unknowns = 0;
    for (std::size_t t = 0; t < first_arrow.size(); ++t) unknowns += rep.X[first_arrow[t]].cols() * annihilator[t].rows();
    GMat sys(n * n, unknowns), rhs(n * n, 1);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) rhs(r * n + c, 0) = target(r, c);
    std::size_t col = 0;
    for (std::size_t t = 0; t < first_arrow.size(); ++t) {
      const GMat& X = rep.X[first_arrow[t]];
      const GMat& K = annihilator[t];
      for (std::size_t p = 0; p < X.cols(); ++p)
        for (std::size_t q = 0; q < K.rows(); ++q, ++col)
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) sys(r * n + c, col) = X(r, p) * K(q, c);
    }
    auto sol = solve(sys, rhs);
    if (!sol) continue;
    // move off the particular solution along the kernel
    const GMat ker = kernel(sys);
    GMat wvec = *sol;
    for (std::size_t j = 0; j < ker.cols(); ++j) wvec += detail::draw(rng, opt.range) * ker.column(j);
    col = 0;
    for (std::size_t t = 0; t < first_arrow.size(); ++t) {
      const std::size_t a = first_arrow[t];
      const GMat& K = annihilator[t];
      GMat Wt(rep.X[a].cols(), K.rows());
      for (std::size_t p = 0; p < Wt.rows(); ++p)
        for (std::size_t q = 0; q < Wt.cols(); ++q) Wt(p, q) = wvec(col++, 0);
      rep.Xstar[a] += Wt * K;
    }
    if (!defect_is_zero(moment_defect(sq.quiver, rep, lambda))) continue;
    try {
      return rep_to_fuchs(sq, rep, lambda, z);
    } catch (const std::domain_error&) {
      continue;  // a composite arm map lost rank
    }
  }
  throw std::runtime_error("generation failed after " + std::to_string(std::max(1, opt.retries)) + " retries");
}

struct InstanceShape {
  WeightData weights;
  std::size_t rank = 0;
  std::vector<std::vector<std::size_t>> flag_dims;
};

/// Random shape with k <= max_k points (small Gaussian-integer positions), w_i <= max_w, n <= max_n.
inline InstanceShape random_shape(std::mt19937_64& rng, std::size_t max_k = 4, int max_w = 4, std::size_t max_n = 4) {
  std::uniform_int_distribution<std::size_t> kd(2, std::max<std::size_t>(2, max_k)), nd(1, std::max<std::size_t>(1, max_n));
  std::uniform_int_distribution<int> wd(1, std::max(1, max_w));
  std::uniform_int_distribution<long> coord(-3, 3);
  InstanceShape sh;
  const std::size_t k = kd(rng);
  sh.rank = nd(rng);
  std::vector<GaussRat> pts;
  while (pts.size() < k) {
    GaussRat p(Rational(coord(rng)), Rational(rng() % 3 == 0 ? coord(rng) : 0));
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  std::vector<int> ws;
  for (std::size_t i = 0; i < k; ++i) {
    ws.push_back(wd(rng));
    std::vector<std::size_t> dims;
    std::size_t prev = sh.rank;
    for (int s = 1; s < ws.back(); ++s) {
      prev = std::uniform_int_distribution<std::size_t>(0, prev)(rng);
      dims.push_back(prev);
    }
    sh.flag_dims.push_back(dims);
  }
  sh.weights = WeightData(pts, ws);
  return sh;
}

/// A random instance for `seed`: draws shapes until the generator succeeds on one.
inline FuchsianTuple generate_instance(std::uint64_t seed, std::size_t max_k = 4, int max_w = 4, std::size_t max_n = 4,
                                       int retries = 50) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    const InstanceShape sh = random_shape(rng, max_k, max_w, max_n);
    try {
      return random_instance(sh.weights, sh.rank, sh.flag_dims, rng(), GeneratorOptions{std::nullopt, 4, 3});
    } catch (const std::runtime_error&) {
    }
  }
  throw std::runtime_error("generation failed after " + std::to_string(retries) + " retries");
}

}  // namespace wpl
