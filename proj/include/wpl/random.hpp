#pragma once

// Seeded random instances for property checks.

#include "wpl/connection.hpp"

#include <algorithm>
#include <random>

namespace wpl::gen {

/// Small random Gaussian rationals; imaginary parts appear about a third of the time.
inline GaussRat random_scalar(std::mt19937_64& rng, long range = 5) {
  std::uniform_int_distribution<long> num(-range, range), den(1, 4), coin(0, 2);
  GaussRat re(num(rng), den(rng));
  if (coin(rng) == 0) return {re.re(), Rational(num(rng), den(rng))};
  return re;
}

inline Poly random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<GaussRat> c(deg(rng) + 1);
  for (auto& x : c) x = random_scalar(rng, 3);
  return Poly(std::move(c));
}

/// Random element of Q(i)[z, 1/(z-r) : r in roots].
inline RatFun random_ratfun(std::mt19937_64& rng, const std::vector<GaussRat>& roots, int max_degree = 2) {
  std::uniform_int_distribution<int> mult(0, 2);
  RatFun::Denominator d;
  for (const auto& r : roots)
    if (int m = mult(rng)) d[r] = m;
  return RatFun(random_poly(rng, max_degree), std::move(d));
}

/// k marked points among small Gaussian integers, weights in [1, max_w].
inline WeightData random_weights(std::mt19937_64& rng, std::size_t max_k = 4, int max_w = 4) {
  const std::size_t k = 2 + rng() % (max_k - 1);
  std::vector<GaussRat> pts;
  while (pts.size() < k) {
    GaussRat p = random_scalar(rng, 3);
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  std::vector<int> ws;
  for (std::size_t i = 0; i < k; ++i) ws.push_back(1 + static_cast<int>(rng() % max_w));
  return {pts, ws};
}

inline GMat random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    GMat m(n, n);
    for (auto& e : m.data()) e = GaussRat(static_cast<long>(rng() % 5) - 2);
    if (rank(m) == n) return m;
  }
}

/// Random flag of length w: layer s is spanned by the last d_s columns of a random basis.
inline Flag random_flag(std::mt19937_64& rng, std::size_t n, int w) {
  const GMat b = random_invertible(rng, n);
  std::vector<std::size_t> d(w + 1);
  d[0] = n;
  d[w] = 0;
  for (int s = 1; s < w; ++s) d[s] = rng() % (d[s - 1] + 1);
  std::vector<GMat> layers;
  for (int s = 0; s <= w; ++s) layers.push_back(b.block(0, n - d[s], n, d[s]));
  return {n, std::move(layers)};
}

inline std::vector<Flag> random_flags(std::mt19937_64& rng, std::size_t n, const WeightData& W) {
  std::vector<Flag> f;
  for (std::size_t i = 0; i < W.size(); ++i) f.push_back(random_flag(rng, n, W.weight(i)));
  return f;
}

/// Random sheaf with nontrivial patching: a parabolic sheaf shifted by small integers.
inline PatchedSheaf random_sheaf(std::mt19937_64& rng, std::size_t max_n = 4, std::size_t max_k = 4, int max_w = 4) {
  const WeightData W = random_weights(rng, max_k, max_w);
  const std::size_t n = 1 + rng() % max_n;
  PatchedSheaf S = parabolic_to_sheaf(n, random_flags(rng, n, W), W);
  std::vector<long> r;
  for (std::size_t i = 0; i < W.size(); ++i) r.push_back(static_cast<long>(rng() % 5) - 2);
  return shift_sheaf(S, r);
}

/// Random zeta of the right shape; normalized when asked.
inline ZetaData random_zeta(std::mt19937_64& rng, const WeightData& W, bool normalized) {
  ZetaData z{W.points, {}};
  const GaussRat common = random_scalar(rng, 3);
  for (std::size_t i = 0; i < W.size(); ++i) {
    std::vector<GaussRat> row;
    for (int s = 0; s < W.weight(i); ++s) row.push_back(random_scalar(rng, 3));
    if (normalized) row[0] = common;
    z.zeta.push_back(row);
  }
  return z;
}

}  // namespace wpl::gen
