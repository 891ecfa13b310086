#pragma once

#include "wpl/matrix.hpp"
#include "wpl/rat_fun.hpp"

#include <span>

namespace wpl {

using RatMat = Matrix<RatFun>;

inline RatMat lift(const GMat& m) {
  return m.map([](const GaussRat& x) { return RatFun(x); });
}

inline GMat eval_at(const RatMat& m, const GaussRat& a) {
  return m.map([&a](const RatFun& f) { return f.eval(a); });
}

inline RatMat derivative(const RatMat& m) {
  return m.map([](const RatFun& f) { return f.derivative(); });
}

inline RatMat scale(const RatFun& s, const RatMat& m) {
  return m.map([&s](const RatFun& f) { return s * f; });
}

inline Matrix<Frac> to_frac(const RatMat& m) {
  return m.map([](const RatFun& f) { return Frac(f); });
}

inline RatMat from_frac(const Matrix<Frac>& m, std::span<const GaussRat> roots) {
  return m.map([roots](const Frac& f) { return f.to_ratfun(roots); });
}

/// Determinant as a rational function. Throws NotSupported if its
/// denominator does not split over `roots` (never happens when the entries'
/// denominators already do).
inline RatFun det(const RatMat& m, std::span<const GaussRat> roots) {
  return det(to_frac(m)).to_ratfun(roots);
}

/// Rank over the fraction field Q(i)(z).
inline std::size_t rank(const RatMat& m) { return rank(to_frac(m)); }

/// Inverse over the fraction field, converted back to factored form.
inline RatMat inverse(const RatMat& m, std::span<const GaussRat> roots) {
  return from_frac(inverse(to_frac(m)), roots);
}

/// Kernel basis over the fraction field; columns are cleared of denominators
/// so the basis is polynomial.
inline RatMat kernel(const RatMat& m) {
  const Matrix<Frac> k = kernel(to_frac(m));
  RatMat out(k.rows(), k.cols());
  for (std::size_t c = 0; c < k.cols(); ++c) {
    Poly common(1);
    for (std::size_t r = 0; r < k.rows(); ++r) common = divmod(common * k(r, c).den(), gcd(common, k(r, c).den())).first;
    for (std::size_t r = 0; r < k.rows(); ++r)
      out(r, c) = RatFun(k(r, c).num() * divmod(common, k(r, c).den()).first);
  }
  return out;
}

/// Column span of M evaluated at z = a: a basis of the image of the fibre map.
inline GMat mat_image_mod_point(const RatMat& m, const GaussRat& a) {
  for (const auto& f : m.data())
    if (!f.regular_at(a)) throw std::domain_error("matrix entry has a pole at " + a.str());
  return column_basis(eval_at(m, a));
}

}  // namespace wpl
