#pragma once

#include "wpl/poly.hpp"

#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wpl {

/// Thrown when an operation needs a factorisation over a root set that does not exist.
class NotSupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rational function num(z) / prod (z - r)^m with the denominator kept factored.
///
/// Invariants: the numerator has no root in common with the denominator, every
/// multiplicity is positive, and the zero function has an empty denominator.
/// All the rings we compute in (coordinate rings of the charts and of their
/// overlaps) only ever need denominators supported on the marked points, so a
/// root multiset is enough.
class RatFun {
 public:
  using Denominator = std::map<GaussRat, int, std::less<>>;

  RatFun() = default;
  RatFun(Poly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)
  RatFun(GaussRat c) : num_(std::move(c)) {}  // NOLINT(google-explicit-constructor)
  RatFun(long c) : num_(c) {}                 // NOLINT(google-explicit-constructor)
  RatFun(Poly num, Denominator den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  /// The coordinate z.
  static RatFun z() { return RatFun(Poly({GaussRat(0), GaussRat(1)})); }
  /// 1 / (z - a)^m
  static RatFun pole(const GaussRat& a, int m = 1) { return RatFun(Poly(1), Denominator{{a, m}}); }

  const Poly& num() const { return num_; }
  const Denominator& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  GaussRat constant() const { return num_.coeff(0); }

  int den_degree() const {
    int d = 0;
    for (const auto& [r, m] : den_) d += m;
    return d;
  }

  Poly den_poly() const {
    Poly p(1);
    for (const auto& [r, m] : den_)
      for (int k = 0; k < m; ++k) p *= Poly::linear(r);
    return p;
  }

  /// Order of vanishing at a finite point (negative for a pole). The zero
  /// function has order INT_MAX by convention.
  int order_at(const GaussRat& a) const {
    if (is_zero()) return std::numeric_limits<int>::max();
    auto it = den_.find(a);
    if (it != den_.end()) return -it->second;
    int k = 0;
    Poly p = num_;
    while (p.eval(a).is_zero()) {
      p = p.deflate(a);
      ++k;
    }
    return k;
  }
  int pole_order_at(const GaussRat& a) const {
    auto it = den_.find(a);
    return it == den_.end() ? 0 : it->second;
  }
  /// Order at infinity: deg(den) - deg(num). Non-negative iff regular at infinity.
  int order_at_infinity() const {
    if (is_zero()) return std::numeric_limits<int>::max();
    return den_degree() - num_.degree();
  }

  GaussRat eval(const GaussRat& a) const {
    if (is_zero()) return {};
    if (den_.count(a)) throw std::domain_error("pole at " + a.str());
    GaussRat d(1);
    for (const auto& [r, m] : den_)
      for (int k = 0; k < m; ++k) d *= (a - r);
    return num_.eval(a) / d;
  }

  RatFun operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFun operator+(const RatFun& a, const RatFun& b) { return combine(a, b, false); }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return combine(a, b, true); }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }

  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.den_.empty() && b.num_.is_constant()) return a.scaled(b.num_.coeff(0));
    if (a.den_.empty() && a.num_.is_constant()) return b.scaled(a.num_.coeff(0));
    Denominator d = a.den_;
    for (const auto& [r, m] : b.den_) d[r] += m;
    return RatFun(a.num_ * b.num_, std::move(d));
  }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

  RatFun scaled(const GaussRat& c) const {
    if (c.is_zero()) return {};
    RatFun r = *this;
    r.num_ = r.num_.scaled(c);
    return r;
  }

  /// Divide by a GaussRat scalar.
  RatFun operator/(const GaussRat& c) const { return scaled(c.inverse()); }

  /// Multiplicative inverse, provided every root of the numerator lies in `roots`.
  RatFun inverse(std::span<const GaussRat> roots) const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    Poly rest = num_;
    Denominator d;
    for (const auto& r : roots) {
      while (rest.degree() > 0 && rest.eval(r).is_zero()) {
        rest = rest.deflate(r);
        d[r] += 1;
      }
    }
    if (rest.degree() > 0)
      throw NotSupported("numerator " + num_.str() + " does not split over the given points");
    return RatFun(den_poly().scaled(rest.coeff(0).inverse()), std::move(d));
  }

  RatFun divided_by(const RatFun& g, std::span<const GaussRat> roots) const {
    return *this * g.inverse(roots);
  }

  /// Formal d/dz.
  RatFun derivative() const {
    if (is_zero() || den_.empty()) return RatFun(num_.derivative());
    // (N/D)' = (N' D - N D') / D^2 with D = prod (z-r)^m, D'/D = sum m/(z-r).
    // Write N/D * sum m/(z-r) over the common denominator D * prod (z-r).
    Poly prod_all(1);
    for (const auto& [r, m] : den_) prod_all *= Poly::linear(r);
    Poly term = num_.derivative() * prod_all;
    for (const auto& [r, m] : den_) {
      Poly others(1);
      for (const auto& [s, k] : den_)
        if (!(s == r)) others *= Poly::linear(s);
      term -= (num_ * others).scaled(GaussRat(static_cast<long>(m)));
    }
    Denominator d = den_;
    for (auto& [r, m] : d) m += 1;
    return RatFun(std::move(term), std::move(d));
  }

  /// Coefficient of 1/(z-a) in the partial-fraction expansion; requires pole order <= 1.
  GaussRat residue_at(const GaussRat& a) const {
    const int m = pole_order_at(a);
    if (m == 0) return {};
    if (m > 1) throw std::domain_error("higher-order pole at " + a.str());
    RatFun rest = *this;
    rest.den_.erase(a);
    // rest has no pole at a (no other factor equals a)
    GaussRat d(1);
    for (const auto& [r, k] : rest.den_)
      for (int j = 0; j < k; ++j) d *= (a - r);
    return num_.eval(a) / d;
  }

  /// Residue at infinity of f(z) dz: minus the coefficient of 1/z in the expansion at infinity.
  GaussRat residue_at_infinity() const {
    if (is_zero()) return {};
    // f = q + r/D with deg r < deg D; the 1/z coefficient of r/D is lead(r)/lead(D) when deg r = deg D - 1.
    const Poly d = den_poly();
    auto [q, r] = divmod(num_, d);
    if (r.degree() != d.degree() - 1) return {};
    return -(r.lead() / d.lead());
  }

  bool regular_at(const GaussRat& a) const { return den_.count(a) == 0; }

  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const {
    if (den_.empty()) return num_.str();
    std::string out = "(" + num_.str() + ")/(";
    bool first = true;
    for (const auto& [r, m] : den_) {
      if (!first) out += "*";
      first = false;
      out += "(z-" + (r.is_real() ? r.str() : "(" + r.str() + ")") + ")";
      if (m > 1) out += "^" + std::to_string(m);
    }
    return out + ")";
  }

 private:
  static RatFun combine(const RatFun& a, const RatFun& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    if (a.den_ == b.den_) {
      RatFun r;
      r.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      r.den_ = a.den_;
      r.normalize();
      return r;
    }
    Denominator d = a.den_;
    for (const auto& [r, m] : b.den_) d[r] = std::max(d[r], m);
    auto lift = [&d](const RatFun& f) {
      Poly p = f.num_;
      for (const auto& [r, m] : d) {
        const int have = f.pole_order_at(r);
        for (int k = have; k < m; ++k) p *= Poly::linear(r);
      }
      return p;
    };
    Poly n = subtract ? lift(a) - lift(b) : lift(a) + lift(b);
    return RatFun(std::move(n), std::move(d));
  }

  void normalize() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0 && num_.degree() > 0 && num_.eval(it->first).is_zero()) {
        num_ = num_.deflate(it->first);
        --it->second;
      }
      if (it->second <= 0)
        it = den_.erase(it);
      else
        ++it;
    }
  }

  Poly num_;
  Denominator den_;
};

/// Field element of Q(i)(z) with an expanded monic denominator. Used only as
/// the scratch field for elimination; results are converted back to RatFun.
class Frac {
 public:
  Frac() : den_(1) {}
  Frac(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  Frac(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }
  explicit Frac(const RatFun& f) : num_(f.num()), den_(f.den_poly()) {}

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Frac operator-() const { return {-num_, den_}; }

  friend Frac operator+(const Frac& a, const Frac& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Frac operator-(const Frac& a, const Frac& b) {
    if (a.den_ == b.den_) return {a.num_ - b.num_, a.den_};
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Frac operator*(const Frac& a, const Frac& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend Frac operator/(const Frac& a, const Frac& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }

  /// Back to factored form; throws NotSupported if the denominator does not split over `roots`.
  RatFun to_ratfun(std::span<const GaussRat> roots) const {
    if (num_.is_zero()) return {};
    Poly rest = den_;
    RatFun::Denominator d;
    for (const auto& r : roots) {
      while (rest.degree() > 0 && rest.eval(r).is_zero()) {
        rest = rest.deflate(r);
        d[r] += 1;
      }
    }
    if (rest.degree() > 0)
      throw NotSupported("denominator " + den_.str() + " does not split over the given points");
    return RatFun(num_.scaled(rest.coeff(0).inverse()), std::move(d));
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    if (den_.degree() > 0 && num_.degree() > 0) {
      Poly g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
      }
    }
    const GaussRat l = den_.lead();
    if (!l.is_one()) {
      const GaussRat inv = l.inverse();
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly num_;
  Poly den_;
};

}  // namespace wpl
