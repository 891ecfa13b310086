#pragma once

#include "wpl/gauss_rat.hpp"

#include <utility>
#include <vector>

namespace wpl {

/// Dense univariate polynomial over GaussRat, constant term first.
/// The coefficient vector never has a trailing zero; the zero polynomial is empty.
class Poly {
 public:
  Poly() = default;
  Poly(GaussRat c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) coeffs_.push_back(std::move(c));
  }
  Poly(long c) : Poly(GaussRat(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<GaussRat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// z - a
  static Poly linear(const GaussRat& root) { return Poly({-root, GaussRat(1)}); }
  static Poly monomial(const GaussRat& c, std::size_t degree) {
    std::vector<GaussRat> v(degree + 1);
    v[degree] = c;
    return Poly(std::move(v));
  }

  const std::vector<GaussRat>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  GaussRat coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : GaussRat(); }
  GaussRat lead() const { return coeffs_.empty() ? GaussRat() : coeffs_.back(); }
  bool is_constant() const { return coeffs_.size() <= 1; }

  GaussRat eval(const GaussRat& z) const {
    GaussRat acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc *= z;
      acc += *it;
    }
    return acc;
  }

  Poly derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<GaussRat> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * GaussRat(static_cast<long>(k));
    return Poly(std::move(d));
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussRat> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const GaussRat& c) const {
    if (c.is_zero()) return {};
    Poly r = *this;
    for (auto& x : r.coeffs_) x *= c;
    return r;
  }

  /// Euclidean division: returns (q, r) with a = q*b + r, deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<GaussRat> rem = a.coeffs_;
    std::vector<GaussRat> q(a.coeffs_.size() - b.coeffs_.size() + 1);
    const GaussRat inv_lead = b.lead().inverse();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      const GaussRat c = rem[k + b.degree()] * inv_lead;
      q[k] = c;
      if (c.is_zero()) continue;
      for (int j = 0; j <= b.degree(); ++j) rem[k + j] -= c * b.coeffs_[j];
    }
    rem.resize(b.coeffs_.size() - 1);
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

  /// Synthetic division by (z - root); returns the quotient, drops the remainder.
  Poly deflate(const GaussRat& root) const {
    if (coeffs_.size() <= 1) return {};
    std::vector<GaussRat> q(coeffs_.size() - 1);
    GaussRat carry;
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
      carry = coeffs_[k] + carry * root;
      q[k - 1] = carry;
    }
    return Poly(std::move(q));
  }

  Poly monic() const { return is_zero() ? Poly() : scaled(lead().inverse()); }

  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  std::string str(const char* var = "z") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      if (coeffs_[k].is_zero()) continue;
      std::string c = coeffs_[k].is_real() ? coeffs_[k].str() : "(" + coeffs_[k].str() + ")";
      if (!out.empty()) out += " + ";
      if (k == 0) {
        out += c;
      } else {
        if (!coeffs_[k].is_one()) out += c + "*";
        out += var;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<GaussRat> coeffs_;
};

}  // namespace wpl
