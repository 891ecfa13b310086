#pragma once

#include "wpl/rat_mat.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpl {

/// Marked points a_1..a_k on the projective line with weights w_1..w_k.
///
/// Chart i is X_i = P^1 minus {a_j : j != i}; it contains a_i and infinity.
/// Its coordinate ring A_i consists of the rational functions with poles only
/// at the other marked points and regular at infinity. The uniformizer at a_i
/// is x_i = (z - a_i) / (z - a_{next(i)}), a generator of the maximal ideal of
/// a_i in A_i. Overlaps X_i ∩ X_j (i != j) miss every marked point.
struct WeightData {
  std::vector<GaussRat> points;
  std::vector<int> weights;

  WeightData() = default;
  WeightData(std::vector<GaussRat> pts, std::vector<int> ws) : points(std::move(pts)), weights(std::move(ws)) {
    validate();
  }

  std::size_t size() const { return points.size(); }
  int weight(std::size_t i) const { return weights.at(i); }
  const GaussRat& point(std::size_t i) const { return points.at(i); }
  std::size_t next(std::size_t i) const { return (i + 1) % points.size(); }

  void validate() const {
    if (points.size() != weights.size())
      throw std::invalid_argument("points and weights differ in length");
    if (points.size() < 2) throw std::invalid_argument("need at least two marked points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] < 1) throw std::invalid_argument("weight must be >= 1");
      for (std::size_t j = 0; j < i; ++j)
        if (points[i] == points[j]) throw std::invalid_argument("marked points must be distinct");
    }
  }

  std::vector<GaussRat> others(std::size_t i) const {
    std::vector<GaussRat> o;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i) o.push_back(points[j]);
    return o;
  }

  friend bool operator==(const WeightData& a, const WeightData& b) {
    return a.points == b.points && a.weights == b.weights;
  }
};

/// Geometry of the chart cover: uniformizers, log frames and their transition factors.
class Charts {
 public:
  explicit Charts(const WeightData& w) : w_(w) {}

  const WeightData& weights() const { return w_; }
  std::span<const GaussRat> roots() const { return w_.points; }

  /// x_i
  RatFun uniformizer(std::size_t i) const {
    return RatFun(Poly::linear(w_.point(i)), RatFun::Denominator{{w_.point(w_.next(i)), 1}});
  }

  /// lambda_i with dx_i / x_i = lambda_i dz.
  RatFun log_frame(std::size_t i) const {
    const auto& a = w_.point(i);
    const auto& b = w_.point(w_.next(i));
    return RatFun(Poly(a - b), RatFun::Denominator{{a, 1}, {b, 1}});
  }

  /// rho_ij: the coefficient of dx_j/x_j in the frame dx_i/x_i.
  RatFun frame_change(std::size_t i, std::size_t j) const {
    if (i == j) return RatFun(1);
    return log_frame(j).divided_by(log_frame(i), w_.points);
  }

  /// d/dx_i
  RatFun d_dx(std::size_t i, const RatFun& f) const {
    const auto& a = w_.point(i);
    const auto& b = w_.point(w_.next(i));
    // dz/dx_i = (z - b)^2 / (a - b)
    const RatFun dz_dx(Poly::linear(b) * Poly::linear(b) * Poly((a - b).inverse()));
    return f.derivative() * dz_dx;
  }
  RatMat d_dx(std::size_t i, const RatMat& m) const {
    return m.map([this, i](const RatFun& f) { return d_dx(i, f); });
  }

  /// x_i d/dx_i
  RatFun log_derivation(std::size_t i, const RatFun& f) const {
    return f.derivative().divided_by(log_frame(i), w_.points);
  }
  RatMat log_derivation(std::size_t i, const RatMat& m) const {
    return m.map([this, i](const RatFun& f) { return log_derivation(i, f); });
  }

  bool in_chart(std::size_t i, const RatFun& f) const {
    if (f.is_zero()) return true;
    if (f.order_at_infinity() < 0) return false;
    for (const auto& [r, m] : f.den())
      if (r == w_.point(i) || !is_marked(r)) return false;
    return true;
  }
  bool in_chart(std::size_t i, const RatMat& m) const {
    return std::all_of(m.data().begin(), m.data().end(), [&](const RatFun& f) { return in_chart(i, f); });
  }

  bool in_overlap(const RatFun& f) const {
    if (f.is_zero()) return true;
    if (f.order_at_infinity() < 0) return false;
    for (const auto& [r, m] : f.den())
      if (!is_marked(r)) return false;
    return true;
  }
  bool in_overlap(const RatMat& m) const {
    return std::all_of(m.data().begin(), m.data().end(), [&](const RatFun& f) { return in_overlap(f); });
  }

  /// Units of the overlap ring: zeros and poles only at marked points, none at infinity.
  bool is_overlap_unit(const RatFun& f) const {
    if (f.is_zero() || f.order_at_infinity() != 0 || !in_overlap(f)) return false;
    try {
      (void)f.inverse(w_.points);
    } catch (const NotSupported&) {
      return false;
    }
    return true;
  }

  /// A square matrix over the overlap ring whose determinant is an overlap unit.
  bool is_overlap_invertible(const RatMat& m) const {
    if (!m.is_square() || !in_overlap(m)) return false;
    try {
      return is_overlap_unit(det(m, w_.points));
    } catch (const NotSupported&) {
      return false;
    }
  }

  bool is_marked(const GaussRat& r) const {
    return std::find(w_.points.begin(), w_.points.end(), r) != w_.points.end();
  }

 private:
  WeightData w_;
};

}  // namespace wpl
