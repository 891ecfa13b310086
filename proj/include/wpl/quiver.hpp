#pragma once

#include "wpl/connection.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpl {

struct Arrow {
  std::size_t tail = 0;
  std::size_t head = 0;
  std::string name;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  std::size_t index_of(const std::string& label) const {
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (vertices[v] == label) return v;
    throw std::out_of_range("no vertex " + label);
  }

  void validate() const {
    for (const auto& a : arrows)
      if (a.tail >= vertices.size() || a.head >= vertices.size()) throw std::invalid_argument("arrow " + a.name + " has an invalid endpoint");
  }

  friend bool operator==(const Quiver&, const Quiver&) = default;
};

using DimVector = std::vector<std::size_t>;
/// One scalar per vertex, in the vertex order of the quiver.
using LambdaVec = std::vector<GaussRat>;

/// Representation of the doubled quiver: X[a] is d_h × d_t and Xstar[a] is d_t × d_h.
struct DoubledRep {
  DimVector dims;
  std::vector<GMat> X;
  std::vector<GMat> Xstar;

  void validate(const Quiver& Q) const {
    if (dims.size() != Q.vertices.size()) throw std::invalid_argument("one dimension per vertex required");
    if (X.size() != Q.arrows.size() || Xstar.size() != Q.arrows.size()) throw std::invalid_argument("one matrix pair per arrow required");
    for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
      const std::size_t dt = dims[Q.arrows[a].tail], dh = dims[Q.arrows[a].head];
      if (X[a].rows() != dh || X[a].cols() != dt || Xstar[a].rows() != dt || Xstar[a].cols() != dh)
        throw std::invalid_argument("matrices of arrow " + Q.arrows[a].name + " have the wrong shape");
    }
  }

  friend bool operator==(const DoubledRep&, const DoubledRep&) = default;
};

/// The star quiver of a weighted line: center "0" and arm vertices "[i,s]", 1 <= s < w_i,
/// with arrows a[i,s] : [i,s] -> [i,s-1] pointing at the center.
struct StarQuiver {
  Quiver quiver;
  std::vector<std::vector<std::size_t>> arm_vertex;  // [i][s-1]
  std::vector<std::vector<std::size_t>> arm_arrow;   // [i][s-1]

  std::size_t vertex(std::size_t i, std::size_t s) const { return s == 0 ? 0 : arm_vertex.at(i).at(s - 1); }
};

inline StarQuiver star_quiver(const WeightData& W) {
  StarQuiver sq;
  sq.quiver.vertices.push_back("0");
  for (std::size_t i = 0; i < W.size(); ++i) {
    sq.arm_vertex.emplace_back();
    sq.arm_arrow.emplace_back();
    for (int s = 1; s < W.weight(i); ++s) {
      const std::string tag = "[" + std::to_string(i) + "," + std::to_string(s) + "]";
      const std::size_t prev = sq.vertex(i, static_cast<std::size_t>(s - 1));
      sq.quiver.vertices.push_back(tag);
      sq.arm_vertex[i].push_back(sq.quiver.vertices.size() - 1);
      sq.quiver.arrows.push_back({sq.quiver.vertices.size() - 1, prev, "a" + tag});
      sq.arm_arrow[i].push_back(sq.quiver.arrows.size() - 1);
    }
  }
  return sq;
}

/// Dimension vector (n; flag dimensions) for the star quiver of W.
inline DimVector star_dims(const WeightData& W, std::size_t n, const std::vector<std::vector<std::size_t>>& flag_dims) {
  if (flag_dims.size() != W.size()) throw std::invalid_argument("one list of flag dimensions per marked point required");
  DimVector d{n};
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (static_cast<int>(flag_dims[i].size()) != W.weight(i) - 1)
      throw std::invalid_argument("point " + std::to_string(i) + " needs w_i - 1 flag dimensions");
    std::size_t prev = n;
    for (std::size_t s = 0; s < flag_dims[i].size(); ++s) {
      if (flag_dims[i][s] > prev)
        throw std::invalid_argument("flag dimensions of point " + std::to_string(i) + " are not weakly decreasing from n");
      prev = flag_dims[i][s];
      d.push_back(prev);
    }
  }
  return d;
}

/// lambda_0 = -sum_i zeta_{i1}; lambda_[i,s] = zeta_{is} - zeta_{i,s+1}.
inline LambdaVec zeta_to_lambda(const ZetaData& z) {
  LambdaVec l{GaussRat()};
  for (std::size_t i = 0; i < z.size(); ++i) {
    l[0] -= z.at(i, 1);
    for (int s = 1; s < z.weight(i); ++s) l.push_back(z.at(i, s) - z.at(i, s + 1));
  }
  return l;
}

/// mu_v - lambda_v Id with mu_v = sum_{h(a)=v} X_a X_a* - sum_{t(a)=v} X_a* X_a.
inline std::vector<GMat> moment_defect(const Quiver& Q, const DoubledRep& rep, const LambdaVec& lambda) {
  Q.validate();
  rep.validate(Q);
  if (lambda.size() != Q.vertices.size()) throw std::invalid_argument("one lambda per vertex required");
  std::vector<GMat> mu;
  for (std::size_t v = 0; v < Q.vertices.size(); ++v) mu.push_back(GMat::scalar(rep.dims[v], -lambda[v]));
  for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
    mu[Q.arrows[a].head] += rep.X[a] * rep.Xstar[a];
    mu[Q.arrows[a].tail] -= rep.Xstar[a] * rep.X[a];
  }
  return mu;
}

inline bool defect_is_zero(const std::vector<GMat>& defect) {
  for (const auto& m : defect)
    if (!m.is_zero()) return false;
  return true;
}

inline GaussRat trace_pairing(const LambdaVec& lambda, const DimVector& d) {
  if (lambda.size() != d.size()) throw std::invalid_argument("lambda and dimension vector differ in length");
  GaussRat t;
  for (std::size_t v = 0; v < d.size(); ++v) t += lambda[v] * GaussRat(static_cast<long>(d[v]));
  return t;
}

inline long tits_form(const Quiver& Q, const DimVector& d) {
  if (d.size() != Q.vertices.size()) throw std::invalid_argument("one dimension per vertex required");
  long q = 0;
  for (auto dv : d) q += static_cast<long>(dv * dv);
  for (const auto& a : Q.arrows) q -= static_cast<long>(d[a.tail] * d[a.head]);
  return q;
}

}  // namespace wpl
