#pragma once

#include "wpl/matrix.hpp"
#include "wpl/report.hpp"

#include <stdexcept>
#include <vector>

namespace wpl {

/// Descending flag C^n = V_0 ⊇ V_1 ⊇ ... ⊇ V_w = 0 in one fibre.
/// Each subspace is stored as a basis matrix (n × dim, columns).
struct Flag {
  std::size_t ambient = 0;
  std::vector<GMat> subspaces;

  Flag() = default;
  Flag(std::size_t n, std::vector<GMat> layers) : ambient(n), subspaces(std::move(layers)) {}

  /// Flag from its interior layers V_1..V_{w-1}; V_0 and V_w are implied.
  static Flag from_interior(std::size_t n, const std::vector<GMat>& interior) {
    std::vector<GMat> layers;
    layers.push_back(GMat::identity(n));
    for (const auto& l : interior) layers.push_back(l);
    layers.emplace_back(n, 0);
    return {n, std::move(layers)};
  }

  std::size_t length() const { return subspaces.empty() ? 0 : subspaces.size() - 1; }

  std::size_t dim(std::size_t s) const { return rank(subspaces.at(s)); }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (std::size_t s = 0; s < subspaces.size(); ++s) d.push_back(dim(s));
    return d;
  }

  std::vector<GMat> interior() const {
    if (subspaces.size() < 2) return {};
    return {subspaces.begin() + 1, subspaces.end() - 1};
  }

  Report check() const {
    Report r;
    if (subspaces.empty()) {
      r.fail("flag has no layers");
      return r;
    }
    for (std::size_t s = 0; s < subspaces.size(); ++s)
      if (subspaces[s].rows() != ambient) r.fail("layer " + std::to_string(s) + " has wrong ambient dimension");
    if (!r.ok()) return r;
    if (dim(0) != ambient) r.fail("layer 0 is not the whole fibre");
    if (dim(subspaces.size() - 1) != 0) r.fail("last layer is not zero");
    for (std::size_t s = 1; s < subspaces.size(); ++s)
      if (!span_contained(subspaces[s], subspaces[s - 1]))
        r.fail("layer " + std::to_string(s) + " not contained in layer " + std::to_string(s - 1));
    return r;
  }

  /// Equality as subspaces, layer by layer.
  bool same_subspaces(const Flag& o) const {
    if (ambient != o.ambient || subspaces.size() != o.subspaces.size()) return false;
    for (std::size_t s = 0; s < subspaces.size(); ++s)
      if (!span_equal(subspaces[s], o.subspaces[s])) return false;
    return true;
  }
};

}  // namespace wpl
