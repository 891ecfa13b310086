#pragma once

#include "wpl/connection.hpp"

namespace wpl::examples {

inline GaussRat q(long num, long den = 1) { return GaussRat(num, den); }

inline GMat column(std::size_t n, std::size_t j) {
  GMat v(n, 1);
  v(j, 0) = GaussRat(1);
  return v;
}

/// The worked rank-2 instance on (0, 1, -1) with weights (2, 2, 2).
struct WorkedInstance {
  WeightData W{{q(0), q(1), q(-1)}, {2, 2, 2}};
  FuchsianConnection F{W.points,
                       {GMat::diagonal({q(1, 2), q(0)}), GMat::diagonal({q(0), q(1, 2)}), GMat::scalar(2, q(-1, 2))}};
  std::vector<Flag> flags{Flag::from_interior(2, {column(2, 1)}), Flag::from_interior(2, {column(2, 0)}),
                          Flag::from_interior(2, {GMat(2, 0)})};
  ZetaData zeta{W.points, {{q(1, 2), q(0)}, {q(1, 2), q(0)}, {q(-1, 2), q(-1, 2)}}};
};

}  // namespace wpl::examples
