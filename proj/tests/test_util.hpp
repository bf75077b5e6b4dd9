#pragma once

#include <cmath>
#include <random>

#include "twolayer/twolayer.hpp"

namespace twolayer::testing {

inline Parameters default_params() { return Parameters(9.8, 950.0, 1000.0); }

inline CellState cell(double h1, double u1, double h2, double u2, double b,
                      const Parameters& p) {
  return from_primitive(make_primitive(h1, u1, h2, u2, b, p), p);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Random wet, hyperbolic state (|u1-u2|^2 < g'(h1+h2) with margin).
inline PrimitiveState random_wet_state(std::mt19937_64& rng, const Parameters& p) {
  std::uniform_real_distribution<double> depth(0.05, 2.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> bath(-4.0, -2.5);
  const double h1 = depth(rng);
  const double h2 = depth(rng);
  const double limit = std::sqrt(p.reduced_g() * (h1 + h2));
  const double um = 0.5 * unit(rng);
  const double du = 0.9 * limit * unit(rng);
  return make_primitive(h1, um + 0.5 * du, h2, um - 0.5 * du, bath(rng), p);
}

}  // namespace twolayer::testing
