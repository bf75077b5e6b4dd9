#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace twolayer {

using Vec2 = std::array<double, 2>;

/// f-wave solution of a single-layer interface problem in (h, hu) units.
struct SingleLayerSolution {
  std::array<Vec2, 2> fwaves{};
  std::array<double, 2> speeds{};
  Vec2 amdq{};
  Vec2 apdq{};
  /// Flux-plus-source jump carried by the waves. Equals the physical jump
  /// except at a wall, where the waves entering the dry side are dropped.
  Vec2 delta{};
  bool wall_left = false;
  bool wall_right = false;
};

struct SingleLayerSide {
  double h = 0.0;
  double hu = 0.0;
  double b = 0.0;
};

/// Two-wave f-wave solver with Roe-averaged speeds, Einfeldt limiting and
/// wall / inundation treatment of dry cells.
inline SingleLayerSolution solve_single_layer(SingleLayerSide left, SingleLayerSide right,
                                              double g, double dry_tolerance) {
  SingleLayerSolution sol;
  const bool dry_l = left.h < dry_tolerance;
  const bool dry_r = right.h < dry_tolerance;
  if (dry_l && dry_r) return sol;

  double uL = dry_l ? 0.0 : left.hu / left.h;
  double uR = dry_r ? 0.0 : right.hu / right.h;
  if (dry_l) left.hu = 0.0;
  if (dry_r) right.hu = 0.0;

  if (dry_r && !(left.h + left.b > right.b)) {
    sol.wall_right = true;
    right = {left.h, -left.hu, left.b};
    uR = -uL;
  } else if (dry_l && !(right.h + right.b > left.b)) {
    sol.wall_left = true;
    left = {right.h, -right.hu, right.b};
    uL = -uR;
  }

  const double hL = std::max(left.h, 0.0);
  const double hR = std::max(right.h, 0.0);
  const double sqL = std::sqrt(hL);
  const double sqR = std::sqrt(hR);
  const double u_roe = (sqL * uL + sqR * uR) / (sqL + sqR);
  const double h_bar = 0.5 * (hL + hR);
  const double c_roe = std::sqrt(g * h_bar);

  double s1 = std::min(u_roe - c_roe, uL - std::sqrt(g * hL));
  double s2 = std::max(u_roe + c_roe, uR + std::sqrt(g * hR));
  if (dry_r && !sol.wall_right) s2 = uL + 2.0 * std::sqrt(g * hL);
  if (dry_l && !sol.wall_left) s1 = uR - 2.0 * std::sqrt(g * hR);

  // [hu^2] + 1/2 g [h^2] + g h_bar [b] = [hu^2] + g h_bar ([h] + [b])
  const double d1 = right.hu - left.hu;
  const double d2 = (right.hu * uR - left.hu * uL) +
                    g * h_bar * ((right.h - left.h) + (right.b - left.b));

  const double beta1 = (s2 * d1 - d2) / (s2 - s1);
  const double beta2 = (d2 - s1 * d1) / (s2 - s1);
  sol.speeds = {s1, s2};
  sol.fwaves[0] = {beta1, beta1 * s1};
  sol.fwaves[1] = {beta2, beta2 * s2};

  if (sol.wall_right) {
    for (int p = 0; p < 2; ++p)
      if (sol.speeds[p] > 0.0) sol.fwaves[p] = {0.0, 0.0};
  } else if (sol.wall_left) {
    for (int p = 0; p < 2; ++p)
      if (sol.speeds[p] < 0.0) sol.fwaves[p] = {0.0, 0.0};
  }

  for (int p = 0; p < 2; ++p) {
    const double s = sol.speeds[p];
    const double wl = s < 0.0 ? 1.0 : (s > 0.0 ? 0.0 : 0.5);
    for (int k = 0; k < 2; ++k) {
      sol.amdq[k] += wl * sol.fwaves[p][k];
      sol.apdq[k] += (1.0 - wl) * sol.fwaves[p][k];
      sol.delta[k] += sol.fwaves[p][k];
    }
  }
  return sol;
}

}  // namespace twolayer
