#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "twolayer/core.hpp"
#include "twolayer/eigen.hpp"
#include "twolayer/errors.hpp"
#include "twolayer/swe1l.hpp"

namespace twolayer {

enum class DryConfig {
  FullyWet,
  WallLeftDry,
  WallRightDry,
  InundationLeftDry,
  InundationRightDry,
  BothDry,
};

inline const char* to_string(DryConfig c) {
  switch (c) {
    case DryConfig::FullyWet: return "FullyWet";
    case DryConfig::WallLeftDry: return "WallLeftDry";
    case DryConfig::WallRightDry: return "WallRightDry";
    case DryConfig::InundationLeftDry: return "InundationLeftDry";
    case DryConfig::InundationRightDry: return "InundationRightDry";
    case DryConfig::BothDry: return "BothDry";
  }
  return "?";
}

inline bool is_wall(DryConfig c) {
  return c == DryConfig::WallLeftDry || c == DryConfig::WallRightDry;
}

/// Bottom-layer dry-state type of an interface. A one-sided dry state is an
/// inundation when the wet internal surface stands above the dry bathymetry.
inline DryConfig classify(const PrimitiveState& qL, const PrimitiveState& qR,
                          const Parameters& p) {
  const bool dry_l = !is_wet(qL.h2, p);
  const bool dry_r = !is_wet(qR.h2, p);
  if (dry_l && dry_r) return DryConfig::BothDry;
  if (dry_r) {
    return qL.h2 + qL.b > qR.b ? DryConfig::InundationRightDry : DryConfig::WallRightDry;
  }
  if (dry_l) {
    return qR.h2 + qR.b > qL.b ? DryConfig::InundationLeftDry : DryConfig::WallLeftDry;
  }
  return DryConfig::FullyWet;
}

/// Mirror cell seen by the bottom layer at a wall: same depths, reversed
/// bottom-layer velocity, same bathymetry. The top layer is untouched.
inline PrimitiveState wall_ghost(const PrimitiveState& wet) {
  PrimitiveState ghost = wet;
  ghost.u2 = -wet.u2;
  return ghost;
}

namespace detail {

/// Bottom-layer rows of the jump for an explicit pair of states.
inline void bottom_layer_jump(const PrimitiveState& L, const PrimitiveState& R,
                              const Parameters& p, Vector4& delta) {
  const double g = p.g();
  const double h2_bar = 0.5 * (L.h2 + R.h2);
  const double d_eta2 = (R.h2 + R.b) - (L.h2 + L.b);
  delta[2] = p.rho2() * (R.hu2() - L.hu2());
  // [rho2 h2 u2^2 + g rho2 h2^2 / 2 + g rho1 h1 h2] - g rho1 h1_bar [h2] + g rho2 h2_bar [b]
  delta[3] = p.rho2() * (R.hu2() * R.u2 - L.hu2() * L.u2) + g * p.rho2() * h2_bar * d_eta2 +
             g * p.rho1() * h2_bar * (R.h1 - L.h1);
}

}  // namespace detail

/// Flux jump with fused bathymetry and coupling sources, density-weighted.
///
/// Takes the true states; for wall configurations the bottom-layer rows use
/// the mirrored wet state so no bottom-layer flux crosses the wall, while the
/// top layer sees the jump of the internal surface (bathymetry on the dry side).
inline Vector4 flux_jump(const PrimitiveState& qL, const PrimitiveState& qR, DryConfig cfg,
                         const Parameters& p) {
  const double g = p.g();
  Vector4 delta;
  const double h1_bar = 0.5 * (qL.h1 + qR.h1);
  // internal surface with a dry layer exposing the bathymetry; raw depths keep
  // sub-tolerance films consistent with the surface the top layer rests on
  const double d_eta2 = (qR.h2 + qR.b) - (qL.h2 + qL.b);
  delta[0] = p.rho1() * (qR.hu1() - qL.hu1());
  delta[1] = p.rho1() * (qR.hu1() * qR.u1 - qL.hu1() * qL.u1) +
             g * p.rho1() * h1_bar * ((qR.h1 - qL.h1) + d_eta2);

  switch (cfg) {
    case DryConfig::WallRightDry:
      detail::bottom_layer_jump(qL, wall_ghost(qL), p, delta);
      break;
    case DryConfig::WallLeftDry:
      detail::bottom_layer_jump(wall_ghost(qR), qR, p, delta);
      break;
    case DryConfig::BothDry:
      delta[2] = 0.0;
      delta[3] = 0.0;
      break;
    default:
      detail::bottom_layer_jump(qL, qR, p, delta);
      break;
  }
  return delta;
}

struct Projection {
  Vector4 beta = Vector4::Zero();
  std::array<Vector4, 4> fwaves{};
};

inline Vector4 to_depth_units(const Vector4& v, const Parameters& p) {
  return Vector4(v[0] / p.rho1(), v[1] / p.rho1(), v[2] / p.rho2(), v[3] / p.rho2());
}

inline Vector4 to_conserved_units(const Vector4& v, const Parameters& p) {
  return Vector4(v[0] * p.rho1(), v[1] * p.rho1(), v[2] * p.rho2(), v[3] * p.rho2());
}

inline constexpr double kMaxBasisCondition = 1.0e12;

/// 1-norm condition estimate and inverse of the eigenvector matrix.
inline std::pair<double, Matrix4> inverse_with_condition(const Matrix4& R) {
  bool invertible = false;
  Matrix4 inv;
  double det = 0.0;
  R.computeInverseAndDetWithCheck(inv, det, invertible, 0.0);
  if (!invertible || !inv.allFinite()) return {std::numeric_limits<double>::infinity(), inv};
  const double norm = R.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
  return {norm * inv_norm, inv};
}

/// Solves R beta = delta and forms the f-waves Z^p = beta_p R[:, p], in
/// density-weighted units.
inline Projection project(const EigenBasis& basis, const Vector4& delta, const Parameters& p) {
  const auto [cond, inv] = inverse_with_condition(basis.R);
  if (!(cond <= kMaxBasisCondition)) {
    std::ostringstream msg;
    msg << "eigenvector matrix condition estimate " << cond;
    throw SolverError(SolverErrorKind::NearSingularBasis, msg.str());
  }
  Projection out;
  out.beta = inv * to_depth_units(delta, p);
  for (int k = 0; k < 4; ++k)
    out.fwaves[k] = to_conserved_units(out.beta[k] * basis.R.col(k), p);
  return out;
}

/// Share of a wave assigned to the left cell; zero-speed waves split evenly.
inline double left_share(double speed) { return speed < 0.0 ? 1.0 : (speed > 0.0 ? 0.0 : 0.5); }

struct Fluctuations {
  Vector4 amdq = Vector4::Zero();
  Vector4 apdq = Vector4::Zero();
};

inline Fluctuations fluctuations(const std::array<Vector4, 4>& fwaves,
                                 const std::array<double, 4>& speeds) {
  Fluctuations f;
  for (int k = 0; k < 4; ++k) {
    const double wl = left_share(speeds[k]);
    f.amdq += wl * fwaves[k];
    f.apdq += (1.0 - wl) * fwaves[k];
  }
  return f;
}

struct RiemannSolution {
  DryConfig config = DryConfig::FullyWet;
  BasisSource source = BasisSource::Linearized;
  std::array<Vector4, 4> fwaves{};
  std::array<double, 4> speeds{};
  Vector4 amdq = Vector4::Zero();
  Vector4 apdq = Vector4::Zero();
  /// Flux-plus-source jump carried by the f-waves. For walls the bottom rows
  /// hold the wall-reflected jump seen by the wet cell.
  Vector4 delta = Vector4::Zero();

  double max_speed() const {
    double m = 0.0;
    for (double s : speeds) m = std::max(m, std::abs(s));
    return m;
  }
};

/// Per-side background depths for the static linearization.
struct StaticDepths {
  double h1L, h2L, h1R, h2R;
};

namespace detail {

inline EigenBasis wet_basis(EigenMethod method, const PrimitiveState& L, const PrimitiveState& R,
                            const std::optional<StaticDepths>& background, const Parameters& p) {
  switch (method) {
    case EigenMethod::VelocityDifference: return velocity_difference_basis(L, R, p);
    case EigenMethod::LinearizedStatic:
      if (background)
        return linearized_basis(background->h1L, background->h2L, background->h1R,
                                background->h2R, p);
      return linearized_basis(L.h1, L.h2, R.h1, R.h2, p);
    case EigenMethod::LinearizedDynamic: return linearized_basis(L.h1, L.h2, R.h1, R.h2, p);
    case EigenMethod::Direct: return direct_basis(average_state(L, R, p), p);
  }
  return linearized_basis(L.h1, L.h2, R.h1, R.h2, p);
}

/// Inundation basis: the wet-side families from the wet state, the family
/// moving into the dry cell carried at the inundation speed with the exact
/// eigenvector form evaluated at the wet state.
inline EigenBasis inundation_basis(const PrimitiveState& L, const PrimitiveState& R,
                                   DrySide side, const Parameters& p) {
  if (p.inundation_method == InundationMethod::SmallDepthFill) {
    const double fill = p.dry_tolerance();
    EigenBasis b = side == DrySide::RightDry ? linearized_basis(L.h1, L.h2, R.h1, fill, p)
                                             : linearized_basis(L.h1, fill, R.h1, R.h2, p);
    b.source = BasisSource::Inundation;
    return b;
  }
  EigenBasis basis;
  basis.source = BasisSource::Inundation;
  if (side == DrySide::RightDry) {
    const EigenBasis wet = linearized_basis(L.h1, L.h2, p);
    const EigenBasis dry = linearized_basis(R.h1, 0.0, p);
    const double s3 = inundation_speed(L, DrySide::RightDry, p);
    basis.speeds = {wet.speeds[0], wet.speeds[1], s3, dry.speeds[3]};
    basis.R.col(0) = wet.R.col(0);
    basis.R.col(1) = wet.R.col(1);
    basis.R.col(2) = eigenvector(s3, alpha_for_speed(s3, L, p));
    basis.R.col(3) = dry.R.col(3);
  } else {
    const EigenBasis wet = linearized_basis(R.h1, R.h2, p);
    const EigenBasis dry = linearized_basis(L.h1, 0.0, p);
    const double s2 = inundation_speed(R, DrySide::LeftDry, p);
    basis.speeds = {dry.speeds[0], s2, wet.speeds[2], wet.speeds[3]};
    basis.R.col(0) = dry.R.col(0);
    basis.R.col(1) = eigenvector(s2, alpha_for_speed(s2, R, p));
    basis.R.col(2) = wet.R.col(2);
    basis.R.col(3) = wet.R.col(3);
  }
  sort_by_speed(basis);
  return basis;
}

inline RiemannSolution from_single_layer(const SingleLayerSolution& s, int layer, double rho,
                                         DryConfig cfg) {
  RiemannSolution out;
  out.config = cfg;
  out.source = BasisSource::Linearized;
  const int row = layer == 1 ? 0 : 2;
  out.fwaves.fill(Vector4::Zero());
  out.fwaves[0][row] = rho * s.fwaves[0][0];
  out.fwaves[0][row + 1] = rho * s.fwaves[0][1];
  out.fwaves[3][row] = rho * s.fwaves[1][0];
  out.fwaves[3][row + 1] = rho * s.fwaves[1][1];
  out.speeds = {s.speeds[0], 0.0, 0.0, s.speeds[1]};
  out.amdq[row] = rho * s.amdq[0];
  out.amdq[row + 1] = rho * s.amdq[1];
  out.apdq[row] = rho * s.apdq[0];
  out.apdq[row + 1] = rho * s.apdq[1];
  out.delta[row] = rho * s.delta[0];
  out.delta[row + 1] = rho * s.delta[1];
  return out;
}

}  // namespace detail

/// Wall dry state: bottom-layer rows are reflected off the wet cell, the waves
/// entering the dry cell lose their bottom-layer content, and the mirrored mass
/// flux is corrected so the wet cell's bottom-layer mass change equals the
/// true flux jump (the wall passes no bottom-layer mass).
inline RiemannSolution solve_wall(const PrimitiveState& qL, const PrimitiveState& qR,
                                  DryConfig cfg, const Parameters& p) {
  const bool right_dry = cfg == DryConfig::WallRightDry;
  const PrimitiveState& wet = right_dry ? qL : qR;
  // current wet-side depths for every method: a frozen background may be dry
  // where a wave has since wetted the cell
  EigenBasis basis = linearized_basis(wet.h1, wet.h2, p);
  basis.source = BasisSource::Wall;

  Vector4 delta = flux_jump(qL, qR, cfg, p);
  // true bottom-layer mass flux jump: the dry cell carries no bottom flux
  const double true_mass_jump = right_dry ? -p.rho2() * wet.hu2() : p.rho2() * wet.hu2();

  const auto [cond, inv] = inverse_with_condition(basis.R);
  if (!(cond <= kMaxBasisCondition)) {
    throw SolverError(SolverErrorKind::NearSingularBasis, "wall eigenbasis is singular");
  }
  // wet-side bottom-mass fluctuation as a linear functional of delta (depth units)
  Vector4 c;
  for (int k = 0; k < 4; ++k) {
    const double share = right_dry ? left_share(basis.speeds[k]) : 1.0 - left_share(basis.speeds[k]);
    c[k] = share * basis.R(2, k);
  }
  const Vector4 gvec = inv.transpose() * c;
  Vector4 dh = to_depth_units(delta, p);
  if (std::abs(gvec[2]) > 1e-6) {
    const double target = true_mass_jump / p.rho2();
    dh[2] = (target - gvec[0] * dh[0] - gvec[1] * dh[1] - gvec[3] * dh[3]) / gvec[2];
  }

  RiemannSolution out;
  out.config = cfg;
  out.source = basis.source;
  out.speeds = basis.speeds;
  const Vector4 beta = inv * dh;
  for (int k = 0; k < 4; ++k) {
    Vector4 z = to_conserved_units(beta[k] * basis.R.col(k), p);
    const double wet_share =
        right_dry ? left_share(basis.speeds[k]) : 1.0 - left_share(basis.speeds[k]);
    z[2] *= wet_share;
    z[3] *= wet_share;
    out.fwaves[k] = z;
  }
  const Fluctuations f = fluctuations(out.fwaves, out.speeds);
  out.amdq = f.amdq;
  out.apdq = f.apdq;
  if (right_dry) {
    out.apdq[2] = 0.0;
    out.apdq[3] = 0.0;
  } else {
    out.amdq[2] = 0.0;
    out.amdq[3] = 0.0;
  }
  out.delta = out.amdq + out.apdq;
  return out;
}

/// Solves the two-layer Riemann problem between adjacent cells.
///
/// `background` supplies the frozen at-rest depths used by the static
/// linearization; without it the current depths are used.
inline RiemannSolution solve_interface(const CellState& left, const CellState& right,
                                       const Parameters& p,
                                       const std::optional<StaticDepths>& background = {}) {
  const PrimitiveState qL = to_primitive(left, p);
  const PrimitiveState qR = to_primitive(right, p);
  const DryConfig cfg = classify(qL, qR, p);

  const bool top_dry_l = !is_wet(qL.h1, p);
  const bool top_dry_r = !is_wet(qR.h1, p);

  if (cfg == DryConfig::BothDry) {
    // top layer alone over the internal surface
    const SingleLayerSide l{qL.h1, qL.hu1(), qL.b + qL.h2};
    const SingleLayerSide r{qR.h1, qR.hu1(), qR.b + qR.h2};
    return detail::from_single_layer(solve_single_layer(l, r, p.g(), p.dry_tolerance()), 1,
                                     p.rho1(), cfg);
  }
  if (top_dry_l && top_dry_r) {
    // bottom layer alone with a free surface
    const SingleLayerSide l{qL.h2, qL.hu2(), qL.b};
    const SingleLayerSide r{qR.h2, qR.hu2(), qR.b};
    return detail::from_single_layer(solve_single_layer(l, r, p.g(), p.dry_tolerance()), 2,
                                     p.rho2(), cfg);
  }
  if (top_dry_l || top_dry_r) {
    std::ostringstream msg;
    msg << "top layer dry on one side over a wet bottom layer (h1L=" << qL.h1
        << ", h1R=" << qR.h1 << ")";
    throw SolverError(SolverErrorKind::DegenerateTopLayer, msg.str());
  }

  if (is_wall(cfg)) return solve_wall(qL, qR, cfg, p);

  EigenBasis basis;
  if (cfg == DryConfig::FullyWet) {
    basis = detail::wet_basis(p.eigen_method, qL, qR, background, p);
  } else {
    basis = detail::inundation_basis(
        qL, qR, cfg == DryConfig::InundationRightDry ? DrySide::RightDry : DrySide::LeftDry, p);
  }

  const Vector4 delta = flux_jump(qL, qR, cfg, p);
  Projection proj;
  try {
    proj = project(basis, delta, p);
  } catch (const SolverError& e) {
    if (e.kind() != SolverErrorKind::NearSingularBasis || cfg != DryConfig::FullyWet ||
        p.eigen_method == EigenMethod::LinearizedDynamic) {
      throw;
    }
    basis = linearized_basis(qL.h1, qL.h2, qR.h1, qR.h2, p);
    proj = project(basis, delta, p);
  }

  RiemannSolution out;
  out.config = cfg;
  out.source = basis.source;
  out.speeds = basis.speeds;
  out.fwaves = proj.fwaves;
  const Fluctuations f = fluctuations(out.fwaves, out.speeds);
  out.amdq = f.amdq;
  out.apdq = f.apdq;
  out.delta = delta;

  // A receding wet layer can leave the inundation waves drawing bottom-layer
  // mass out of the dry cell, which has none to give: the wet side then sees
  // a wall instead.
  if (cfg == DryConfig::InundationRightDry && out.apdq[2] > 0.0)
    return solve_wall(qL, qR, DryConfig::WallRightDry, p);
  if (cfg == DryConfig::InundationLeftDry && out.amdq[2] < 0.0)
    return solve_wall(qL, qR, DryConfig::WallLeftDry, p);
  return out;
}

}  // namespace twolayer
