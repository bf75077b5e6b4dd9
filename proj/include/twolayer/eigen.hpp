#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "twolayer/core.hpp"
#include "twolayer/errors.hpp"
#include "twolayer/quartic.hpp"

namespace twolayer {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

enum class BasisSource {
  VelocityDifference,
  Linearized,
  Direct,
  Inundation,
  Wall,
};

/// Wave speeds and right eigenvectors at one interface.
///
/// Columns are ordered by speed: external-left, internal-left, internal-right,
/// external-right. Column p is [1, s_p, alpha_p, s_p alpha_p] in depth /
/// discharge variables (h1, h1 u1, h2, h2 u2); alpha_p is the bottom-layer
/// depth perturbation per unit top-layer perturbation.
struct EigenBasis {
  std::array<double, 4> speeds{};
  Matrix4 R = Matrix4::Zero();
  BasisSource source = BasisSource::Linearized;

  double alpha(int p) const { return R(2, p); }
};

inline Vector4 eigenvector(double speed, double alpha) {
  return Vector4(1.0, speed, alpha, speed * alpha);
}

/// Sorts columns so speeds ascend; stable so equal speeds keep family order.
inline void sort_by_speed(EigenBasis& basis) {
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return basis.speeds[a] < basis.speeds[b]; });
  EigenBasis sorted = basis;
  for (int p = 0; p < 4; ++p) {
    sorted.speeds[p] = basis.speeds[order[p]];
    sorted.R.col(p) = basis.R.col(order[p]);
  }
  basis = sorted;
}

/// Quasi-linear matrix in depth/discharge variables. It is similar to the
/// density-weighted matrix through D = diag(rho1, rho1, rho2, rho2).
inline Matrix4 quasilinear_matrix(const PrimitiveState& s, const Parameters& p) {
  const double g = p.g();
  Matrix4 A;
  // clang-format off
  A << 0.0,                        1.0,        0.0,                        0.0,
       g * s.h1 - s.u1 * s.u1,     2.0 * s.u1, g * s.h1,                   0.0,
       0.0,                        0.0,        0.0,                        1.0,
       p.r() * g * s.h2,           0.0,        g * s.h2 - s.u2 * s.u2,     2.0 * s.u2;
  // clang-format on
  return A;
}

/// Quasi-linear matrix of the density-weighted system.
inline Matrix4 quasilinear_matrix_conserved(const PrimitiveState& s, const Parameters& p) {
  const double g = p.g();
  Matrix4 A;
  // clang-format off
  A << 0.0,                        1.0,        0.0,                        0.0,
       g * s.h1 - s.u1 * s.u1,     2.0 * s.u1, p.r() * g * s.h1,           0.0,
       0.0,                        0.0,        0.0,                        1.0,
       g * s.h2,                   0.0,        g * s.h2 - s.u2 * s.u2,     2.0 * s.u2;
  // clang-format on
  return A;
}

/// Characteristic polynomial ((l-u1)^2 - g h1)((l-u2)^2 - g h2) - r g^2 h1 h2.
inline double characteristic_polynomial(double lambda, const PrimitiveState& s,
                                        const Parameters& p) {
  const double g = p.g();
  const double a = (lambda - s.u1) * (lambda - s.u1) - g * s.h1;
  const double b = (lambda - s.u2) * (lambda - s.u2) - g * s.h2;
  return a * b - p.r() * g * g * s.h1 * s.h2;
}

/// Eigenvector component alpha for an eigenvalue of the full system. Each of
/// the two algebraically equal forms is singular where the other is regular.
inline double alpha_for_speed(double lambda, const PrimitiveState& s, const Parameters& p) {
  const double g = p.g();
  const double bottom = (lambda - s.u2) * (lambda - s.u2) - g * s.h2;
  const double scale = g * (s.h1 + s.h2);
  if (std::abs(bottom) < 1e-8 * scale) {
    return ((lambda - s.u1) * (lambda - s.u1) - g * s.h1) / (g * s.h1);
  }
  return p.r() * g * s.h2 / bottom;
}

struct GammaAlpha {
  double gamma = 0.0;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  /// 1 + alpha_minus, evaluated without cancellation.
  double one_plus_alpha_minus = 0.0;
};

/// Roots of alpha^2 + alpha (1 - gamma) - r gamma = 0.
inline GammaAlpha linearized_alpha(double gamma, double r) {
  GammaAlpha out;
  out.gamma = gamma;
  const double disc = std::sqrt((gamma - 1.0) * (gamma - 1.0) + 4.0 * r * gamma);
  if (gamma - 1.0 >= 0.0) {
    out.alpha_plus = 0.5 * (gamma - 1.0 + disc);
    out.alpha_minus = out.alpha_plus > 0.0 ? -r * gamma / out.alpha_plus : 0.0;
  } else {
    out.alpha_minus = 0.5 * (gamma - 1.0 - disc);
    out.alpha_plus = r * gamma / -out.alpha_minus;
  }
  out.one_plus_alpha_minus = 2.0 * gamma * (1.0 - r) / (gamma + 1.0 + disc);
  return out;
}

namespace detail {

struct LinearizedSpeeds {
  double external;
  double internal;
  GammaAlpha alpha;
};

inline LinearizedSpeeds linearized_speeds(double h1, double h2, const Parameters& p) {
  if (h1 < p.dry_tolerance()) {
    std::ostringstream msg;
    msg << "linearized eigenspace needs a wet top layer (h1=" << h1 << ")";
    throw SolverError(SolverErrorKind::DegenerateTopLayer, msg.str());
  }
  const GammaAlpha a = linearized_alpha(std::max(h2, 0.0) / h1, p.r());
  return {std::sqrt(p.g() * h1 * (1.0 + a.alpha_plus)),
          std::sqrt(p.g() * h1 * a.one_plus_alpha_minus), a};
}

}  // namespace detail

/// Eigenspace of the system linearized about an ocean at rest with depths
/// h1, h2. External columns pair with alpha_plus, internal with alpha_minus.
inline EigenBasis linearized_basis(double h1, double h2, const Parameters& p) {
  const auto ls = detail::linearized_speeds(h1, h2, p);
  EigenBasis basis;
  basis.source = BasisSource::Linearized;
  basis.speeds = {-ls.external, -ls.internal, ls.internal, ls.external};
  basis.R.col(0) = eigenvector(-ls.external, ls.alpha.alpha_plus);
  basis.R.col(1) = eigenvector(-ls.internal, ls.alpha.alpha_minus);
  basis.R.col(2) = eigenvector(ls.internal, ls.alpha.alpha_minus);
  basis.R.col(3) = eigenvector(ls.external, ls.alpha.alpha_plus);
  return basis;
}

/// Left-going families from the left depths, right-going from the right.
inline EigenBasis linearized_basis(double h1L, double h2L, double h1R, double h2R,
                                   const Parameters& p) {
  const EigenBasis left = linearized_basis(h1L, h2L, p);
  const EigenBasis right = linearized_basis(h1R, h2R, p);
  EigenBasis basis;
  basis.source = BasisSource::Linearized;
  basis.speeds = {left.speeds[0], left.speeds[1], right.speeds[2], right.speeds[3]};
  basis.R.col(0) = left.R.col(0);
  basis.R.col(1) = left.R.col(1);
  basis.R.col(2) = right.R.col(2);
  basis.R.col(3) = right.R.col(3);
  sort_by_speed(basis);
  return basis;
}

struct VelocityDifferenceSpeeds {
  double ext_minus, ext_plus, int_minus, int_plus;
};

/// First-order expansion about u1 - u2 of the four speeds at one state.
inline VelocityDifferenceSpeeds velocity_difference_speeds(const PrimitiveState& s,
                                                           const Parameters& p) {
  const double H = s.h1 + s.h2;
  const double du = s.u1 - s.u2;
  const double ext_mean = (s.h1 * s.u1 + s.h2 * s.u2) / H;
  const double int_mean = (s.h1 * s.u2 + s.h2 * s.u1) / H;
  const double ext = std::sqrt(p.g() * H);
  // g' h1 h2 / H [1 - du^2 / (g' H)], written without dividing by g'
  double radicand = s.h1 * s.h2 / H * (p.reduced_g() - du * du / H);
  // round-off at the hyperbolicity boundary counts as zero
  const double scale = s.h1 * s.h2 / H * p.reduced_g();
  if (radicand < 0.0 && radicand >= -8.0 * std::numeric_limits<double>::epsilon() * scale)
    radicand = 0.0;
  if (radicand < 0.0) {
    std::ostringstream msg;
    msg << "internal radicand " << radicand << " < 0 (u1-u2=" << du << ", h1=" << s.h1
        << ", h2=" << s.h2 << ")";
    throw SolverError(SolverErrorKind::HyperbolicityLoss, msg.str());
  }
  const double in = std::sqrt(radicand);
  return {ext_mean - ext, ext_mean + ext, int_mean - in, int_mean + in};
}

inline EigenBasis velocity_difference_basis(const PrimitiveState& qL, const PrimitiveState& qR,
                                            const Parameters& p) {
  const auto sl = velocity_difference_speeds(qL, p);
  const auto sr = velocity_difference_speeds(qR, p);
  EigenBasis basis;
  basis.source = BasisSource::VelocityDifference;
  basis.speeds = {sl.ext_minus, sl.int_minus, sr.int_plus, sr.ext_plus};
  basis.R.col(0) = eigenvector(sl.ext_minus, alpha_for_speed(sl.ext_minus, qL, p));
  basis.R.col(1) = eigenvector(sl.int_minus, alpha_for_speed(sl.int_minus, qL, p));
  basis.R.col(2) = eigenvector(sr.int_plus, alpha_for_speed(sr.int_plus, qR, p));
  basis.R.col(3) = eigenvector(sr.ext_plus, alpha_for_speed(sr.ext_plus, qR, p));
  sort_by_speed(basis);
  return basis;
}

/// All four roots of the characteristic polynomial at `s`, ascending.
///
/// The quartic is shifted by the mean velocity and scaled by sqrt(g(h1+h2)),
/// solved through its resolvent cubic and each root is Newton polished.
inline std::array<double, 4> characteristic_roots(const PrimitiveState& s, const Parameters& p) {
  const double c2 = p.g() * (s.h1 + s.h2);
  const double c = std::sqrt(c2);
  const double mean = 0.5 * (s.u1 + s.u2);
  const double D = 0.5 * (s.u1 - s.u2) / c;
  const double A1 = p.g() * s.h1 / c2;
  const double A2 = p.g() * s.h2 / c2;
  const double s1 = D * D - A1;
  const double s2 = D * D - A2;
  const double pq = s1 + s2 - 4.0 * D * D;
  const double qq = 2.0 * D * (A2 - A1);
  const double rq = s1 * s2 - p.r() * A1 * A2;

  const auto roots = quartic::solve_depressed(pq, qq, rq);
  double radius = 0.0;
  for (const auto& z : roots) radius = std::max(radius, std::abs(z));
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    if (std::abs(roots[k].imag()) > 1e-8 * std::max(radius, 1e-300)) {
      std::ostringstream msg;
      msg << "complex characteristic root " << mean + c * roots[k].real() << " + "
          << c * roots[k].imag() << "i (h1=" << s.h1 << ", h2=" << s.h2 << ", u1=" << s.u1
          << ", u2=" << s.u2 << ")";
      throw SolverError(SolverErrorKind::HyperbolicityLoss, msg.str());
    }
    out[k] = mean + c * quartic::polish_real_root(roots[k].real(), pq, qq, rq);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Eigenspace of the quasi-linear matrix at the arithmetic-average state,
/// eigenvectors rebuilt analytically from each computed speed.
inline EigenBasis direct_basis(const PrimitiveState& avg, const Parameters& p) {
  const auto speeds = characteristic_roots(avg, p);
  EigenBasis basis;
  basis.source = BasisSource::Direct;
  basis.speeds = speeds;
  for (int k = 0; k < 4; ++k) basis.R.col(k) = eigenvector(speeds[k], alpha_for_speed(speeds[k], avg, p));
  return basis;
}

/// Arithmetic average of two primitive states (surfaces recomputed).
inline PrimitiveState average_state(const PrimitiveState& a, const PrimitiveState& b,
                                    const Parameters& p) {
  return make_primitive(0.5 * (a.h1 + b.h1), 0.5 * (a.u1 + b.u1), 0.5 * (a.h2 + b.h2),
                        0.5 * (a.u2 + b.u2), 0.5 * (a.b + b.b), p);
}

enum class DrySide { LeftDry, RightDry };

/// Internal edge speed of a bottom layer flooding into a dry cell, from the
/// single-layer inundation wave of reduced gravity.
inline double inundation_speed(const PrimitiveState& wet, DrySide side, const Parameters& p) {
  const double c = 2.0 * std::sqrt(p.reduced_g() * std::max(wet.h2, 0.0));
  return side == DrySide::LeftDry ? wet.u2 - c : wet.u2 + c;
}

}  // namespace twolayer
