#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "twolayer/errors.hpp"

namespace twolayer {

enum class EigenMethod { VelocityDifference, LinearizedStatic, LinearizedDynamic, Direct };
enum class InundationMethod { ZeroDepthEstimate, SmallDepthFill };

inline std::string_view to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::VelocityDifference: return "velocity-difference";
    case EigenMethod::LinearizedStatic: return "linearized-static";
    case EigenMethod::LinearizedDynamic: return "linearized-dynamic";
    case EigenMethod::Direct: return "direct";
  }
  return "unknown";
}

inline EigenMethod parse_eigen_method(std::string_view s) {
  if (s == "velocity-difference" || s == "vel") return EigenMethod::VelocityDifference;
  if (s == "linearized-static" || s == "static") return EigenMethod::LinearizedStatic;
  if (s == "linearized-dynamic" || s == "dynamic") return EigenMethod::LinearizedDynamic;
  if (s == "direct") return EigenMethod::Direct;
  throw ConfigError("unknown eigensolver '" + std::string(s) + "'");
}

inline std::string_view to_string(InundationMethod m) {
  return m == InundationMethod::ZeroDepthEstimate ? "zero-depth-estimate" : "small-depth-fill";
}

inline InundationMethod parse_inundation_method(std::string_view s) {
  if (s == "zero-depth-estimate") return InundationMethod::ZeroDepthEstimate;
  if (s == "small-depth-fill") return InundationMethod::SmallDepthFill;
  throw ConfigError("unknown inundation method '" + std::string(s) + "'");
}

/// Physical and numerical constants shared by every solver component.
///
/// Densities are stored explicitly; the ratio r = rho1 / rho2 is cached and
/// recomputed whenever the densities change.
class Parameters {
 public:
  Parameters() { set_densities(rho1_, rho2_); }

  Parameters(double g, double rho1, double rho2, double dry_tolerance = 1.0e-3,
             double cfl_target = 0.9)
      : g_(g), dry_tolerance_(dry_tolerance), cfl_target_(cfl_target) {
    if (!(g > 0.0)) throw ConfigError("gravity must be positive");
    set_densities(rho1, rho2);
    set_dry_tolerance(dry_tolerance);
    set_cfl_target(cfl_target);
  }

  double g() const noexcept { return g_; }
  double rho1() const noexcept { return rho1_; }
  double rho2() const noexcept { return rho2_; }
  double r() const noexcept { return r_; }
  /// Reduced gravity (1 - r) g.
  double reduced_g() const noexcept { return (1.0 - r_) * g_; }
  double dry_tolerance() const noexcept { return dry_tolerance_; }
  double cfl_target() const noexcept { return cfl_target_; }

  double rho(int layer) const noexcept { return layer == 1 ? rho1_ : rho2_; }

  void set_gravity(double g) {
    if (!(g > 0.0)) throw ConfigError("gravity must be positive");
    g_ = g;
  }

  void set_densities(double rho1, double rho2) {
    if (!(rho1 > 0.0)) throw ConfigError("rho1 must be positive");
    // A heavier top layer is statically unstable and not hyperbolic.
    if (!(rho2 >= rho1)) throw ConfigError("rho2 must be >= rho1 (r <= 1)");
    rho1_ = rho1;
    rho2_ = rho2;
    r_ = rho1 / rho2;
  }

  void set_dry_tolerance(double tol) {
    if (!(tol > 0.0)) throw ConfigError("dry tolerance must be positive");
    dry_tolerance_ = tol;
  }

  void set_cfl_target(double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl target must lie in (0, 1]");
    cfl_target_ = cfl;
  }

  EigenMethod eigen_method = EigenMethod::LinearizedDynamic;
  InundationMethod inundation_method = InundationMethod::ZeroDepthEstimate;
  std::optional<double> manning_n;

 private:
  double g_ = 9.8;
  double rho1_ = 950.0;
  double rho2_ = 1000.0;
  double r_ = 0.95;
  double dry_tolerance_ = 1.0e-3;
  double cfl_target_ = 0.9;
};

/// Conserved, density-weighted variables of one cell plus its bathymetry.
struct CellState {
  double m1 = 0.0;   // rho1 h1
  double mu1 = 0.0;  // rho1 h1 u1
  double m2 = 0.0;   // rho2 h2
  double mu2 = 0.0;  // rho2 h2 u2
  double b = 0.0;    // bottom elevation, negative below sea level

  friend bool operator==(const CellState&, const CellState&) = default;
};

struct PrimitiveState {
  double h1 = 0.0;
  double h2 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double b = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;

  double hu1() const noexcept { return h1 * u1; }
  double hu2() const noexcept { return h2 * u2; }
};

/// Ocean-at-rest background used by the static linearization.
struct LinearizedBackground {
  double eta1_hat = 0.0;
  double eta2_hat = 0.0;

  double h1_hat(double b) const noexcept {
    return std::max(eta1_hat - std::max(eta2_hat, b), 0.0);
  }
  double h2_hat(double b) const noexcept { return std::max(eta2_hat - b, 0.0); }
};

inline bool is_wet(double h, const Parameters& p) noexcept { return h >= p.dry_tolerance(); }

/// Limited velocity: zero below the dry tolerance, momentum / mass otherwise.
inline double limited_velocity(double mass, double momentum, double depth,
                               const Parameters& p) noexcept {
  return depth >= p.dry_tolerance() ? momentum / mass : 0.0;
}

struct Surfaces {
  double eta1;
  double eta2;
};

/// Top and internal surface elevations. A dry bottom layer exposes the
/// bathymetry as the internal surface.
inline Surfaces surfaces(const PrimitiveState& s, const Parameters& p) noexcept {
  const double eta2 = is_wet(s.h2, p) ? s.b + s.h2 : s.b;
  return {eta2 + s.h1, eta2};
}

/// Derives depths, limited velocities and surfaces. The cell state itself is
/// never modified, sub-tolerance momentum included.
inline PrimitiveState to_primitive(const CellState& q, const Parameters& p) noexcept {
  PrimitiveState s;
  s.h1 = q.m1 / p.rho1();
  s.h2 = q.m2 / p.rho2();
  s.u1 = limited_velocity(q.m1, q.mu1, s.h1, p);
  s.u2 = limited_velocity(q.m2, q.mu2, s.h2, p);
  s.b = q.b;
  const Surfaces eta = surfaces(s, p);
  s.eta1 = eta.eta1;
  s.eta2 = eta.eta2;
  return s;
}

inline CellState from_primitive(const PrimitiveState& s, const Parameters& p) {
  if (s.h1 < 0.0 || s.h2 < 0.0) throw ConfigError("negative layer depth");
  CellState q;
  q.m1 = p.rho1() * s.h1;
  q.m2 = p.rho2() * s.h2;
  q.mu1 = s.h1 > 0.0 ? q.m1 * s.u1 : 0.0;
  q.mu2 = s.h2 > 0.0 ? q.m2 * s.u2 : 0.0;
  q.b = s.b;
  return q;
}

/// Builds a primitive state from depths and velocities, filling the surfaces.
inline PrimitiveState make_primitive(double h1, double u1, double h2, double u2, double b,
                                     const Parameters& p) noexcept {
  PrimitiveState s{h1, h2, u1, u2, b, 0.0, 0.0};
  const Surfaces eta = surfaces(s, p);
  s.eta1 = eta.eta1;
  s.eta2 = eta.eta2;
  return s;
}

}  // namespace twolayer
