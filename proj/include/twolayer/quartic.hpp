#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace twolayer::quartic {

using Complex = std::complex<double>;

/// Largest real root of the monic cubic x^3 + a x^2 + b x + c.
inline double largest_real_cubic_root(double a, double b, double c) {
  const double shift = a / 3.0;
  const double P = b - a * shift;
  const double Q = 2.0 * shift * shift * shift - shift * b + c;
  double t;
  const double disc = Q * Q / 4.0 + P * P * P / 27.0;
  if (disc < 0.0) {
    // three real roots
    const double rad = std::sqrt(-P / 3.0);
    const double arg = std::clamp(-Q / (2.0 * rad * rad * rad), -1.0, 1.0);
    t = 2.0 * rad * std::cos(std::acos(arg) / 3.0);
  } else {
    const double sq = std::sqrt(disc);
    t = std::cbrt(-Q / 2.0 + sq) + std::cbrt(-Q / 2.0 - sq);
  }
  double x = t - shift;
  for (int it = 0; it < 4; ++it) {
    const double f = ((x + a) * x + b) * x + c;
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (df == 0.0) break;
    const double step = f / df;
    x -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

/// Both roots of x^2 + B x + C, complex when the discriminant is negative.
inline std::array<Complex, 2> solve_quadratic(double B, double C) {
  const double disc = B * B - 4.0 * C;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double t = -0.5 * (B + std::copysign(sq, B));
    if (t == 0.0) return {Complex(0.0), Complex(0.0)};
    return {Complex(t), Complex(C / t)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(-0.5 * B, -im), Complex(-0.5 * B, im)};
}

inline double depressed_value(double x, double p, double q, double r) {
  const double x2 = x * x;
  return (x2 + p) * x2 + q * x + r;
}

/// Ferrari solve of x^4 + p x^2 + q x + r = 0 through the resolvent cubic.
/// Roots come back unpolished; see polish_real_root().
inline std::array<Complex, 4> solve_depressed(double p, double q, double r) {
  const double scale = 1.0 + std::abs(p) + std::sqrt(std::abs(r));
  if (std::abs(q) <= 1e-15 * scale * scale) {
    // biquadratic
    const auto y = solve_quadratic(p, r);
    return {std::sqrt(y[0]), -std::sqrt(y[0]), std::sqrt(y[1]), -std::sqrt(y[1])};
  }
  // (x^2 + m)^2 = (2m - p) x^2 - q x + (m^2 - r); pick m making the right side a square
  const double m = largest_real_cubic_root(-0.5 * p, -r, 0.5 * p * r - q * q / 8.0);
  const double sigma = std::sqrt(std::max(2.0 * m - p, 0.0));
  if (sigma <= 1e-12 * std::sqrt(scale)) {
    const auto y = solve_quadratic(p, r);
    return {std::sqrt(y[0]), -std::sqrt(y[0]), std::sqrt(y[1]), -std::sqrt(y[1])};
  }
  const double k = q / (2.0 * sigma);
  const auto a = solve_quadratic(-sigma, m + k);
  const auto b = solve_quadratic(sigma, m - k);
  return {a[0], a[1], b[0], b[1]};
}

/// Newton iterations on the depressed quartic until the relative step is
/// below `tol`. Steps that increase the residual are rejected.
inline double polish_real_root(double x, double p, double q, double r, double tol = 1e-12) {
  double fx = depressed_value(x, p, q, r);
  for (int it = 0; it < 8; ++it) {
    const double df = (4.0 * x * x + 2.0 * p) * x + q;
    if (df == 0.0) break;
    const double candidate = x - fx / df;
    const double fc = depressed_value(candidate, p, q, r);
    if (std::abs(fc) > std::abs(fx)) break;
    const double step = std::abs(candidate - x);
    x = candidate;
    fx = fc;
    if (step <= tol * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace twolayer::quartic
