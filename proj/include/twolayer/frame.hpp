#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "twolayer/core.hpp"
#include "twolayer/driver.hpp"
#include "twolayer/errors.hpp"

namespace twolayer {

/// Interior snapshot in depth / velocity units.
struct SolutionFrame {
  double t = 0.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<double> x, b, h1, hu1, h2, hu2, eta1, eta2, u1, u2;

  std::size_t size() const noexcept { return x.size(); }
  double dx() const noexcept { return (x_hi - x_lo) / static_cast<double>(size()); }

  static constexpr const char* kHeader = "x,b,h1,hu1,h2,hu2,eta1,eta2,u1,u2";

  std::vector<double>* column(std::string_view name) {
    if (name == "x") return &x;
    if (name == "b") return &b;
    if (name == "h1") return &h1;
    if (name == "hu1") return &hu1;
    if (name == "h2") return &h2;
    if (name == "hu2") return &hu2;
    if (name == "eta1") return &eta1;
    if (name == "eta2") return &eta2;
    if (name == "u1") return &u1;
    if (name == "u2") return &u2;
    return nullptr;
  }
  const std::vector<double>* column(std::string_view name) const {
    return const_cast<SolutionFrame*>(this)->column(name);
  }

  void resize(std::size_t n) {
    for (auto* c : {&x, &b, &h1, &hu1, &h2, &hu2, &eta1, &eta2, &u1, &u2}) c->assign(n, 0.0);
  }

  /// Fills surfaces and limited velocities from depths, momenta and bathymetry.
  void derive(const Parameters& p) {
    for (std::size_t i = 0; i < size(); ++i) {
      PrimitiveState s{h1[i], h2[i], 0.0, 0.0, b[i], 0.0, 0.0};
      const Surfaces e = surfaces(s, p);
      eta1[i] = e.eta1;
      eta2[i] = e.eta2;
      u1[i] = is_wet(h1[i], p) ? hu1[i] / h1[i] : 0.0;
      u2[i] = is_wet(h2[i], p) ? hu2[i] / h2[i] : 0.0;
    }
  }
};

inline SolutionFrame make_frame(const SimState& s, const Grid& grid, const Parameters& p) {
  SolutionFrame f;
  f.t = s.t;
  f.x_lo = grid.x_lo;
  f.x_hi = grid.x_hi;
  f.resize(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const CellState& q = s.interior(i);
    const PrimitiveState w = to_primitive(q, p);
    f.x[i] = grid.center(i);
    f.b[i] = q.b;
    f.h1[i] = w.h1;
    f.h2[i] = w.h2;
    f.hu1[i] = q.mu1 / p.rho1();
    f.hu2[i] = q.mu2 / p.rho2();
    f.eta1[i] = w.eta1;
    f.eta2[i] = w.eta2;
    f.u1[i] = w.u1;
    f.u2[i] = w.u2;
  }
  return f;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_csv(std::ostream& os, const SolutionFrame& f) {
  os << SolutionFrame::kHeader << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << f.x[i] << ',' << f.b[i] << ',' << f.h1[i] << ',' << f.hu1[i] << ',' << f.h2[i] << ','
       << f.hu2[i] << ',' << f.eta1[i] << ',' << f.eta2[i] << ',' << f.u1[i] << ',' << f.u2[i]
       << '\n';
  }
}

/// Reads a frame written by write_csv; cell edges are inferred from uniform spacing.
inline SolutionFrame read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != SolutionFrame::kHeader)
    throw ConfigError("frame csv: unexpected header");
  SolutionFrame f;
  std::vector<std::vector<double>*> cols;
  for (const char* name : {"x", "b", "h1", "hu1", "h2", "hu2", "eta1", "eta2", "u1", "u2"})
    cols.push_back(f.column(name));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::size_t end = c + 1 < cols.size() ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw ConfigError("frame csv: short row");
      cols[c]->push_back(std::stod(line.substr(pos, end - pos)));
      pos = end + 1;
    }
  }
  if (f.size() < 2) throw ConfigError("frame csv: need at least two rows");
  const double dx = f.x[1] - f.x[0];
  f.x_lo = f.x.front() - 0.5 * dx;
  f.x_hi = f.x.back() + 0.5 * dx;
  return f;
}

/// Overlap-weighted cell averages of a fine frame on a coarser uniform grid
/// over the same interval. Depths, momenta and bathymetry are averaged;
/// surfaces and velocities are re-derived.
inline SolutionFrame restrict_frame(const SolutionFrame& fine, std::size_t n_coarse,
                                    const Parameters& p) {
  const double len = fine.x_hi - fine.x_lo;
  if (n_coarse == 0 || n_coarse > fine.size())
    throw ConfigError("restriction target must be coarser than the source");
  SolutionFrame c;
  c.t = fine.t;
  c.x_lo = fine.x_lo;
  c.x_hi = fine.x_hi;
  c.resize(n_coarse);
  const double dxf = fine.dx();
  const double dxc = len / static_cast<double>(n_coarse);
  for (std::size_t i = 0; i < n_coarse; ++i) {
    const double lo = c.x_lo + i * dxc;
    const double hi = lo + dxc;
    c.x[i] = lo + 0.5 * dxc;
    const auto j0 = static_cast<std::size_t>(std::max(0.0, std::floor((lo - fine.x_lo) / dxf)));
    for (std::size_t j = j0; j < fine.size(); ++j) {
      const double flo = fine.x_lo + j * dxf;
      const double fhi = flo + dxf;
      if (flo >= hi) break;
      const double w = (std::min(hi, fhi) - std::max(lo, flo)) / dxc;
      if (w <= 0.0) continue;
      c.b[i] += w * fine.b[j];
      c.h1[i] += w * fine.h1[j];
      c.hu1[i] += w * fine.hu1[j];
      c.h2[i] += w * fine.h2[j];
      c.hu2[i] += w * fine.hu2[j];
    }
  }
  c.derive(p);
  return c;
}

}  // namespace twolayer
