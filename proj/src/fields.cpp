#include "orlicz/fields.hpp"

#include <cmath>
#include <sstream>

namespace orlicz {

CellField gradient_magnitude(const ScalarField& u) {
  const Grid& g = *u.grid;
  CellField out = CellField::zeros(u.grid);
  if (g.dim() == 1) {
    for (int i = 0; i < g.nx(); ++i)
      out.v[i] = std::abs((u.v[i + 1] - u.v[i]) / g.hx());
    return out;
  }
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double a = u.v[g.node_index(i, j)];
      const double dx = (u.v[g.node_index(i + 1, j)] - a) / g.hx();
      const double dy = (u.v[g.node_index(i, j + 1)] - a) / g.hy();
      out.v[g.cell_index(i, j)] = std::sqrt(dx * dx + dy * dy);
    }
  }
  return out;
}

CellField cell_average(const ScalarField& u) {
  const Grid& g = *u.grid;
  CellField out = CellField::zeros(u.grid);
  if (g.dim() == 1) {
    for (int i = 0; i < g.nx(); ++i) out.v[i] = 0.5 * (u.v[i] + u.v[i + 1]);
    return out;
  }
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out.v[g.cell_index(i, j)] =
          0.25 * (u.v[g.node_index(i, j)] + u.v[g.node_index(i + 1, j)] +
                  u.v[g.node_index(i, j + 1)] + u.v[g.node_index(i + 1, j + 1)]);
    }
  }
  return out;
}

double integrate(const CellField& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s * f.grid->cell_volume();
}

namespace {

double mollifier_profile(double s) {
  // s in [0,1): exp(1 - 1/(1-s^2)); continuous 0 at s = 1.
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

ScalarField build_bump(GridPtr grid, const std::array<double, 2>& center,
                       double r_in, double r_out) {
  const Grid& g = *grid;
  if (!(r_in > 0.0) || !(r_out > r_in))
    throw geometry_error("bump radii must satisfy 0 < r_in < r_out");
  const double cx = center[0], cy = center[1];
  bool inside = cx - r_out > 0.0 && cx + r_out < g.lx();
  if (g.dim() == 2) inside = inside && cy - r_out > 0.0 && cy + r_out < g.ly();
  if (!inside)
    throw geometry_error("bump outer ball must lie strictly inside the domain");

  ScalarField out = ScalarField::zeros(grid);
  const long n = g.node_count();
  for (long k = 0; k < n; ++k) {
    const auto [x, y] = g.node_coord(k);
    const double dx = x - cx;
    const double dy = g.dim() == 2 ? y - cy : 0.0;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= r_in)
      out.v[k] = 1.0;
    else if (d < r_out)
      out.v[k] = mollifier_profile((d - r_in) / (r_out - r_in));
  }
  out.enforce_dirichlet();
  return out;
}

std::vector<ScalarField> build_disjoint_bumps(GridPtr grid, int k) {
  const Grid& g = *grid;
  if (k < 1) throw std::invalid_argument("bump count must be >= 1");

  const double h = std::max(g.hx(), g.dim() == 2 ? g.hy() : 0.0);
  std::vector<ScalarField> out;
  out.reserve(k);

  if (g.dim() == 1) {
    // Centers on the midpoints of k equal tiles; support width L/(2k) keeps
    // neighbouring supports and the boundary at distance L/(2k), and for
    // k = 1 the radius shrinks so the single support covers under half the
    // domain (each ball is placed in the complement of the previous ones and
    // each support stays below half of what remains).
    auto radius_for = [&](int kk) {
      return kk == 1 ? 0.2 * g.lx() : g.lx() / (4.0 * kk);
    };
    const double r_out = radius_for(k);
    if (2.0 * r_out < 3.0 * h) {
      int max_k = 0;
      for (int kk = 1; 2.0 * radius_for(kk) >= 3.0 * h; ++kk) max_k = kk;
      std::ostringstream os;
      os << "mesh too coarse for " << k
         << " disjoint bumps (need >= 3 cells per diameter); max feasible k = "
         << max_k;
      throw capacity_error(os.str(), max_k);
    }
    for (int i = 0; i < k; ++i) {
      const double c = g.lx() * (2.0 * i + 1.0) / (2.0 * k);
      out.push_back(build_bump(grid, {c, 0.0}, 0.5 * r_out, r_out));
    }
    return out;
  }

  // 2D: an m x m sub-lattice of tiles, filled row-major until k bumps exist.
  const int m = int(std::ceil(std::sqrt(double(k))));
  const double tile_x = g.lx() / m, tile_y = g.ly() / m;
  const double r_out = 0.25 * std::min(tile_x, tile_y);
  if (2.0 * r_out < 3.0 * h) {
    int max_k = 0;
    for (int kk = 1;; ++kk) {
      const int mm = int(std::ceil(std::sqrt(double(kk))));
      const double r = 0.25 * std::min(g.lx() / mm, g.ly() / mm);
      if (2.0 * r < 3.0 * h) break;
      max_k = kk;
    }
    std::ostringstream os;
    os << "mesh too coarse for " << k
       << " disjoint bumps (need >= 3 cells per diameter); max feasible k = "
       << max_k;
    throw capacity_error(os.str(), max_k);
  }
  for (int i = 0; i < k; ++i) {
    const int a = i % m, b = i / m;
    const double cx = (a + 0.5) * tile_x;
    const double cy = (b + 0.5) * tile_y;
    out.push_back(build_bump(grid, {cx, cy}, 0.5 * r_out, r_out));
  }
  return out;
}

double support_measure(const ScalarField& u) {
  const Grid& g = *u.grid;
  long cells = 0;
  const int nx = g.nx();
  if (g.dim() == 1) {
    for (int i = 0; i < nx; ++i)
      if (u.v[i] != 0.0 || u.v[i + 1] != 0.0) ++cells;
  } else {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < nx; ++i)
        if (u.v[g.node_index(i, j)] != 0.0 || u.v[g.node_index(i + 1, j)] != 0.0 ||
            u.v[g.node_index(i, j + 1)] != 0.0 ||
            u.v[g.node_index(i + 1, j + 1)] != 0.0)
          ++cells;
  }
  return cells * g.cell_volume();
}

}  // namespace orlicz
