#include "orlicz/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace orlicz {

Grid::Grid(int dim, double lx, double ly, int nx, int ny)
    : dim_(dim), nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (!(lx > 0.0) || (dim == 2 && !(ly > 0.0)))
    throw std::invalid_argument("grid extents must be positive");
  if (nx < 2 || (dim == 2 && ny < 2))
    throw std::invalid_argument("grid needs at least 2 cells per axis");
  hx_ = lx_ / nx_;
  hy_ = dim == 2 ? ly_ / ny_ : 0.0;
}

std::shared_ptr<const Grid> Grid::interval(double length, int cells) {
  return std::shared_ptr<const Grid>(new Grid(1, length, 0.0, cells, 0));
}

std::shared_ptr<const Grid> Grid::box(double lx, double ly, int cells_x,
                                      int cells_y) {
  return std::shared_ptr<const Grid>(new Grid(2, lx, ly, cells_x, cells_y));
}

long Grid::node_count() const {
  return dim_ == 1 ? nx_ + 1 : long(nx_ + 1) * (ny_ + 1);
}

long Grid::cell_count() const {
  return dim_ == 1 ? nx_ : long(nx_) * ny_;
}

double Grid::cell_volume() const { return dim_ == 1 ? hx_ : hx_ * hy_; }

double Grid::domain_measure() const { return dim_ == 1 ? lx_ : lx_ * ly_; }

bool Grid::on_boundary(long node) const {
  if (dim_ == 1) return node == 0 || node == nx_;
  const int i = int(node % (nx_ + 1));
  const int j = int(node / (nx_ + 1));
  return i == 0 || i == nx_ || j == 0 || j == ny_;
}

std::array<double, 2> Grid::node_coord(long node) const {
  if (dim_ == 1) return {node * hx_, 0.0};
  const int i = int(node % (nx_ + 1));
  const int j = int(node / (nx_ + 1));
  return {i * hx_, j * hy_};
}

std::array<double, 2> Grid::cell_center(long cell) const {
  if (dim_ == 1) return {(cell + 0.5) * hx_, 0.0};
  const int i = int(cell % nx_);
  const int j = int(cell / nx_);
  return {(i + 0.5) * hx_, (j + 0.5) * hy_};
}

ScalarField ScalarField::zeros(GridPtr g) {
  ScalarField f;
  f.grid = std::move(g);
  f.v.assign(f.grid->node_count(), 0.0);
  return f;
}

ScalarField ScalarField::from_function(
    GridPtr g, const std::function<double(double, double)>& f, bool dirichlet) {
  ScalarField out = zeros(std::move(g));
  const long n = out.grid->node_count();
  for (long k = 0; k < n; ++k) {
    const auto [x, y] = out.grid->node_coord(k);
    out.v[k] = f(x, y);
  }
  if (dirichlet) out.enforce_dirichlet();
  return out;
}

void ScalarField::enforce_dirichlet() {
  const long n = grid->node_count();
  for (long k = 0; k < n; ++k)
    if (grid->on_boundary(k)) v[k] = 0.0;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

CellField CellField::zeros(GridPtr g) {
  CellField f;
  f.grid = std::move(g);
  f.v.assign(f.grid->cell_count(), 0.0);
  return f;
}

ScalarField scaled(const ScalarField& u, double c) {
  ScalarField out = u;
  scale_in_place(out, c);
  return out;
}

void scale_in_place(ScalarField& u, double c) {
  for (double& x : u.v) x *= c;
}

void axpy(ScalarField& y, double a, const ScalarField& x) {
  for (std::size_t k = 0; k < y.v.size(); ++k) y.v[k] += a * x.v[k];
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
  return s;
}

}  // namespace orlicz
