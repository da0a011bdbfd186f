#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace orlicz {

// Uniform tensor grid on an open box (0,Lx) or (0,Lx)x(0,Ly). Fields live on
// nodes (cell corners); quadrature and gradients live on cells.
class Grid {
 public:
  static std::shared_ptr<const Grid> interval(double length, int cells);
  static std::shared_ptr<const Grid> box(double lx, double ly, int cells_x,
                                         int cells_y);

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  long node_count() const;
  long cell_count() const;
  double cell_volume() const;
  double domain_measure() const;

  long node_index(int i, int j = 0) const { return long(j) * (nx_ + 1) + i; }
  long cell_index(int i, int j = 0) const { return long(j) * nx_ + i; }

  bool on_boundary(long node) const;
  std::array<double, 2> node_coord(long node) const;
  std::array<double, 2> cell_center(long cell) const;

 private:
  Grid(int dim, double lx, double ly, int nx, int ny);
  int dim_, nx_, ny_;
  double lx_, ly_, hx_, hy_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Node-valued field. Solver-produced fields vanish on the boundary; helper
// constructors can enforce that mask.
struct ScalarField {
  GridPtr grid;
  std::vector<double> v;

  static ScalarField zeros(GridPtr g);
  static ScalarField from_function(GridPtr g,
                                   const std::function<double(double, double)>& f,
                                   bool dirichlet = true);
  void enforce_dirichlet();
  double max_abs() const;
};

// Cell-valued field (one value per cell, read at the cell center).
struct CellField {
  GridPtr grid;
  std::vector<double> v;

  static CellField zeros(GridPtr g);
};

// Elementwise helpers used throughout the solver.
ScalarField scaled(const ScalarField& u, double c);
void scale_in_place(ScalarField& u, double c);
void axpy(ScalarField& y, double a, const ScalarField& x);  // y += a x
double dot(const ScalarField& a, const ScalarField& b);

}  // namespace orlicz
