#include "orlicz/precond.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "orlicz/errors.hpp"

namespace orlicz {

struct Preconditioner::Impl {
  GridPtr grid;
  std::vector<long> interior;        // node -> dense unknown index or -1
  std::vector<long> interior_nodes;  // unknown index -> node
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  void build(const std::vector<double>* weights,
             const std::vector<double>* mass);
};

void Preconditioner::Impl::build(const std::vector<double>* weights,
                                 const std::vector<double>* mass) {
  Impl& im = *this;
  const Grid& g = *im.grid;
  const long n = g.node_count();
  im.interior.assign(n, -1);
  for (long k = 0; k < n; ++k) {
    if (!g.on_boundary(k)) {
      im.interior[k] = long(im.interior_nodes.size());
      im.interior_nodes.push_back(k);
    }
  }
  const long m = long(im.interior_nodes.size());
  if (m == 0) throw std::invalid_argument("grid has no interior nodes");
  if (weights) {
    if (long(weights->size()) != g.cell_count())
      throw std::invalid_argument("one preconditioner weight per cell required");
    for (double w : *weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("preconditioner weights must be positive");
  }
  if (mass) {
    if (long(mass->size()) != g.cell_count())
      throw std::invalid_argument("one mass weight per cell required");
    for (double w : *mass)
      if (!std::isfinite(w))
        throw std::invalid_argument("mass weights must be finite");
  }

  // Assemble K = sum over cells of the forward-difference quadratic form:
  // u^T K u = sum_c w_c * vol * [ ((u_E - u_W)/hx)^2 + ((u_N - u_S)/hy)^2 ].
  const double vol = g.cell_volume();
  std::vector<Eigen::Triplet<double>> trips;
  auto add = [&](long a, long b, double w) {
    const long ia = im.interior[a], ib = im.interior[b];
    if (ia >= 0 && ib >= 0) trips.emplace_back(ia, ib, w);
  };
  auto edge = [&](long a, long b, double w) {
    add(a, a, w);
    add(b, b, w);
    add(a, b, -w);
    add(b, a, -w);
  };
  const double wx = vol / (g.hx() * g.hx());
  const double wy = g.dim() == 2 ? vol / (g.hy() * g.hy()) : 0.0;
  // Curvature block of m_c * (mean u)_c^2 / 2 * vol: the outer product of
  // the equal corner-averaging coefficients.
  auto mass_block = [&](const long* nodes, int count, double mc) {
    const double coef = mc * vol / double(count * count);
    for (int a = 0; a < count; ++a)
      for (int b = 0; b < count; ++b) add(nodes[a], nodes[b], coef);
  };
  if (g.dim() == 1) {
    for (int i = 0; i < g.nx(); ++i) {
      const double wc = weights ? (*weights)[g.cell_index(i)] : 1.0;
      edge(g.node_index(i), g.node_index(i + 1), wc * wx);
      if (mass) {
        const long nodes[2] = {g.node_index(i), g.node_index(i + 1)};
        mass_block(nodes, 2, (*mass)[g.cell_index(i)]);
      }
    }
  } else {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const double wc = weights ? (*weights)[g.cell_index(i, j)] : 1.0;
        edge(g.node_index(i, j), g.node_index(i + 1, j), wc * wx);
        edge(g.node_index(i, j), g.node_index(i, j + 1), wc * wy);
        if (mass) {
          const long nodes[4] = {g.node_index(i, j), g.node_index(i + 1, j),
                                 g.node_index(i, j + 1),
                                 g.node_index(i + 1, j + 1)};
          mass_block(nodes, 4, (*mass)[g.cell_index(i, j)]);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> K(m, m);
  K.setFromTriplets(trips.begin(), trips.end());
  im.ldlt.compute(K);
  if (im.ldlt.info() != Eigen::Success)
    throw numeric_error("Laplacian factorization failed");
  if (mass) {
    // A usable quasi-Newton metric must be safely positive definite.
    const auto& D = im.ldlt.vectorD();
    double dmax = 0.0;
    for (long i = 0; i < D.size(); ++i) dmax = std::max(dmax, std::abs(D[i]));
    for (long i = 0; i < D.size(); ++i)
      if (!(D[i] > 1e-14 * dmax))
        throw numeric_error("quasi-Newton metric is not positive definite");
  }
}

Preconditioner::Preconditioner(GridPtr grid) : impl_(std::make_unique<Impl>()) {
  impl_->grid = std::move(grid);
  impl_->build(nullptr, nullptr);
}

Preconditioner::Preconditioner(GridPtr grid,
                               const std::vector<double>& cell_weights)
    : impl_(std::make_unique<Impl>()) {
  impl_->grid = std::move(grid);
  impl_->build(&cell_weights, nullptr);
}

Preconditioner::Preconditioner(GridPtr grid,
                               const std::vector<double>& cell_weights,
                               const std::vector<double>& mass_cell_weights)
    : impl_(std::make_unique<Impl>()) {
  impl_->grid = std::move(grid);
  impl_->build(&cell_weights, &mass_cell_weights);
}

Preconditioner::~Preconditioner() = default;
Preconditioner::Preconditioner(Preconditioner&&) noexcept = default;
Preconditioner& Preconditioner::operator=(Preconditioner&&) noexcept = default;

ScalarField Preconditioner::apply(const ScalarField& g) const {
  if (g.grid != impl_->grid)
    throw std::invalid_argument("field and preconditioner grids differ");
  const long m = long(impl_->interior_nodes.size());
  Eigen::VectorXd rhs(m);
  for (long i = 0; i < m; ++i) rhs[i] = g.v[impl_->interior_nodes[i]];
  Eigen::VectorXd sol = impl_->ldlt.solve(rhs);
  if (impl_->ldlt.info() != Eigen::Success)
    throw numeric_error("Laplacian solve failed");
  ScalarField out = ScalarField::zeros(g.grid);
  for (long i = 0; i < m; ++i) out.v[impl_->interior_nodes[i]] = sol[i];
  return out;
}

}  // namespace orlicz
