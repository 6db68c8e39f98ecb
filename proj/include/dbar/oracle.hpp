#pragma once

#include <Eigen/Sparse>

#include "dbar/field.hpp"

namespace dbar {

/// Sparse discretization of u -> (du/dzbar_1, ..., du/dzbar_n) on a tensor
/// grid of disc factors: centered differences radially (one-sided
/// second-order at the radial edges) and fourth-order centered differences in
/// the periodic angle.
struct DiscreteDbarSystem {
  std::shared_ptr<const ProductGrid> grid;  // midpoint-polar factors
  Eigen::SparseMatrix<cplx> op;             // rows n * U, cols U
  Eigen::VectorXd weights;                  // discrete L2 weights (area quadrature)
  Eigen::VectorXcd rhs;

  std::size_t unknowns() const { return grid ? grid->size() : 0; }
};

/// Assembles the system for factor discs gridded nr x ntheta each. The
/// right-hand side samples `component(j, z)`.
DiscreteDbarSystem build_dbar_system(
    const std::vector<PlanarDomain>& factors, int nr, int ntheta,
    const std::function<cplx(int, std::span<const cplx>)>& component);

struct LeastNormOptions {
  double tol = 1e-10;
  int max_iterations = 20000;
  double consistency_tol = 0.05;  // relative residual accepted as "consistent"
};

struct LeastNormResult {
  SolutionField field;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Minimum-weighted-norm solution of the underdetermined consistent system,
/// via LSQR on the column-scaled operator. Deterministic.
LeastNormResult least_norm_solve(const DiscreteDbarSystem& sys, const LeastNormOptions& opts = {});

}  // namespace dbar
