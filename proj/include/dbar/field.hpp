#pragma once

#include <memory>

#include "dbar/geometry.hpp"

namespace dbar {

enum class RadialRule { MidpointUniform, GaussLegendre };

/// Tensor-polar grid about the domain center. The weights make the grid a
/// polar quadrature rule, so fields on it carry discrete L2 inner products.
struct TensorPolarGrid {
  PlanarDomain domain = PlanarDomain::unit_disc();
  int nr = 0, ntheta = 0;
  RadialRule rule = RadialRule::GaussLegendre;
  std::vector<double> r_rel;   // nr relative radii in (0, 1)
  std::vector<double> theta;   // ntheta angles
  std::vector<cplx> points;    // nr * ntheta, index a * ntheta + b
  std::vector<double> weights;

  int size() const { return nr * ntheta; }
};

TensorPolarGrid tensor_polar_grid(const PlanarDomain& dom, int nr, int ntheta,
                                  RadialRule rule = RadialRule::GaussLegendre);

/// Cartesian product of per-factor tensor-polar grids (n >= 1 factors).
struct ProductGrid {
  std::vector<TensorPolarGrid> factors;

  int n() const { return static_cast<int>(factors.size()); }
  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& f : factors) s *= f.size();
    return s;
  }
  /// Decompose a flat index into per-factor indices (slowest = factor 0).
  void decompose(std::size_t flat, std::span<std::size_t> idx) const {
    for (int j = n() - 1; j >= 0; --j) {
      idx[j] = flat % factors[j].size();
      flat /= factors[j].size();
    }
  }
  void point(std::size_t flat, std::span<cplx> out) const {
    std::size_t idx[8];
    decompose(flat, {idx, static_cast<std::size_t>(n())});
    for (int j = 0; j < n(); ++j) out[j] = factors[j].points[idx[j]];
  }
  double weight(std::size_t flat) const {
    double w = 1.0;
    std::size_t idx[8];
    decompose(flat, {idx, static_cast<std::size_t>(n())});
    for (int j = 0; j < n(); ++j) w *= factors[j].weights[idx[j]];
    return w;
  }
};

std::shared_ptr<const ProductGrid> product_grid(std::vector<TensorPolarGrid> factors);

/// Sampled solution values on a (product) grid with recorded norms.
struct SolutionField {
  std::shared_ptr<const ProductGrid> grid;
  std::vector<cplx> values;
  double sup_norm = 0.0;
  double l2_norm = 0.0;

  void finalize();
};

struct FieldComparison {
  double sup_diff = 0.0;
  double l2_diff = 0.0;      // quadrature-weighted absolute L2 difference
  double l2_rel = 0.0;       // relative to the L2 norm of the second field
  std::size_t argmax = 0;    // flat index of the max pointwise difference
};

/// Norm report for two fields on identical grids; grid mismatch is an error.
FieldComparison compare_fields(const SolutionField& a, const SolutionField& b);

}  // namespace dbar
