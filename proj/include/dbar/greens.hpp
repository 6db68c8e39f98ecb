#pragma once

#include <Eigen/Dense>
#include <functional>
#include <list>
#include <memory>
#include <mutex>

#include "dbar/geometry.hpp"
#include "dbar/report.hpp"

namespace dbar {

/// Nystrom discretization of the interior Dirichlet problem via the
/// double-layer representation, trapezoidal rule, curvature diagonal limit.
/// Immutable after factorization; evaluation is safe for concurrent reads.
class DirichletSolver {
 public:
  DirichletSolver(const PlanarDomain& dom, int n);

  int size() const { return bq_.count; }
  const PlanarDomain& domain() const { return dom_; }
  const BoundaryQuadrature& quad() const { return bq_; }

  /// Density for given boundary values at the quadrature nodes.
  Eigen::VectorXcd solve_density(const Eigen::VectorXcd& boundary_values) const;

  cplx eval(const Eigen::VectorXcd& density, cplx z) const;
  /// (d/dz, d/dzbar) of the potential at an interior point.
  std::pair<cplx, cplx> eval_wirtinger(const Eigen::VectorXcd& density, cplx z) const;

  bool near_boundary(cplx z) const;  // within 5 node spacings of the boundary

 private:
  int nearest_node(cplx z) const;
  PlanarDomain dom_;
  BoundaryQuadrature bq_;
  std::vector<cplx> normals_;        // unit outward normals at nodes
  std::vector<double> layer_coeff_;  // |gamma'| * weight / (2 pi)
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double max_spacing_ = 0.0;
};

/// Harmonic extension of complex boundary data.
class HarmonicField {
 public:
  HarmonicField(std::shared_ptr<const DirichletSolver> solver, Eigen::VectorXcd density)
      : solver_(std::move(solver)), density_(std::move(density)) {}

  cplx value(cplx z) const;
  std::pair<cplx, cplx> wirtinger(cplx z) const;
  /// Accuracy warning for evaluation closer than 5 node spacings to the boundary.
  bool near_boundary_warning(cplx z) const { return solver_->near_boundary(z); }
  const DirichletSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<const DirichletSolver> solver_;
  Eigen::VectorXcd density_;
};

HarmonicField dirichlet_solve(const PlanarDomain& dom, const std::function<cplx(cplx)>& data,
                              int n);
HarmonicField dirichlet_solve(std::shared_ptr<const DirichletSolver> solver,
                              const std::function<cplx(cplx)>& data);

enum class GreenMethod { ClosedFormDisc, Nystrom };

/// Positive Green's function of the domain with Dirichlet boundary condition.
class GreenEvaluator {
 public:
  static GreenEvaluator closed_form_disc(const PlanarDomain& disc);
  static GreenEvaluator nystrom(const PlanarDomain& dom, int n);

  GreenMethod method() const { return method_; }
  const PlanarDomain& domain() const { return dom_; }

  /// G(z, w); requires both points interior and |z-w| >= 1e-8 * diameter.
  double green(cplx z, cplx w) const;
  /// Wirtinger derivative dG/dz; the real gradient is (2 Re, -2 Im) of it.
  cplx green_dz(cplx z, cplx w) const;
  std::array<double, 2> green_gradient(cplx z, cplx w) const;

 private:
  GreenEvaluator() = default;
  void require_pair(cplx z, cplx w) const;
  Eigen::VectorXcd corrector_density(cplx w) const;

  GreenMethod method_ = GreenMethod::ClosedFormDisc;
  PlanarDomain dom_ = PlanarDomain::unit_disc();
  std::shared_ptr<const DirichletSolver> solver_;
  // small LRU cache of corrector densities keyed by the pole w
  struct CacheEntry {
    cplx w;
    Eigen::VectorXcd density;
  };
  struct Cache {
    std::mutex mutex;
    std::list<CacheEntry> entries;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

enum class GreenBoundKind { GBound, G2Bound, GdBound, LogBound };

struct PairSampler {
  std::uint64_t seed = 1;
  double min_sep_rel = 1e-3;      // reject |z-w| below this times the diameter
  double delta_margin_rel = 0.0;  // keep delta(z), delta(w) above this times the diameter
};

/// Empirical supremum of the normalized Kerzman quantities over random pairs,
/// with nested sample doubling for the stability ratio.
EstimateReport fit_green_bounds(const GreenEvaluator& ev, const PairSampler& sampler,
                                GreenBoundKind which, int base_samples);

std::string green_bound_name(GreenBoundKind which);

}  // namespace dbar
