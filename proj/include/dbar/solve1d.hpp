#pragma once

#include "dbar/field.hpp"
#include "dbar/kernels.hpp"

namespace dbar {

/// Coefficient of a (0,1)-form f dzbar on a planar domain.
struct ScalarData {
  std::function<cplx(cplx)> f;
  std::string name = "data";
};

/// Canonical solution operator: T f (w) = int_D S(w, z) f(z) dzbar ^ dz,
/// evaluated with the singular-refined quadrature centered at each target.
/// The orientation convention dzbar ^ dz = 2i dA is pinned by the calibration
/// test T(1) = conj(w) on the unit disc.
cplx solve_T_at(const KernelSet& ks, const std::function<cplx(cplx)>& f, cplx w,
                const SingularQuadControls& controls = {});

SolutionField solve_T(const KernelSet& ks, const ScalarData& data,
                      std::shared_ptr<const ProductGrid> targets,
                      const SingularQuadControls& controls = {});

/// Bergman projection P u (w) = int K(w, z) u(z) dA(z) by quadrature.
cplx bergman_project_1d_at(const KernelSet& ks, const std::function<cplx(cplx)>& u, cplx w,
                           const AreaQuadrature& quad);
SolutionField bergman_project_1d(const KernelSet& ks, const std::function<cplx(cplx)>& u,
                                 std::shared_ptr<const ProductGrid> targets,
                                 const AreaQuadrature& quad);
/// Field input: the field's own grid weights serve as the quadrature.
SolutionField bergman_project_1d(const KernelSet& ks, const SolutionField& u);

/// Normalized |<u, e_j>| against orthonormalized monomials e_j, j <= max_degree.
std::vector<double> canonicity_defect(const SolutionField& u, int max_degree);

/// Centered-difference dbar residual of T applied to `data`, relative to the
/// sup of |f|, over interior probe points with delta >= 0.1 * diameter.
double dbar_residual_probe(const KernelSet& ks, const ScalarData& data, int n_probes,
                           std::uint64_t seed, const SingularQuadControls& controls = {},
                           double fd_step_rel = 0.02);

/// Empirical sup of ||Tf||_q / ||f||_p over a family; (p, q) must be
/// admissible: q < 2p/(2-p) for p in [1,2], q = inf for p in (2, inf].
EstimateReport norm_bound_probe(const KernelSet& ks, const std::vector<ScalarData>& family,
                                double p, double q, int grid_nr = 48, int grid_ntheta = 96,
                                const SingularQuadControls& controls = {});

struct DifferentiableField {
  std::function<cplx(cplx)> u;
  std::function<cplx(cplx)> dbar;  // optional oracle; finite differences otherwise
  std::string name = "u";
};

/// Probes ||u - Pu||_inf / ||dbar u||_inf via the identity P u = u - T(dbar u),
/// and verifies ||Pu||_inf <= ||u||_inf + fitted * ||dbar u||_inf on the family.
EstimateReport projection_bound_probe(const KernelSet& ks,
                                      const std::vector<DifferentiableField>& family,
                                      int grid_nr = 24, int grid_ntheta = 48,
                                      const SingularQuadControls& controls = {});

}  // namespace dbar
