#include "dbar/oracle.hpp"

#include <cmath>

namespace dbar {

DiscreteDbarSystem build_dbar_system(
    const std::vector<PlanarDomain>& factors, int nr, int ntheta,
    const std::function<cplx(int, std::span<const cplx>)>& component) {
  if (factors.empty()) fail(ErrorKind::Parameter, "build_dbar_system: no factors");
  if (nr < 3 || ntheta < 8) fail(ErrorKind::Parameter, "build_dbar_system: grid too small");
  const int n = static_cast<int>(factors.size());

  std::vector<TensorPolarGrid> fgrids;
  for (const auto& dom : factors) {
    if (!dom.is_disc())
      fail(ErrorKind::Parameter, "build_dbar_system: only disc factors are supported");
    fgrids.push_back(tensor_polar_grid(dom, nr, ntheta, RadialRule::MidpointUniform));
  }
  DiscreteDbarSystem sys;
  sys.grid = product_grid(std::move(fgrids));

  const std::size_t U = sys.grid->size();
  if (U > 400000) fail(ErrorKind::Unsupported, "build_dbar_system: beyond the documented scale");

  // strides for per-factor index shifts in the flat order (factor 0 slowest)
  std::vector<std::size_t> stride(n, 1);
  for (int j = n - 2; j >= 0; --j) stride[j] = stride[j + 1] * sys.grid->factors[j + 1].size();

  sys.weights.resize(U);
  for (std::size_t i = 0; i < U; ++i) sys.weights[i] = sys.grid->weight(i);

  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(n) * U * 7);
  sys.rhs.resize(static_cast<Eigen::Index>(n) * U);

  std::vector<cplx> pt(n);
  std::vector<std::size_t> idx(n);
  for (std::size_t flat = 0; flat < U; ++flat) {
    sys.grid->decompose(flat, idx);
    sys.grid->point(flat, pt);
    for (int j = 0; j < n; ++j) {
      const TensorPolarGrid& g = sys.grid->factors[j];
      const double R = g.domain.disc_radius();
      const double dr = R / g.nr;
      const double dth = kTwoPi / g.ntheta;
      const int a = static_cast<int>(idx[j]) / g.ntheta;
      const int b = static_cast<int>(idx[j]) % g.ntheta;
      const double r = g.r_rel[a] * R;
      const cplx phase = std::polar(0.5, g.theta[b]);  // (1/2) e^{i theta}
      const Eigen::Index row = static_cast<Eigen::Index>(j) * U + flat;

      auto at = [&](int aa, int bb) {
        std::size_t local = static_cast<std::size_t>(aa) * g.ntheta +
                            static_cast<std::size_t>((bb % g.ntheta + g.ntheta) % g.ntheta);
        return flat + (local - idx[j]) * stride[j];
      };
      // radial part
      if (a == 0) {
        trips.emplace_back(row, at(0, b), phase * (-1.5 / dr));
        trips.emplace_back(row, at(1, b), phase * (2.0 / dr));
        trips.emplace_back(row, at(2, b), phase * (-0.5 / dr));
      } else if (a == g.nr - 1) {
        trips.emplace_back(row, at(a, b), phase * (1.5 / dr));
        trips.emplace_back(row, at(a - 1, b), phase * (-2.0 / dr));
        trips.emplace_back(row, at(a - 2, b), phase * (0.5 / dr));
      } else {
        trips.emplace_back(row, at(a + 1, b), phase * (0.5 / dr));
        trips.emplace_back(row, at(a - 1, b), phase * (-0.5 / dr));
      }
      // angular part: (i / r) * fourth-order periodic centered difference
      cplx ang = phase * kImag / r / (12.0 * dth);
      trips.emplace_back(row, at(a, b - 2), ang * 1.0);
      trips.emplace_back(row, at(a, b - 1), ang * -8.0);
      trips.emplace_back(row, at(a, b + 1), ang * 8.0);
      trips.emplace_back(row, at(a, b + 2), ang * -1.0);

      sys.rhs[row] = component(j, pt);
    }
  }
  sys.op.resize(static_cast<Eigen::Index>(n) * U, static_cast<Eigen::Index>(U));
  sys.op.setFromTriplets(trips.begin(), trips.end());
  sys.op.makeCompressed();
  return sys;
}

namespace {

// LSQR for min ||x|| s.t. A x = b (consistent underdetermined case), complex.
struct LsqrOutcome {
  Eigen::VectorXcd x;
  int iterations = 0;
  double rel_residual = 0.0;
};

template <class ApplyA, class ApplyAH>
LsqrOutcome lsqr(const ApplyA& applyA, const ApplyAH& applyAH, const Eigen::VectorXcd& b,
                 Eigen::Index cols, double tol, int maxiter) {
  LsqrOutcome out;
  out.x = Eigen::VectorXcd::Zero(cols);

  Eigen::VectorXcd u = b;
  double beta = u.norm();
  if (beta == 0.0) return out;
  u /= beta;
  Eigen::VectorXcd v = applyAH(u);
  double alpha = v.norm();
  if (alpha == 0.0) return out;
  v /= alpha;
  Eigen::VectorXcd w = v;

  double phibar = beta, rhobar = alpha;
  double anorm = 0.0;
  const double bnorm = beta;

  for (int it = 1; it <= maxiter; ++it) {
    u = applyA(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    Eigen::VectorXcd v_next = applyAH(u) - beta * v;
    alpha = v_next.norm();
    if (alpha > 0.0) v_next /= alpha;
    v = v_next;

    anorm = std::hypot(anorm, std::hypot(alpha, beta));
    double rho = std::hypot(rhobar, beta);
    double c = rhobar / rho, s = beta / rho;
    double theta = s * alpha;
    rhobar = -c * alpha;
    double phi = c * phibar;
    phibar = s * phibar;

    out.x += (phi / rho) * w;
    w = v - (theta / rho) * w;
    out.iterations = it;

    double arnorm = phibar * alpha * std::abs(c);  // ||A^H r||
    if (phibar <= tol * bnorm) break;
    if (arnorm <= tol * std::max(anorm, 1e-30) * std::max(phibar, 1e-30)) break;
  }
  out.rel_residual = phibar / bnorm;
  return out;
}

}  // namespace

LeastNormResult least_norm_solve(const DiscreteDbarSystem& sys, const LeastNormOptions& opts) {
  const Eigen::Index U = static_cast<Eigen::Index>(sys.unknowns());
  Eigen::VectorXd scale = sys.weights.cwiseSqrt();
  Eigen::VectorXd inv_scale = scale.cwiseInverse();
  Eigen::SparseMatrix<cplx> adj = sys.op.adjoint();

  auto applyA = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    Eigen::VectorXcd scaled(U);
    for (Eigen::Index i = 0; i < U; ++i) scaled[i] = v[i] * inv_scale[i];
    return sys.op * scaled;
  };
  auto applyAH = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    Eigen::VectorXcd t = adj * y;
    for (Eigen::Index i = 0; i < U; ++i) t[i] *= inv_scale[i];
    return t;
  };

  LsqrOutcome sol = lsqr(applyA, applyAH, sys.rhs, U, opts.tol, opts.max_iterations);

  // undo the column scaling: x solves the weighted least-norm problem
  Eigen::VectorXcd x(U);
  for (Eigen::Index i = 0; i < U; ++i) x[i] = sol.x[i] * inv_scale[i];

  double res = (sys.op * x - sys.rhs).norm();
  double bn = sys.rhs.norm();
  double rel = bn > 0.0 ? res / bn : 0.0;
  if (rel > opts.consistency_tol)
    fail(ErrorKind::Data, "least_norm_solve: system inconsistent (relative residual " +
                              std::to_string(rel) + "); data may not be dbar-closed at grid scale");

  LeastNormResult result;
  result.iterations = sol.iterations;
  result.rel_residual = rel;
  result.field.grid = sys.grid;
  result.field.values.assign(x.data(), x.data() + U);
  result.field.finalize();
  return result;
}

}  // namespace dbar
