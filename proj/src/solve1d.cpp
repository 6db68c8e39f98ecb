#include "dbar/solve1d.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dbar {

cplx solve_T_at(const KernelSet& ks, const std::function<cplx(cplx)>& f, cplx w,
                const SingularQuadControls& controls) {
  const PlanarDomain& dom = ks.domain();
  if (!dom.contains(w, 0.0))
    fail(ErrorKind::DomainMembership, "solve_T: target on or outside the boundary");
  AreaQuadrature q = singular_area_quadrature(dom, w, controls);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    cplx fv = f(q.nodes[i]);
    if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
      fail(ErrorKind::Data, "solve_T: unbounded data sample");
    acc += ks.S(w, q.nodes[i]) * fv * q.weights[i];
  }
  return 2.0 * kImag * acc;  // dzbar ^ dz = 2i dA
}

SolutionField solve_T(const KernelSet& ks, const ScalarData& data,
                      std::shared_ptr<const ProductGrid> targets,
                      const SingularQuadControls& controls) {
  if (!targets || targets->n() != 1)
    fail(ErrorKind::Parameter, "solve_T: targets must form a one-factor grid");
  SolutionField out;
  out.grid = targets;
  out.values.resize(targets->size());
  const auto& pts = targets->factors[0].points;
  parallel_for(pts.size(), [&](std::size_t i) {
    out.values[i] = solve_T_at(ks, data.f, pts[i], controls);
  });
  out.finalize();
  return out;
}

cplx bergman_project_1d_at(const KernelSet& ks, const std::function<cplx(cplx)>& u, cplx w,
                           const AreaQuadrature& quad) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i)
    acc += ks.K(w, quad.nodes[i]) * u(quad.nodes[i]) * quad.weights[i];
  return acc;
}

SolutionField bergman_project_1d(const KernelSet& ks, const std::function<cplx(cplx)>& u,
                                 std::shared_ptr<const ProductGrid> targets,
                                 const AreaQuadrature& quad) {
  if (!targets || targets->n() != 1)
    fail(ErrorKind::Parameter, "bergman_project_1d: targets must form a one-factor grid");
  SolutionField out;
  out.grid = targets;
  out.values.resize(targets->size());
  const auto& pts = targets->factors[0].points;
  parallel_for(pts.size(), [&](std::size_t i) {
    out.values[i] = bergman_project_1d_at(ks, u, pts[i], quad);
  });
  out.finalize();
  return out;
}

SolutionField bergman_project_1d(const KernelSet& ks, const SolutionField& u) {
  if (!u.grid || u.grid->n() != 1)
    fail(ErrorKind::Parameter, "bergman_project_1d: field must live on a one-factor grid");
  const auto& g = u.grid->factors[0];
  SolutionField out;
  out.grid = u.grid;
  out.values.resize(u.values.size());
  parallel_for(u.values.size(), [&](std::size_t i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < u.values.size(); ++k)
      acc += ks.K(g.points[i], g.points[k]) * u.values[k] * g.weights[k];
    out.values[i] = acc;
  });
  out.finalize();
  return out;
}

std::vector<double> canonicity_defect(const SolutionField& u, int max_degree) {
  if (!u.grid || u.grid->n() != 1)
    fail(ErrorKind::Parameter, "canonicity_defect: field must live on a one-factor grid");
  const auto& g = u.grid->factors[0];
  const int m = max_degree + 1;

  // Gram matrix of monomials under the grid quadrature, then orthonormalize
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd moments = Eigen::VectorXcd::Zero(m);
  double unorm2 = 0.0;
  std::vector<cplx> pw(m);
  for (int i = 0; i < g.size(); ++i) {
    cplx z = g.points[i];
    double w = g.weights[i];
    pw[0] = 1.0;
    for (int k = 1; k < m; ++k) pw[k] = pw[k - 1] * z;
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k <= j; ++k) gram(j, k) += w * pw[j] * std::conj(pw[k]);
      moments[j] += w * u.values[i] * std::conj(pw[j]);
    }
    unorm2 += w * std::norm(u.values[i]);
  }
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) gram(j, k) = std::conj(gram(k, j));

  std::vector<double> defects(m, 0.0);
  if (unorm2 <= 0.0) return defects;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::Parameter, "canonicity_defect: monomial Gram matrix not positive definite");
  // e = L^{-1} m gives <u, e_j> = conj( (L^{-1} conj(moments))_j )
  Eigen::VectorXcd coeff = llt.matrixL().solve(moments.conjugate());
  double unorm = std::sqrt(unorm2);
  for (int j = 0; j < m; ++j) defects[j] = std::abs(coeff[j]) / unorm;
  return defects;
}

double dbar_residual_probe(const KernelSet& ks, const ScalarData& data, int n_probes,
                           std::uint64_t seed, const SingularQuadControls& controls,
                           double fd_step_rel) {
  const PlanarDomain& dom = ks.domain();
  Rng rng(seed);
  double worst = 0.0, fsup = 0.0;
  int done = 0;
  while (done < n_probes) {
    double th = rng.uniform(0.0, kTwoPi);
    cplx z = dom.center() + std::polar(rng.uniform01() * dom.boundary_radius(th), th);
    if (dom.distance_to_boundary(z) < 0.1 * dom.diameter()) continue;
    ++done;
    double h = fd_step_rel * dom.distance_to_boundary(z);
    auto T = [&](cplx p) { return solve_T_at(ks, data.f, p, controls); };
    cplx dx = (T(z + h) - T(z - h)) / (2.0 * h);
    cplx dy = (T(z + h * kImag) - T(z - h * kImag)) / (2.0 * h);
    cplx dbar = 0.5 * (dx + kImag * dy);
    worst = std::max(worst, std::abs(dbar - data.f(z)));
    fsup = std::max(fsup, std::abs(data.f(z)));
  }
  return worst / std::max(fsup, 1e-300);
}

namespace {

void require_admissible(double p, double q) {
  bool ok;
  if (p < 1.0) {
    ok = false;
  } else if (p <= 2.0) {
    double limit = (p < 2.0) ? 2.0 * p / (2.0 - p) : std::numeric_limits<double>::infinity();
    ok = q > 0.0 && q < limit;
  } else {
    ok = std::isinf(q);
  }
  if (!ok)
    fail(ErrorKind::Parameter,
         "norm_bound_probe: inadmissible (p, q); admissible are q in (0, 2p/(2-p)) for p in "
         "[1, 2] and q = inf for p in (2, inf]");
}

double discrete_norm(const std::vector<cplx>& v, const ProductGrid& g, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p) * g.weight(i);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

EstimateReport norm_bound_probe(const KernelSet& ks, const std::vector<ScalarData>& family,
                                double p, double q, int grid_nr, int grid_ntheta,
                                const SingularQuadControls& controls) {
  require_admissible(p, q);
  if (family.empty()) fail(ErrorKind::Parameter, "norm_bound_probe: empty family");
  auto grid = product_grid({tensor_polar_grid(ks.domain(), grid_nr, grid_ntheta)});

  EstimateReport rep;
  rep.inequality = "pq-bound";
  rep.samples = static_cast<long long>(family.size());
  rep.grid["nr"] = grid_nr;
  rep.grid["ntheta"] = grid_ntheta;
  rep.grid["p"] = p;
  rep.grid["q"] = q;
  for (const auto& data : family) {
    SolutionField tf = solve_T(ks, data, grid, controls);
    std::vector<cplx> fv(grid->size());
    for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = data.f(grid->factors[0].points[i]);
    double nf = discrete_norm(fv, *grid, p);
    double nt = discrete_norm(tf.values, *grid, q);
    double ratio = nf > 0.0 ? nt / nf : 0.0;
    rep.supremum = std::max(rep.supremum, ratio);
  }
  return rep;
}

EstimateReport projection_bound_probe(const KernelSet& ks,
                                      const std::vector<DifferentiableField>& family,
                                      int grid_nr, int grid_ntheta,
                                      const SingularQuadControls& controls) {
  if (family.empty()) fail(ErrorKind::Parameter, "projection_bound_probe: empty family");
  const PlanarDomain& dom = ks.domain();
  auto grid = product_grid({tensor_polar_grid(dom, grid_nr, grid_ntheta)});
  const auto& pts = grid->factors[0].points;

  EstimateReport rep;
  rep.inequality = "projection-bound";
  rep.samples = static_cast<long long>(family.size());
  rep.grid["nr"] = grid_nr;
  rep.grid["ntheta"] = grid_ntheta;

  std::vector<double> usup(family.size()), dsup(family.size()), psup(family.size());
  double fitted = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& item = family[k];
    std::function<cplx(cplx)> dbar = item.dbar;
    if (!dbar) {
      // differentiability check: two-scale finite differences must agree
      Rng rng(1234);
      for (int t = 0; t < 600; ++t) {
        double th = rng.uniform(0.0, kTwoPi);
        cplx z = dom.center() +
                 std::polar(0.9 * rng.uniform01() * dom.boundary_radius(th), th);
        cplx c1 = wirtinger_dzbar_fd(item.u, z, 4e-3 * dom.diameter());
        cplx c2 = wirtinger_dzbar_fd(item.u, z, 1e-3 * dom.diameter());
        if (std::abs(c1 - c2) > 0.05 * std::max(1.0, std::abs(c2)))
          fail(ErrorKind::Data, "projection_bound_probe: sample not differentiable");
      }
      auto uf = item.u;
      double h = 1e-4 * dom.diameter();
      dbar = [uf, h](cplx z) { return wirtinger_dzbar_fd(uf, z, h); };
    }
    ScalarData d{dbar, item.name + "_dbar"};
    SolutionField tdbar = solve_T(ks, d, grid, controls);
    double un = 0.0, dn = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cplx uv = item.u(pts[i]);
      un = std::max(un, std::abs(uv));
      dn = std::max(dn, std::abs(dbar(pts[i])));
      pn = std::max(pn, std::abs(uv - tdbar.values[i]));  // P u = u - T dbar u
    }
    usup[k] = un;
    dsup[k] = dn;
    psup[k] = pn;
    double ratio = dn > 0.0 ? tdbar.sup_norm / dn : 0.0;
    if (ratio > fitted) fitted = ratio;
  }
  rep.supremum = fitted;
  bool verified = true;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (psup[k] > usup[k] + fitted * dsup[k] + 1e-9) verified = false;
  }
  rep.extras["pu_bound_verified"] = verified ? 1.0 : 0.0;
  return rep;
}

}  // namespace dbar
