#include "dbar/greens.hpp"

#include <cmath>

namespace dbar {

namespace {

// double-layer kernel (1/2pi) <n(zeta), zeta - z> / |zeta - z|^2
inline double dl_kernel(cplx z, cplx zeta, cplx normal) {
  cplx d = zeta - z;
  double dot = normal.real() * d.real() + normal.imag() * d.imag();
  return dot / (kTwoPi * std::norm(d));
}

}  // namespace

DirichletSolver::DirichletSolver(const PlanarDomain& dom, int n)
    : dom_(dom), bq_(boundary_quadrature(dom, n)) {
  normals_.resize(n);
  layer_coeff_.resize(n);
  for (int i = 0; i < n; ++i) {
    cplx tang = bq_.tangents[i];
    normals_[i] = -kImag * tang / std::abs(tang);  // outward for positive orientation
    layer_coeff_[i] = std::abs(tang) * bq_.weights[i] / kTwoPi;
    max_spacing_ = std::max(max_spacing_, std::abs(tang) * bq_.weights[i]);
  }

  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double k;
      if (i == j) {
        // smooth-curve diagonal limit of the double-layer kernel
        double t = kTwoPi * i / n;
        k = dom.signed_curvature(t) * std::abs(bq_.tangents[i]) / (2.0 * kTwoPi);
      } else {
        k = dl_kernel(bq_.nodes[i], bq_.nodes[j], normals_[j]) * std::abs(bq_.tangents[j]);
      }
      A(i, j) = k * bq_.weights[j];
    }
    A(i, i) += 0.5;
  }
  lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(A);
}

Eigen::VectorXcd DirichletSolver::solve_density(const Eigen::VectorXcd& boundary_values) const {
  if (boundary_values.size() != bq_.count)
    fail(ErrorKind::Parameter, "solve_density: boundary data size mismatch");
  Eigen::VectorXd re = lu_.solve(boundary_values.real());
  Eigen::VectorXd im = lu_.solve(boundary_values.imag());
  return re + cplx(0, 1) * im;
}

int DirichletSolver::nearest_node(cplx z) const {
  int best = 0;
  double bd = 1e300;
  for (int j = 0; j < bq_.count; ++j) {
    double d = std::norm(bq_.nodes[j] - z);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

// Density subtraction: the double layer of a constant density is that
// constant inside, so evaluating DL[mu - mu(nearest)] + mu(nearest) cancels
// the quadrature blow-up of the kernel near the boundary.
cplx DirichletSolver::eval(const Eigen::VectorXcd& density, cplx z) const {
  cplx mu0 = density[nearest_node(z)];
  cplx acc = 0.0;
  for (int j = 0; j < bq_.count; ++j) {
    acc += (density[j] - mu0) * layer_coeff_[j] *
           (kTwoPi * dl_kernel(z, bq_.nodes[j], normals_[j]));
  }
  return acc + mu0;
}

std::pair<cplx, cplx> DirichletSolver::eval_wirtinger(const Eigen::VectorXcd& density,
                                                      cplx z) const {
  cplx mu0 = density[nearest_node(z)];
  cplx dz = 0.0, dzb = 0.0;
  for (int j = 0; j < bq_.count; ++j) {
    cplx d = bq_.nodes[j] - z;
    cplx coeff = (density[j] - mu0) * layer_coeff_[j] * 0.5;
    dz += coeff * normals_[j] / (d * d);
    dzb += coeff * std::conj(normals_[j]) / std::conj(d * d);
  }
  return {dz, dzb};
}

bool DirichletSolver::near_boundary(cplx z) const {
  return dom_.distance_to_boundary(z) < 5.0 * max_spacing_;
}

cplx HarmonicField::value(cplx z) const {
  if (!solver_->domain().contains(z, 0.0))
    fail(ErrorKind::DomainMembership, "HarmonicField: evaluation point not strictly inside");
  return solver_->eval(density_, z);
}

std::pair<cplx, cplx> HarmonicField::wirtinger(cplx z) const {
  if (!solver_->domain().contains(z, 0.0))
    fail(ErrorKind::DomainMembership, "HarmonicField: evaluation point not strictly inside");
  return solver_->eval_wirtinger(density_, z);
}

HarmonicField dirichlet_solve(std::shared_ptr<const DirichletSolver> solver,
                              const std::function<cplx(cplx)>& data) {
  const auto& bq = solver->quad();
  Eigen::VectorXcd g(bq.count);
  for (int i = 0; i < bq.count; ++i) {
    cplx v = data(bq.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::Data, "dirichlet_solve: boundary data is singular at a node");
    g[i] = v;
  }
  return HarmonicField(solver, solver->solve_density(g));
}

HarmonicField dirichlet_solve(const PlanarDomain& dom, const std::function<cplx(cplx)>& data,
                              int n) {
  return dirichlet_solve(std::make_shared<DirichletSolver>(dom, n), data);
}

GreenEvaluator GreenEvaluator::closed_form_disc(const PlanarDomain& disc) {
  if (!disc.is_disc()) fail(ErrorKind::Parameter, "closed_form_disc: domain must be a disc");
  GreenEvaluator ev;
  ev.method_ = GreenMethod::ClosedFormDisc;
  ev.dom_ = disc;
  return ev;
}

GreenEvaluator GreenEvaluator::nystrom(const PlanarDomain& dom, int n) {
  GreenEvaluator ev;
  ev.method_ = GreenMethod::Nystrom;
  ev.dom_ = dom;
  ev.solver_ = std::make_shared<DirichletSolver>(dom, n);
  return ev;
}

void GreenEvaluator::require_pair(cplx z, cplx w) const {
  if (!dom_.contains(z, 0.0) || !dom_.contains(w, 0.0))
    fail(ErrorKind::DomainMembership, "green: both points must be interior");
  if (std::abs(z - w) < 1e-8 * dom_.diameter())
    fail(ErrorKind::Singularity, "green: evaluation too close to the diagonal");
}

Eigen::VectorXcd GreenEvaluator::corrector_density(cplx w) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    for (auto it = cache_->entries.begin(); it != cache_->entries.end(); ++it) {
      if (it->w == w) {
        CacheEntry hit = *it;
        cache_->entries.erase(it);
        cache_->entries.push_front(hit);
        return cache_->entries.front().density;
      }
    }
  }
  const auto& bq = solver_->quad();
  Eigen::VectorXcd g(bq.count);
  for (int i = 0; i < bq.count; ++i) g[i] = std::log(std::abs(bq.nodes[i] - w)) / kTwoPi;
  Eigen::VectorXcd density = solver_->solve_density(g);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->entries.push_front(CacheEntry{w, density});
    if (cache_->entries.size() > 8) cache_->entries.pop_back();
  }
  return density;
}

double GreenEvaluator::green(cplx z, cplx w) const {
  require_pair(z, w);
  if (method_ == GreenMethod::ClosedFormDisc) {
    double R = dom_.disc_radius();
    cplx zeta = (z - dom_.center()) / R, omega = (w - dom_.center()) / R;
    return std::log(std::abs((1.0 - zeta * std::conj(omega)) / (zeta - omega))) / kTwoPi;
  }
  Eigen::VectorXcd mu = corrector_density(w);
  double h = solver_->eval(mu, z).real();
  return -std::log(std::abs(z - w)) / kTwoPi + h;
}

cplx GreenEvaluator::green_dz(cplx z, cplx w) const {
  require_pair(z, w);
  if (method_ == GreenMethod::ClosedFormDisc) {
    double R = dom_.disc_radius();
    cplx zeta = (z - dom_.center()) / R, omega = (w - dom_.center()) / R;
    cplx d_zeta =
        (-std::conj(omega) / (1.0 - zeta * std::conj(omega)) - 1.0 / (zeta - omega)) / (2.0 * kTwoPi);
    return d_zeta / R;
  }
  Eigen::VectorXcd mu = corrector_density(w);
  cplx dz = solver_->eval_wirtinger(mu, z).first;
  return dz - 0.5 / (kTwoPi * (z - w));
}

std::array<double, 2> GreenEvaluator::green_gradient(cplx z, cplx w) const {
  cplx dz = green_dz(z, w);
  return {2.0 * dz.real(), -2.0 * dz.imag()};
}

std::string green_bound_name(GreenBoundKind which) {
  switch (which) {
    case GreenBoundKind::GBound:
      return "G-bound";
    case GreenBoundKind::G2Bound:
      return "g2-bound";
    case GreenBoundKind::GdBound:
      return "Gd-bound";
    case GreenBoundKind::LogBound:
      return "log-bound";
  }
  return "?";
}

EstimateReport fit_green_bounds(const GreenEvaluator& ev, const PairSampler& sampler,
                                GreenBoundKind which, int base_samples) {
  if (base_samples < 1000)
    fail(ErrorKind::Parameter, "fit_green_bounds: need at least 1e3 sample pairs");
  const PlanarDomain& dom = ev.domain();
  const double d = dom.diameter();
  Rng rng(sampler.seed);

  // rejection sampler, uniform over the domain with the configured margins
  double rbound = 0.0;
  for (int i = 0; i < 256; ++i) rbound = std::max(rbound, dom.boundary_radius(kTwoPi * i / 256));
  auto draw_point = [&]() {
    for (;;) {
      cplx z = dom.center() + cplx(rng.uniform(-rbound, rbound), rng.uniform(-rbound, rbound));
      if (!dom.contains(z, 1e-12)) continue;
      if (sampler.delta_margin_rel > 0.0 &&
          dom.distance_to_boundary(z) < sampler.delta_margin_rel * d)
        continue;
      return z;
    }
  };

  EstimateReport report;
  report.inequality = green_bound_name(which);
  report.seed = sampler.seed;
  report.samples = 2LL * base_samples;

  double sup_base = 0.0, sup_all = 0.0;
  double sup_extra = 0.0, sup_extra_base = 0.0;  // second quantity of the Gd bound
  for (int i = 0; i < 2 * base_samples; ++i) {
    cplx w = draw_point(), z = draw_point();
    if (std::abs(z - w) < sampler.min_sep_rel * d) {
      --i;
      continue;
    }
    double sep = std::abs(z - w);
    double lg = std::log(d / sep);
    if (lg <= 0.0) continue;
    double value = 0.0;
    switch (which) {
      case GreenBoundKind::GBound:
        value = ev.green(z, w) * sep / (dom.distance_to_boundary(w) * lg);
        break;
      case GreenBoundKind::G2Bound:
        value = ev.green(z, w) * sep * sep /
                (dom.distance_to_boundary(z) * dom.distance_to_boundary(w) * lg);
        break;
      case GreenBoundKind::GdBound: {
        // |grad G| in either slot, by symmetry of G
        auto g1 = ev.green_gradient(z, w);
        auto g2 = ev.green_gradient(w, z);
        double n1 = std::hypot(g1[0], g1[1]);
        double n2 = std::hypot(g2[0], g2[1]);
        value = std::max(n1, n2) * sep / lg;
        double second = n1 * sep * sep / (dom.distance_to_boundary(w) * lg);
        sup_extra = std::max(sup_extra, second);
        break;
      }
      case GreenBoundKind::LogBound:
        value = kTwoPi * ev.green(z, w) / lg;
        break;
    }
    if (value > sup_all) {
      sup_all = value;
      report.argmax_w = w;
      report.argmax_z = z;
    }
    if (i + 1 == base_samples) {
      sup_base = sup_all;
      sup_extra_base = sup_extra;
    }
  }
  report.supremum = sup_all;
  report.stability_ratio = sup_base > 0.0 ? sup_all / sup_base : 1.0;
  if (which == GreenBoundKind::GdBound) {
    report.extras["grad_z_delta_weighted_sup"] = sup_extra;
    report.extras["grad_z_delta_weighted_stability"] =
        sup_extra_base > 0.0 ? sup_extra / sup_extra_base : 1.0;
  }
  report.grid["delta_margin_rel"] = sampler.delta_margin_rel;
  return report;
}

}  // namespace dbar
