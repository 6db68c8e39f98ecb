#include "dbar/kernels.hpp"

#include <cmath>

namespace dbar {

cplx kernel_H(cplx w, cplx z) {
  if (z == w) fail(ErrorKind::Singularity, "kernel_H: coincident points");
  return 1.0 / (kTwoPi * kImag * (z - w));
}

KernelSet KernelSet::closed_form_disc(const PlanarDomain& disc) {
  if (!disc.is_disc()) fail(ErrorKind::Parameter, "closed_form_disc: domain must be a disc");
  KernelSet ks;
  ks.closed_form_ = true;
  ks.dom_ = disc;
  return ks;
}

KernelSet KernelSet::nystrom(const PlanarDomain& dom, int n) {
  KernelSet ks;
  ks.closed_form_ = false;
  ks.dom_ = dom;
  ks.solver_ = std::make_shared<DirichletSolver>(dom, n);
  return ks;
}

KernelSet KernelSet::make(const PlanarDomain& dom, int n) {
  return dom.is_disc() ? closed_form_disc(dom) : nystrom(dom, n);
}

void KernelSet::require_w(cplx w) const {
  if (!dom_.contains(w, 1e-12 * dom_.diameter()))
    fail(ErrorKind::DomainMembership, "kernel: w must be strictly interior");
}

void KernelSet::require_z(cplx z) const {
  if (!dom_.contains(z, 0.0) && !dom_.on_boundary(z, 1e-9 * dom_.diameter()))
    fail(ErrorKind::DomainMembership, "kernel: z must lie in the closed domain");
}

Eigen::VectorXcd KernelSet::cauchy_density(cplx w) const {
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
  for (int i = 0; i < bq.count; ++i) g[i] = kernel_H(w, bq.nodes[i]);
  Eigen::VectorXcd density = solver_->solve_density(g);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->entries.push_front(CacheEntry{w, density});
    if (cache_->entries.size() > 16) cache_->entries.pop_back();
  }
  return density;
}

cplx KernelSet::L(cplx w, cplx z) const {
  require_w(w);
  require_z(z);
  if (closed_form_) {
    double R = dom_.disc_radius();
    cplx omega = (w - dom_.center()) / R, zeta = (z - dom_.center()) / R;
    return std::conj(zeta) / (kTwoPi * kImag * R * (1.0 - omega * std::conj(zeta)));
  }
  if (dom_.on_boundary(z, 1e-9 * dom_.diameter())) return kernel_H(w, z);
  return solver_->eval(cauchy_density(w), z);
}

cplx KernelSet::S(cplx w, cplx z) const {
  require_w(w);
  require_z(z);
  if (std::abs(z - w) < 1e-8 * dom_.diameter())
    fail(ErrorKind::Singularity, "kernel_S: evaluation too close to the diagonal");
  if (closed_form_) {
    double R = dom_.disc_radius();
    cplx omega = (w - dom_.center()) / R, zeta = (z - dom_.center()) / R;
    return (std::norm(zeta) - 1.0) /
           (kTwoPi * kImag * R * (1.0 - omega * std::conj(zeta)) * (zeta - omega));
  }
  return L(w, z) - kernel_H(w, z);
}

cplx KernelSet::K(cplx w, cplx z) const {
  require_w(w);
  require_z(z);
  if (closed_form_) {
    double R = dom_.disc_radius();
    cplx omega = (w - dom_.center()) / R, zeta = (z - dom_.center()) / R;
    cplx q = 1.0 - omega * std::conj(zeta);
    return 1.0 / (kPi * R * R * q * q);
  }
  if (std::abs(z - w) < 1e-8 * dom_.diameter())
    fail(ErrorKind::Singularity, "kernel_K: nystrom evaluation requires off-diagonal points");
  return 2.0 * kImag * solver_->eval_wirtinger(cauchy_density(w), z).second;
}

std::pair<cplx, cplx> KernelSet::S_gradient(cplx w, cplx z) const {
  require_w(w);
  require_z(z);
  if (std::abs(z - w) < 1e-8 * dom_.diameter())
    fail(ErrorKind::Singularity, "kernel_S_gradient: off-diagonal points required");
  cplx dH = -1.0 / (kTwoPi * kImag * (z - w) * (z - w));
  if (closed_form_) {
    // L is anti-holomorphic in z on a disc, so dS/dz = -dH/dz there
    return {-dH, K(w, z) / (2.0 * kImag)};
  }
  auto [dz, dzb] = solver_->eval_wirtinger(cauchy_density(w), z);
  return {dz - dH, dzb};
}

cplx kernel_L_ring(const GreenEvaluator& green, cplx w, cplx z, double epsilon, int n_nodes) {
  const PlanarDomain& dom = green.domain();
  if (!dom.contains(w, 0.0)) fail(ErrorKind::DomainMembership, "ring form: w must be interior");
  double ceiling = 0.5 * std::min(std::abs(z - w), dom.distance_to_boundary(w));
  if (epsilon < 0.0) epsilon = 0.5 * ceiling;
  if (!(epsilon > 0.0) || epsilon > ceiling)
    fail(ErrorKind::Parameter, "ring form: epsilon out of the admissible range");
  cplx ring = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    double t = kTwoPi * i / n_nodes;
    ring += green.green(w + std::polar(epsilon, t), z) * std::polar(1.0, -t);
  }
  ring *= kTwoPi / n_nodes;
  return kernel_H(w, z) - ring / (epsilon * kPi * kImag);
}

std::string decay_name(DecayKind which) {
  switch (which) {
    case DecayKind::SFirst:
      return "S-first";
    case DecayKind::SSecond:
      return "S-second";
    case DecayKind::GradS:
      return "gradS";
    case DecayKind::KBound:
      return "K-bound";
  }
  return "?";
}

namespace {

double grad_magnitude(const std::pair<cplx, cplx>& g) {
  return std::sqrt(std::norm(g.first) + std::norm(g.second));
}

double kernel_magnitude(const KernelSet& ks, DecayKind which, cplx w, cplx z) {
  switch (which) {
    case DecayKind::SFirst:
    case DecayKind::SSecond:
      return std::abs(ks.S(w, z));
    case DecayKind::GradS:
      return grad_magnitude(ks.S_gradient(w, z));
    case DecayKind::KBound:
      return std::abs(ks.K(w, z));
  }
  return 0.0;
}

}  // namespace

EstimateReport fit_kernel_decay(const KernelSet& ks, const PairSampler& sampler, DecayKind which,
                                int base_samples) {
  if (base_samples < 1000)
    fail(ErrorKind::Parameter, "fit_kernel_decay: need at least 1e3 sample pairs");
  const PlanarDomain& dom = ks.domain();
  const double d = dom.diameter();
  Rng rng(sampler.seed);

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
  report.inequality = decay_name(which);
  report.seed = sampler.seed;
  report.samples = 2LL * base_samples;

  double sup_base = 0.0, sup_all = 0.0;
  for (int i = 0; i < 2 * base_samples; ++i) {
    cplx w = draw_point(), z = draw_point();
    double sep = std::abs(z - w);
    if (sep < std::max(sampler.min_sep_rel, 1e-7) * d) {
      --i;
      continue;
    }
    double value = 0.0;
    switch (which) {
      case DecayKind::SFirst:
        value = std::abs(ks.S(w, z)) * sep / std::log(2.0 * d / sep);
        break;
      case DecayKind::SSecond:
        value = std::abs(ks.S(w, z)) * sep * sep /
                (dom.distance_to_boundary(z) * std::log(2.0 * d / sep));
        break;
      case DecayKind::GradS:
        value = grad_magnitude(ks.S_gradient(w, z)) * sep * sep / std::log(2.0 * d / sep);
        break;
      case DecayKind::KBound:
        value = std::abs(ks.K(w, z)) * sep * sep / std::log(d / sep);
        break;
    }
    if (value > sup_all) {
      sup_all = value;
      report.argmax_w = w;
      report.argmax_z = z;
    }
    if (i + 1 == base_samples) sup_base = sup_all;
  }
  report.supremum = sup_all;
  report.stability_ratio = sup_base > 0.0 ? sup_all / sup_base : 1.0;

  // radial profile sup_{|z-w|=rho} |kernel| on log-spaced radii; the sampler
  // includes a boundary-hugging population because the profile peaks there
  const int n_radii = 8;
  const int n_dirs = 1200;
  double lo = 0.02 * d, hi = 0.25 * d;
  std::vector<double> lr, lv;
  for (int k = 0; k < n_radii; ++k) {
    double rho = lo * std::pow(hi / lo, k / double(n_radii - 1));
    double prof = 0.0;
    int got = 0;
    while (got < n_dirs) {
      cplx w;
      if (got % 2 == 0) {
        w = draw_point();
      } else {
        double th = rng.uniform(0.0, kTwoPi);
        double margin = rng.uniform01() * 1.5 * rho + 1e-4 * d;
        double rb = dom.boundary_radius(th);
        if (margin >= rb) continue;
        w = dom.center() + std::polar(rb - margin, th);
      }
      cplx z = w + std::polar(rho, rng.uniform(0.0, kTwoPi));
      ++got;
      if (!dom.contains(z, 1e-12)) continue;
      prof = std::max(prof, kernel_magnitude(ks, which, w, z));
    }
    lr.push_back(std::log(rho));
    lv.push_back(std::log(prof));
  }
  double mx = 0, my = 0;
  for (int k = 0; k < n_radii; ++k) {
    mx += lr[k];
    my += lv[k];
  }
  mx /= n_radii;
  my /= n_radii;
  double sxx = 0, sxy = 0;
  for (int k = 0; k < n_radii; ++k) {
    sxx += (lr[k] - mx) * (lr[k] - mx);
    sxy += (lr[k] - mx) * (lv[k] - my);
  }
  report.has_slope = true;
  report.slope = sxy / sxx;
  report.grid["profile_radii"] = n_radii;
  report.grid["profile_dirs"] = n_dirs;
  return report;
}

std::vector<StabilityRow> stability_probe(const PlanarDomain& dom, const std::vector<int>& levels,
                                          double kappa_fraction, int nystrom_n) {
  if (levels.empty()) fail(ErrorKind::Parameter, "stability_probe: no levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) fail(ErrorKind::Parameter, "stability_probe: levels must increase");

  double inradius = 1e300;
  for (int i = 0; i < 512; ++i)
    inradius = std::min(inradius, dom.boundary_radius(kTwoPi * i / 512));
  double kappa_radius = kappa_fraction * inradius;

  KernelSet outer = KernelSet::make(dom, nystrom_n);
  const double d = dom.diameter();

  // sample grids: w over the compact kappa disc, z over the closure
  std::vector<cplx> ws, zs;
  for (int a = 1; a <= 6; ++a)
    for (int b = 0; b < 12; ++b)
      ws.push_back(dom.center() + std::polar(kappa_radius * a / 6.0, kTwoPi * b / 12.0));
  ws.push_back(dom.center());
  for (int a = 1; a <= 14; ++a) {
    for (int b = 0; b < 24; ++b) {
      double th = kTwoPi * b / 24.0;
      double rel = (a <= 12) ? a / 12.0 * 0.98 : (a == 13 ? 0.995 : 1.0);
      zs.push_back(dom.center() + std::polar(rel * dom.boundary_radius(th), th));
    }
  }

  std::vector<StabilityRow> rows;
  for (int level : levels) {
    ExhaustionStep step = exhaustion(dom, level);
    if (kappa_radius >= step.scale * inradius)
      fail(ErrorKind::Parameter, "stability_probe: kappa not compactly inside the inner domain");
    KernelSet inner = KernelSet::make(step.inner, nystrom_n);

    StabilityRow row;
    row.level = level;
    row.scale = step.scale;
    bool inner_is_closed = inner.is_closed_form();
    for (cplx w : ws) {
      for (cplx z : zs) {
        if (std::abs(z - w) < 0.05 * d) continue;
        cplx hz = step.map(z);
        // skip exact-boundary evaluation for nystrom-backed kernels
        if (!inner_is_closed && !step.inner.contains(hz, 1e-9)) continue;
        row.dev_S = std::max(row.dev_S, std::abs(inner.S(w, hz) - outer.S(w, z)));
        auto gi = inner.S_gradient(w, hz);
        auto go = outer.S_gradient(w, z);
        row.dev_gradS = std::max(
            row.dev_gradS,
            std::sqrt(std::norm(gi.first - go.first) + std::norm(gi.second - go.second)));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dbar
