#pragma once

#include "dbar/greens.hpp"

namespace dbar {

/// Universal Cauchy kernel 1 / (2 pi i (z - w)).
cplx kernel_H(cplx w, cplx z);

/// Evaluators for the kernels H, L = harmonic-in-z extension of H's boundary
/// values, S = L - H, and the Bergman kernel K = 2i dL/dzbar, on one domain.
/// Immutable; concurrent evaluation is safe.
class KernelSet {
 public:
  static KernelSet closed_form_disc(const PlanarDomain& disc);
  static KernelSet nystrom(const PlanarDomain& dom, int n);
  /// Closed form on discs, Nystrom otherwise.
  static KernelSet make(const PlanarDomain& dom, int n = 256);

  const PlanarDomain& domain() const { return dom_; }
  bool is_closed_form() const { return closed_form_; }

  cplx H(cplx w, cplx z) const { return kernel_H(w, z); }
  cplx L(cplx w, cplx z) const;
  cplx S(cplx w, cplx z) const;
  cplx K(cplx w, cplx z) const;
  /// (dS/dz, dS/dzbar) with respect to z. Off the diagonal dS/dzbar = K/(2i).
  std::pair<cplx, cplx> S_gradient(cplx w, cplx z) const;

 private:
  KernelSet() = default;
  void require_w(cplx w) const;
  void require_z(cplx z) const;
  Eigen::VectorXcd cauchy_density(cplx w) const;

  bool closed_form_ = true;
  PlanarDomain dom_ = PlanarDomain::unit_disc();
  std::shared_ptr<const DirichletSolver> solver_;
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

/// Ring-average representation of L built from Green's function; epsilon must
/// satisfy 0 < epsilon <= min(|z-w|, delta(w)) / 2. Defaults to half of that
/// admissible ceiling. 64 trapezoid nodes on the ring.
cplx kernel_L_ring(const GreenEvaluator& green, cplx w, cplx z, double epsilon = -1.0,
                   int n_nodes = 64);

enum class DecayKind { SFirst, SSecond, GradS, KBound };

std::string decay_name(DecayKind which);

/// Empirical supremum of the normalized kernel decay quantities plus the
/// log-log slope of the radial profile of the raw kernel magnitude.
EstimateReport fit_kernel_decay(const KernelSet& ks, const PairSampler& sampler, DecayKind which,
                                int base_samples);

struct StabilityRow {
  int level = 0;
  double scale = 0.0;
  double dev_S = 0.0;
  double dev_gradS = 0.0;
};

/// Deviation sup |S_l(w, h_l(z)) - S(w, z)| (and the gradient analogue) over
/// w in the compact disc of radius kappa_fraction * inradius and z in the
/// closure of dom, |z - w| >= 0.05 * diameter, per exhaustion level.
std::vector<StabilityRow> stability_probe(const PlanarDomain& dom, const std::vector<int>& levels,
                                          double kappa_fraction, int nystrom_n = 256);

}  // namespace dbar
