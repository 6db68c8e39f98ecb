#include "dbar/field.hpp"

#include <cmath>

namespace dbar {

TensorPolarGrid tensor_polar_grid(const PlanarDomain& dom, int nr, int ntheta, RadialRule rule) {
  if (nr < 1 || ntheta < 2) fail(ErrorKind::Parameter, "tensor_polar_grid: grid too small");
  TensorPolarGrid g;
  g.domain = dom;
  g.nr = nr;
  g.ntheta = ntheta;
  g.rule = rule;
  g.theta.resize(ntheta);
  for (int b = 0; b < ntheta; ++b) g.theta[b] = kTwoPi * b / ntheta;

  std::vector<double> rw(nr);
  g.r_rel.resize(nr);
  if (rule == RadialRule::GaussLegendre) {
    GaussRule gr = gauss_legendre(nr, 0.0, 1.0);
    g.r_rel = gr.x;
    rw = gr.w;
  } else {
    for (int a = 0; a < nr; ++a) {
      g.r_rel[a] = (a + 0.5) / nr;
      rw[a] = 1.0 / nr;
    }
  }

  g.points.resize(static_cast<std::size_t>(nr) * ntheta);
  g.weights.resize(g.points.size());
  double dth = kTwoPi / ntheta;
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < ntheta; ++b) {
      double rho = dom.boundary_radius(g.theta[b]);
      g.points[a * ntheta + b] = dom.center() + std::polar(g.r_rel[a] * rho, g.theta[b]);
      g.weights[a * ntheta + b] = rw[a] * g.r_rel[a] * rho * rho * dth;
    }
  }
  return g;
}

std::shared_ptr<const ProductGrid> product_grid(std::vector<TensorPolarGrid> factors) {
  if (factors.empty()) fail(ErrorKind::Parameter, "product_grid: no factors");
  auto g = std::make_shared<ProductGrid>();
  g->factors = std::move(factors);
  return g;
}

void SolutionField::finalize() {
  sup_norm = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sup_norm = std::max(sup_norm, std::abs(values[i]));
    acc += std::norm(values[i]) * grid->weight(i);
  }
  l2_norm = std::sqrt(acc);
}

FieldComparison compare_fields(const SolutionField& a, const SolutionField& b) {
  if (!a.grid || !b.grid || a.grid->n() != b.grid->n() || a.grid->size() != b.grid->size())
    fail(ErrorKind::Parameter, "compare_fields: grid mismatch");
  for (int j = 0; j < a.grid->n(); ++j) {
    const auto& fa = a.grid->factors[j];
    const auto& fb = b.grid->factors[j];
    if (fa.size() != fb.size()) fail(ErrorKind::Parameter, "compare_fields: grid mismatch");
    for (int i = 0; i < fa.size(); ++i)
      if (std::abs(fa.points[i] - fb.points[i]) > 1e-12)
        fail(ErrorKind::Parameter, "compare_fields: grids differ at a node");
  }
  FieldComparison c;
  double acc = 0.0, accb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = std::abs(a.values[i] - b.values[i]);
    if (d > c.sup_diff) {
      c.sup_diff = d;
      c.argmax = i;
    }
    double w = a.grid->weight(i);
    acc += d * d * w;
    accb += std::norm(b.values[i]) * w;
  }
  c.l2_diff = std::sqrt(acc);
  c.l2_rel = accb > 0.0 ? c.l2_diff / std::sqrt(accb) : c.l2_diff;
  return c;
}

}  // namespace dbar
