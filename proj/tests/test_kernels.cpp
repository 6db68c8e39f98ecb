#include <doctest.h>

#include <cmath>

#include "dbar/kernels.hpp"

using namespace dbar;

TEST_CASE("Cauchy kernel values") {
  CHECK(std::abs(kernel_H(cplx(0, 0), cplx(1, 0)) - cplx(0, -1.0 / kTwoPi)) < 1e-15);
  CHECK(std::abs(kernel_H(cplx(0, 0), cplx(0, 1)) - cplx(-1.0 / kTwoPi, 0)) < 1e-15);
  CHECK_THROWS_AS(kernel_H(cplx(0.3, 0.2), cplx(0.3, 0.2)), Error);
}

TEST_CASE("disc closed forms L, S, K") {
  KernelSet ks = KernelSet::closed_form_disc(PlanarDomain::unit_disc());
  cplx w(0, 0), z(0.5, 0);
  CHECK(std::abs(ks.L(w, z) - cplx(0, -0.5 / kTwoPi)) < 1e-14);
  CHECK(std::abs(ks.S(w, z) - cplx(0, 3.0 / (4.0 * kPi))) < 1e-14);
  CHECK(std::abs(ks.K(w, z) - 1.0 / kPi) < 1e-14);
  CHECK(std::abs(ks.K(w, cplx(-0.3, 0.7)) - 1.0 / kPi) < 1e-14);

  // boundary: L = H, S = 0
  cplx zb = std::polar(1.0, 0.7);
  CHECK(std::abs(ks.L(w, zb) - kernel_H(w, zb)) < 1e-10);
  CHECK(std::abs(ks.S(cplx(0.2, 0.1), zb)) < 1e-10);

  CHECK_THROWS_AS(ks.S(cplx(0.3, 0), cplx(0.3 + 1e-9, 0)), Error);
  CHECK_THROWS_AS(ks.L(std::polar(1.0, 0.1), z), Error);  // w on the boundary
}

TEST_CASE("S = L - H and S gradient identities") {
  KernelSet ks = KernelSet::closed_form_disc(PlanarDomain::unit_disc());
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    cplx w = rng.in_disc(cplx(0, 0), 0.95), z = rng.in_disc(cplx(0, 0), 0.95);
    if (std::abs(z - w) < 1e-3) continue;
    CHECK(std::abs(ks.S(w, z) - (ks.L(w, z) - kernel_H(w, z))) < 1e-13);
  }
  // dS/dzbar = K/(2i)
  cplx w(0, 0), z(0.5, 0);
  auto g = ks.S_gradient(w, z);
  CHECK(std::abs(g.second - ks.K(w, z) / (2.0 * kImag)) < 1e-14);
  CHECK(std::abs(g.second - cplx(0, -1.0 / kTwoPi)) < 1e-14);
}

TEST_CASE("S gradient matches finite differences") {
  for (bool closed : {true, false}) {
    PlanarDomain dom = closed ? PlanarDomain::unit_disc() : PlanarDomain::ellipse(2.0, 1.0);
    KernelSet ks = closed ? KernelSet::closed_form_disc(dom) : KernelSet::nystrom(dom, 192);
    Rng rng(33);
    int checked = 0;
    while (checked < (closed ? 100 : 20)) {
      cplx w = rng.in_disc(cplx(0, 0), 0.6), z = rng.in_disc(cplx(0, 0), 0.6);
      if (!dom.contains(w, 0.3) || !dom.contains(z, 0.3)) continue;
      if (std::abs(z - w) < 0.2) continue;
      ++checked;
      double h = 1e-4;
      cplx fd_dz = wirtinger_dz_fd([&](cplx zz) { return ks.S(w, zz); }, z, h);
      cplx fd_dzb = wirtinger_dzbar_fd([&](cplx zz) { return ks.S(w, zz); }, z, h);
      auto g = ks.S_gradient(w, z);
      CHECK(std::abs(g.first - fd_dz) <= 1e-5 * std::max(1.0, std::abs(fd_dz)));
      CHECK(std::abs(g.second - fd_dzb) <= 1e-5 * std::max(1.0, std::abs(fd_dzb)));
    }
  }
}

TEST_CASE("Bergman kernel: reproducing property and L-to-K identity") {
  KernelSet ks = KernelSet::closed_form_disc(PlanarDomain::unit_disc());
  AreaQuadrature q = area_quadrature(PlanarDomain::unit_disc(), 48, 96);
  cplx w(0.4, 0);
  cplx repro = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    repro += ks.K(w, q.nodes[i]) * q.nodes[i] * q.weights[i];
  CHECK(std::abs(repro - w) < 1e-6);

  // K = 2i * d/dzbar L by finite differences
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    cplx ww = rng.in_disc(cplx(0, 0), 0.7), z = rng.in_disc(cplx(0, 0), 0.7);
    cplx fd = wirtinger_dzbar_fd([&](cplx zz) { return ks.L(ww, zz); }, z, 1e-4);
    CHECK(std::abs(2.0 * kImag * fd - ks.K(ww, z)) <= 1e-5 * std::abs(ks.K(ww, z)));
  }
}

TEST_CASE("L is holomorphic in w") {
  for (bool closed : {true, false}) {
    PlanarDomain dom = closed ? PlanarDomain::unit_disc() : PlanarDomain::ellipse(2.0, 1.0);
    KernelSet ks = closed ? KernelSet::closed_form_disc(dom) : KernelSet::nystrom(dom, 160);
    Rng rng(9);
    for (int i = 0; i < (closed ? 25 : 6); ++i) {
      cplx w = rng.in_disc(cplx(0, 0), 0.5), z = rng.in_disc(cplx(0, 0), 0.6);
      if (std::abs(z - w) < 0.25) continue;
      cplx res = wirtinger_dzbar_fd([&](cplx u) { return ks.L(u, z); }, w, 1e-4);
      CHECK(std::abs(res) <= 1e-6 * std::max(std::abs(ks.L(w, z)), 0.05));
    }
  }
}

TEST_CASE("ring representation of L") {
  PlanarDomain disc = PlanarDomain::unit_disc();
  KernelSet ks = KernelSet::closed_form_disc(disc);
  GreenEvaluator green = GreenEvaluator::closed_form_disc(disc);

  cplx w(0.0, 0.0), z(0.5, 0.0);
  cplx direct = ks.L(w, z);
  cplx ring = kernel_L_ring(green, w, z);  // epsilon = admissible ceiling / 2
  CHECK(std::abs(ring - direct) < 1e-10);

  // value independent of the admissible epsilon
  double ceiling = 0.5 * std::min(std::abs(z - w), disc.distance_to_boundary(w));
  cplx ring2 = kernel_L_ring(green, w, z, 0.5 * ceiling * 0.5);
  CHECK(std::abs(ring - ring2) < 1e-10);

  CHECK_THROWS_AS(kernel_L_ring(green, w, z, 2.0 * ceiling), Error);

  // nystrom-backed Green on the ellipse agrees with the Dirichlet-based L
  PlanarDomain ell = PlanarDomain::ellipse(2.0, 1.0);
  KernelSet ek = KernelSet::nystrom(ell, 192);
  GreenEvaluator eg = GreenEvaluator::nystrom(ell, 192);
  cplx we(0.3, 0.2), ze(-0.7, 0.3);
  CHECK(std::abs(kernel_L_ring(eg, we, ze) - ek.L(we, ze)) < 1e-7);
}

TEST_CASE("nystrom kernels match the disc closed forms") {
  PlanarDomain disc = PlanarDomain::unit_disc();
  KernelSet exact = KernelSet::closed_form_disc(disc);
  KernelSet n256 = KernelSet::nystrom(disc, 256);
  KernelSet n128 = KernelSet::nystrom(disc, 128);

  Rng rng(12);
  double e256 = 0.0, e128 = 0.0;
  int pairs = 0;
  while (pairs < 100) {
    cplx w = rng.in_disc(cplx(0, 0), 0.85), z = rng.in_disc(cplx(0, 0), 0.85);
    if (std::abs(w) < 0.7) continue;  // keep the data Fourier tail visible at N=128
    if (std::abs(z - w) < 0.05) continue;
    ++pairs;
    for (auto eval : {0, 1, 2}) {
      cplx ve, v256, v128;
      if (eval == 0) {
        ve = exact.L(w, z);
        v256 = n256.L(w, z);
        v128 = n128.L(w, z);
      } else if (eval == 1) {
        ve = exact.S(w, z);
        v256 = n256.S(w, z);
        v128 = n128.S(w, z);
      } else {
        ve = exact.K(w, z);
        v256 = n256.K(w, z);
        v128 = n128.K(w, z);
      }
      double scale = std::max(std::abs(ve), 1e-3);
      e256 = std::max(e256, std::abs(v256 - ve) / scale);
      e128 = std::max(e128, std::abs(v128 - ve) / scale);
    }
  }
  CHECK(e256 < 1e-8);
  CHECK(e128 / e256 >= 10.0);
}

TEST_CASE("kernel decay fits: disc slopes") {
  KernelSet ks = KernelSet::closed_form_disc(PlanarDomain::unit_disc());
  PairSampler sampler;
  sampler.seed = 2024;

  EstimateReport s1 = fit_kernel_decay(ks, sampler, DecayKind::SFirst, 2000);
  CHECK(std::isfinite(s1.supremum));
  CHECK(s1.slope > -1.3);
  CHECK(s1.slope < -0.9);

  EstimateReport gs = fit_kernel_decay(ks, sampler, DecayKind::GradS, 2000);
  CHECK(gs.slope > -2.3);
  CHECK(gs.slope < -1.9);

  EstimateReport kb = fit_kernel_decay(ks, sampler, DecayKind::KBound, 2000);
  CHECK(kb.slope > -2.3);
  CHECK(kb.slope < -1.9);
}

TEST_CASE("kernel decay fit: ellipse S-second finite and stable") {
  KernelSet ks = KernelSet::nystrom(PlanarDomain::ellipse(2.0, 1.0), 160);
  PairSampler sampler;
  sampler.seed = 5;
  sampler.delta_margin_rel = 0.02;
  EstimateReport rep = fit_kernel_decay(ks, sampler, DecayKind::SSecond, 1000);
  CHECK(std::isfinite(rep.supremum));
  CHECK(rep.supremum > 0.0);
  CHECK(rep.stability_ratio <= 1.10);
}

TEST_CASE("stability probe on the unit disc") {
  PlanarDomain disc = PlanarDomain::unit_disc();
  auto rows = stability_probe(disc, {4, 8, 16, 32}, 0.5);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].dev_S < rows[i - 1].dev_S);
    CHECK(rows[i].dev_gradS < rows[i - 1].dev_gradS);
  }
  CHECK(rows.back().dev_S < 0.2);
  CHECK_THROWS_AS(stability_probe(disc, {4, 8}, 0.99), Error);
  CHECK_THROWS_AS(stability_probe(disc, {8, 4}, 0.5), Error);
}
