#include "dbar/geometry.hpp"

#include <cmath>

namespace dbar {

namespace {

// Unwrapped polar angle samples of the curve about `center`.
struct PolarTrace {
  std::vector<double> t;      // parameter samples
  std::vector<double> theta;  // unwrapped angles, increasing for positive orientation
  std::vector<double> rho;
};

PolarTrace trace_curve(const Curve& curve, cplx center, int n) {
  PolarTrace tr;
  tr.t.resize(n + 1);
  tr.theta.resize(n + 1);
  tr.rho.resize(n + 1);
  double prev = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = kTwoPi * i / n;
    cplx d = curve.pos(t) - center;
    double ang = std::arg(d);
    if (i == 0) {
      prev = ang;
    } else {
      while (ang < prev - kPi) ang += kTwoPi;
      while (ang > prev + kPi) ang -= kTwoPi;
      prev = ang;
    }
    tr.t[i] = t;
    tr.theta[i] = ang;
    tr.rho[i] = std::abs(d);
  }
  return tr;
}

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

double PlanarDomain::disc_radius() const {
  if (kind_ != DomainKind::Disc) fail(ErrorKind::Parameter, "disc_radius: domain is not a disc");
  return a_;
}

PlanarDomain PlanarDomain::unit_disc() { return disc(cplx(0, 0), 1.0); }

PlanarDomain PlanarDomain::disc(cplx center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius))
    fail(ErrorKind::Parameter, "disc: radius must be positive");
  PlanarDomain d;
  d.kind_ = DomainKind::Disc;
  d.name_ = "disc";
  d.center_ = center;
  d.a_ = radius;
  d.curve_.pos = [center, radius](double t) { return center + std::polar(radius, t); };
  d.curve_.d1 = [radius](double t) { return kImag * std::polar(radius, t); };
  d.curve_.d2 = [radius](double t) { return -std::polar(radius, t); };
  d.diameter_ = 2.0 * radius;
  d.ext_ball_radius_ = radius;
  return d;
}

PlanarDomain PlanarDomain::ellipse(double a, double b) {
  if (!(a > 0) || !(b > 0)) fail(ErrorKind::Parameter, "ellipse: axes must be positive");
  PlanarDomain d;
  d.kind_ = DomainKind::Ellipse;
  d.name_ = "ellipse";
  d.center_ = cplx(0, 0);
  d.a_ = a;
  d.b_ = b;
  d.curve_.pos = [a, b](double t) { return cplx(a * std::cos(t), b * std::sin(t)); };
  d.curve_.d1 = [a, b](double t) { return cplx(-a * std::sin(t), b * std::cos(t)); };
  d.curve_.d2 = [a, b](double t) { return cplx(-a * std::cos(t), -b * std::sin(t)); };
  d.diameter_ = 2.0 * std::max(a, b);
  double lo = std::min(a, b), hi = std::max(a, b);
  d.ext_ball_radius_ = std::min(lo * lo / hi, d.diameter_);
  return d;
}

PlanarDomain PlanarDomain::parametric(Curve curve, cplx center, std::string name) {
  PlanarDomain d;
  d.kind_ = DomainKind::Parametric;
  d.name_ = std::move(name);
  d.center_ = center;
  d.curve_ = std::move(curve);
  d.finalize();
  return d;
}

void PlanarDomain::finalize() {
  // closure
  cplx p0 = curve_.pos(0.0), p1 = curve_.pos(kTwoPi);
  if (std::abs(p0 - p1) > 1e-12)
    fail(ErrorKind::Geometry, "parametric: endpoints do not match (curve not closed)");

  // simplicity on a dense sample
  const int ns = 512;
  std::vector<cplx> pts(ns);
  for (int i = 0; i < ns; ++i) pts[i] = curve_.pos(kTwoPi * i / ns);
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 2; j < ns; ++j) {
      if (i == 0 && j == ns - 1) continue;
      if (segments_intersect(pts[i], pts[(i + 1) % ns], pts[j], pts[(j + 1) % ns]))
        fail(ErrorKind::Geometry, "parametric: curve self-intersects");
    }
  }

  // star-shapedness about the center, positive orientation
  PolarTrace tr = trace_curve(curve_, center_, 4096);
  double total = tr.theta.back() - tr.theta.front();
  if (std::abs(total - kTwoPi) > 1e-6)
    fail(ErrorKind::Geometry, "parametric: curve must wind once positively about the center");
  for (std::size_t i = 1; i < tr.theta.size(); ++i) {
    if (tr.theta[i] <= tr.theta[i - 1])
      fail(ErrorKind::Geometry, "parametric: domain is not star-shaped about the center");
  }

  // polar table on a uniform angle grid, Newton-refined
  const int ntab = 4096;
  auto table = std::make_shared<std::vector<double>>(ntab);
  double theta0 = tr.theta.front();
  std::size_t cursor = 0;
  for (int i = 0; i < ntab; ++i) {
    double target = theta0 + kTwoPi * i / ntab;
    while (cursor + 1 < tr.theta.size() && tr.theta[cursor + 1] < target) ++cursor;
    double t = tr.t[cursor];
    for (int it = 0; it < 4; ++it) {
      cplx d = curve_.pos(t) - center_;
      double ang = std::arg(d);
      double diff = std::remainder(ang - target, kTwoPi);
      cplx dp = curve_.d1(t);
      // d(theta)/dt = Im(conj(d) d') / |d|^2
      double dth = (d.real() * dp.imag() - d.imag() * dp.real()) / std::norm(d);
      t -= diff / dth;
    }
    (*table)[i] = std::abs(curve_.pos(t) - center_);
  }
  // rotate table so index 0 corresponds to angle 0
  // stored as rho(angle) with angle = 2pi*i/ntab + phase
  // we instead store directly at absolute angles: rebuild with offset applied
  {
    std::vector<double> rotated(ntab);
    for (int i = 0; i < ntab; ++i) {
      double ang = kTwoPi * i / ntab;  // absolute angle
      double pos = std::fmod(ang - theta0, kTwoPi);
      if (pos < 0) pos += kTwoPi;
      double x = pos / kTwoPi * ntab;
      int i0 = static_cast<int>(x) % ntab;
      double fr = x - std::floor(x);
      rotated[i] = (1 - fr) * (*table)[i0] + fr * (*table)[(i0 + 1) % ntab];
    }
    *table = std::move(rotated);
  }
  polar_table_ = table;

  // diameter from boundary samples
  const int nd = 2048;
  std::vector<cplx> bs(nd);
  for (int i = 0; i < nd; ++i) bs[i] = curve_.pos(kTwoPi * i / nd);
  double d2max = 0.0;
  for (int i = 0; i < nd; ++i)
    for (int j = i + 1; j < nd; ++j) d2max = std::max(d2max, std::norm(bs[i] - bs[j]));
  diameter_ = std::sqrt(d2max);

  // exterior ball radius: minimum radius of curvature, capped at the diameter
  double kmax = 0.0;
  for (int i = 0; i < 4096; ++i) kmax = std::max(kmax, std::abs(signed_curvature(kTwoPi * i / 4096)));
  ext_ball_radius_ = std::min(kmax > 0 ? 1.0 / kmax : diameter_, diameter_);
}

double PlanarDomain::boundary_radius(double theta) const {
  switch (kind_) {
    case DomainKind::Disc:
      return a_;
    case DomainKind::Ellipse: {
      double c = std::cos(theta), s = std::sin(theta);
      return a_ * b_ / std::sqrt(b_ * b_ * c * c + a_ * a_ * s * s);
    }
    case DomainKind::Parametric: {
      const auto& tab = *polar_table_;
      double ang = std::fmod(theta, kTwoPi);
      if (ang < 0) ang += kTwoPi;
      double x = ang / kTwoPi * tab.size();
      std::size_t i0 = static_cast<std::size_t>(x) % tab.size();
      double fr = x - std::floor(x);
      return (1 - fr) * tab[i0] + fr * tab[(i0 + 1) % tab.size()];
    }
  }
  return a_;
}

bool PlanarDomain::contains(cplx z, double tol) const {
  cplx d = z - center_;
  double r = std::abs(d);
  if (r == 0.0) return true;
  return r <= boundary_radius(std::arg(d)) - tol;
}

bool PlanarDomain::on_boundary(cplx z, double tol) const {
  cplx d = z - center_;
  return std::abs(std::abs(d) - boundary_radius(std::arg(d))) <= tol;
}

double PlanarDomain::distance_to_boundary(cplx z) const {
  if (!contains(z, 0.0) || on_boundary(z, 1e-14))
    fail(ErrorKind::DomainMembership, "distance_to_boundary: point not strictly inside");
  if (kind_ == DomainKind::Disc) return a_ - std::abs(z - center_);

  // coarse scan then Newton on d/dt |gamma(t)-z|^2
  const int ns = 1024;
  double best = 1e300, tbest = 0.0;
  for (int i = 0; i < ns; ++i) {
    double t = kTwoPi * i / ns;
    double d2 = std::norm(curve_.pos(t) - z);
    if (d2 < best) {
      best = d2;
      tbest = t;
    }
  }
  double t = tbest;
  for (int it = 0; it < 8; ++it) {
    cplx g = curve_.pos(t) - z, g1 = curve_.d1(t), g2 = curve_.d2(t);
    double f1 = 2.0 * (g.real() * g1.real() + g.imag() * g1.imag());
    double f2 = 2.0 * (std::norm(g1) + g.real() * g2.real() + g.imag() * g2.imag());
    if (f2 <= 0) break;
    t -= f1 / f2;
  }
  return std::min(std::sqrt(best), std::abs(curve_.pos(t) - z));
}

double PlanarDomain::ray_exit(cplx w, double theta) const {
  cplx dir = std::polar(1.0, theta);
  if (kind_ == DomainKind::Disc) {
    cplx p = w - center_;
    double b = p.real() * dir.real() + p.imag() * dir.imag();
    double c = std::norm(p) - a_ * a_;
    double disc = b * b - c;
    if (disc <= 0) return 0.0;
    return std::max(0.0, -b + std::sqrt(disc));
  }
  if (kind_ == DomainKind::Ellipse) {
    double A = dir.real() * dir.real() / (a_ * a_) + dir.imag() * dir.imag() / (b_ * b_);
    double B = 2.0 * (w.real() * dir.real() / (a_ * a_) + w.imag() * dir.imag() / (b_ * b_));
    double C = w.real() * w.real() / (a_ * a_) + w.imag() * w.imag() / (b_ * b_) - 1.0;
    double disc = B * B - 4.0 * A * C;
    if (disc <= 0) return 0.0;
    return std::max(0.0, (-B + std::sqrt(disc)) / (2.0 * A));
  }
  // parametric: bisection on the star-shaped inside test
  auto inside = [&](double r) { return contains(w + r * dir, 0.0); };
  if (!inside(1e-12 * diameter_)) return 0.0;
  double lo = 0.0, hi = diameter_;
  if (inside(hi)) return hi;  // cannot happen for a bounded domain
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double PlanarDomain::signed_curvature(double t) const {
  cplx d1 = curve_.d1(t), d2 = curve_.d2(t);
  double num = d1.real() * d2.imag() - d1.imag() * d2.real();
  double sp = std::abs(d1);
  return num / (sp * sp * sp);
}

BoundaryQuadrature boundary_quadrature(const PlanarDomain& dom, int n) {
  if (n < 16) fail(ErrorKind::Parameter, "boundary_quadrature: need at least 16 nodes");
  BoundaryQuadrature q;
  q.count = n;
  q.nodes.resize(n);
  q.tangents.resize(n);
  q.weights.assign(n, kTwoPi / n);
  for (int i = 0; i < n; ++i) {
    double t = kTwoPi * i / n;
    q.nodes[i] = dom.boundary(t);
    q.tangents[i] = dom.boundary_tangent(t);
  }
  return q;
}

AreaQuadrature area_quadrature(const PlanarDomain& dom, int n_r, int n_theta) {
  if (n_r < 2 || n_theta < 4) fail(ErrorKind::Parameter, "area_quadrature: grid too small");
  GaussRule gr = gauss_legendre(n_r, 0.0, 1.0);
  AreaQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(n_r) * n_theta);
  q.weights.reserve(static_cast<std::size_t>(n_r) * n_theta);
  double dth = kTwoPi / n_theta;
  for (int b = 0; b < n_theta; ++b) {
    double th = dth * b;
    double R = dom.boundary_radius(th);
    for (int a = 0; a < n_r; ++a) {
      double r = gr.x[a] * R;
      q.nodes.push_back(dom.center() + std::polar(r, th));
      q.weights.push_back(gr.w[a] * R * r * dth);
    }
  }
  return q;
}

AreaQuadrature singular_area_quadrature(const PlanarDomain& dom, cplx w,
                                        const SingularQuadControls& controls) {
  bool interior = dom.contains(w, 0.0);
  int nth = controls.n_theta;
  if (controls.adaptive_theta && interior) {
    double delta = dom.distance_to_boundary(w) / dom.diameter();
    int want = static_cast<int>(std::ceil(controls.theta_boost / std::sqrt(std::max(delta, 1e-8))));
    nth = std::min(controls.max_theta, std::max(controls.n_theta, want));
  }
  GaussRule panel = gauss_legendre(controls.per_panel);
  double floor_abs = controls.floor_rel * dom.diameter();

  AreaQuadrature q;
  q.singular_center = w;
  double dth = kTwoPi / nth;
  for (int b = 0; b < nth; ++b) {
    double th = dth * b;
    double R = dom.ray_exit(w, th);
    if (R <= floor_abs) continue;
    // dyadic panels [R/2^(k+1), R/2^k] down to the floor, then [0, floor]
    double hi = R;
    while (hi > floor_abs) {
      double lo = std::max(hi * 0.5, floor_abs);
      if (hi - lo < 1e-300) break;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int g = 0; g < controls.per_panel; ++g) {
        double r = mid + half * panel.x[g];
        q.nodes.push_back(w + std::polar(r, th));
        q.weights.push_back(panel.w[g] * half * r * dth);
      }
      hi = lo;
    }
    {
      double mid = 0.5 * hi, half = 0.5 * hi;
      for (int g = 0; g < controls.per_panel; ++g) {
        double r = mid + half * panel.x[g];
        q.nodes.push_back(w + std::polar(r, th));
        q.weights.push_back(panel.w[g] * half * r * dth);
      }
    }
  }
  return q;
}

PlanarDomain scaled_about_center(const PlanarDomain& dom, double rho) {
  if (!(rho > 0.0) || !(rho < 1.0))
    fail(ErrorKind::Geometry, "scaled_about_center: scaling factor out of (0,1)");
  cplx c = dom.center();
  switch (dom.kind()) {
    case DomainKind::Disc:
      return PlanarDomain::disc(c, rho * dom.disc_radius());
    case DomainKind::Ellipse: {
      // center is the origin for ellipse kind
      double ang = 0.0;
      double a = rho * dom.boundary_radius(ang);
      double b = rho * dom.boundary_radius(kPi / 2);
      return PlanarDomain::ellipse(a, b);
    }
    case DomainKind::Parametric: {
      PlanarDomain copy = dom;  // keeps the source curve alive inside the closures
      Curve cv;
      cv.pos = [copy, c, rho](double t) { return c + rho * (copy.boundary(t) - c); };
      cv.d1 = [copy, rho](double t) { return rho * copy.boundary_tangent(t); };
      cv.d2 = [copy, rho](double t) { return rho * copy.boundary_accel(t); };
      return PlanarDomain::parametric(std::move(cv), c, dom.name() + "-scaled");
    }
  }
  fail(ErrorKind::Geometry, "scaled_about_center: unknown kind");
}

PlanarDomain make_wobble_domain(double amplitude, int lobes) {
  if (!(amplitude >= 0.0) || amplitude >= 0.5)
    fail(ErrorKind::Parameter, "wobble: amplitude must lie in [0, 0.5)");
  if (lobes < 1) fail(ErrorKind::Parameter, "wobble: lobes must be >= 1");
  double A = amplitude;
  int k = lobes;
  Curve cv;
  cv.pos = [A, k](double t) { return std::polar(1.0 + A * std::cos(k * t), t); };
  cv.d1 = [A, k](double t) {
    double R = 1.0 + A * std::cos(k * t), Rp = -A * k * std::sin(k * t);
    return (cplx(Rp, 0) + kImag * R) * std::polar(1.0, t);
  };
  cv.d2 = [A, k](double t) {
    double R = 1.0 + A * std::cos(k * t), Rp = -A * k * std::sin(k * t);
    double Rpp = -A * k * k * std::cos(k * t);
    return (cplx(Rpp - R, 0) + kImag * (2.0 * Rp)) * std::polar(1.0, t);
  };
  return PlanarDomain::parametric(std::move(cv), cplx(0, 0), "wobble");
}

PlanarDomain make_domain(const DomainDescriptor& spec) {
  if (spec.kind == "disc" || spec.kind == "unit-disc") return PlanarDomain::unit_disc();
  if (spec.kind == "ellipse") return PlanarDomain::ellipse(spec.a, spec.b);
  if (spec.kind == "wobble") return make_wobble_domain(spec.amplitude, spec.lobes);
  fail(ErrorKind::Parameter, "make_domain: unknown kind '" + spec.kind + "'");
}

ExhaustionStep exhaustion(const PlanarDomain& dom, int level) {
  if (level < 2) fail(ErrorKind::Parameter, "exhaustion: level must be >= 2");
  double lo = 1.0 / (level + 1), hi = 1.0 / level;
  double target = 0.5 * (lo + hi);

  auto inner_distance = [&](double rho) {
    if (dom.is_disc()) return dom.disc_radius() * (1.0 - rho);
    // distance from the scaled boundary to the outer boundary
    double dmin = 1e300;
    const int ns = 512;
    for (int i = 0; i < ns; ++i) {
      cplx p = dom.center() + rho * (dom.boundary(kTwoPi * i / ns) - dom.center());
      dmin = std::min(dmin, dom.distance_to_boundary(p));
    }
    return dmin;
  };

  double rho;
  if (dom.is_disc()) {
    rho = 1.0 - target / dom.disc_radius();
  } else {
    double a = 0.01, b = 0.999;
    if (inner_distance(b) > target || inner_distance(a) < target)
      fail(ErrorKind::Geometry, "exhaustion: scaling factor out of (0,1) for this level");
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (a + b);
      (inner_distance(mid) > target ? a : b) = mid;
    }
    rho = 0.5 * (a + b);
  }
  if (!(rho > 0.0) || !(rho < 1.0))
    fail(ErrorKind::Geometry, "exhaustion: scaling factor out of (0,1)");

  ExhaustionStep step;
  step.level = level;
  step.scale = rho;
  step.center = dom.center();
  step.inner = scaled_about_center(dom, rho);
  step.inner_distance = inner_distance(rho);
  if (!(step.inner_distance > lo && step.inner_distance < hi))
    fail(ErrorKind::Geometry, "exhaustion: distance bracket violated");
  return step;
}

}  // namespace dbar
