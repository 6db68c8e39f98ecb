#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dbar/error.hpp"
#include "dbar/numerics.hpp"

namespace dbar {

enum class DomainKind { Disc, Ellipse, Parametric };

/// Smooth closed parametrization t in [0, 2pi) with two derivatives.
struct Curve {
  std::function<cplx(double)> pos;
  std::function<cplx(double)> d1;
  std::function<cplx(double)> d2;
};

/// A bounded planar domain with smooth boundary, star-shaped about its center.
/// Immutable after construction; all evaluators are safe for concurrent reads.
class PlanarDomain {
 public:
  static PlanarDomain unit_disc();
  static PlanarDomain disc(cplx center, double radius);
  static PlanarDomain ellipse(double a, double b);
  /// General smooth Jordan curve. Validates closure (endpoints to 1e-12),
  /// simplicity on a dense sample, and star-shapedness about `center`.
  static PlanarDomain parametric(Curve curve, cplx center, std::string name = "parametric");

  DomainKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  cplx center() const { return center_; }
  double diameter() const { return diameter_; }
  double exterior_ball_radius() const { return ext_ball_radius_; }
  bool is_disc() const { return kind_ == DomainKind::Disc; }
  double disc_radius() const;  // only for disc kind

  cplx boundary(double t) const { return curve_.pos(t); }
  cplx boundary_tangent(double t) const { return curve_.d1(t); }
  cplx boundary_accel(double t) const { return curve_.d2(t); }

  /// Polar radius of the boundary about the center in direction theta.
  double boundary_radius(double theta) const;

  /// Strict interior test (points within `tol` of the boundary count as outside).
  bool contains(cplx z, double tol = 1e-12) const;
  bool on_boundary(cplx z, double tol = 1e-10) const;

  /// Distance delta(z) to the boundary; throws DomainMembership for exterior z.
  double distance_to_boundary(cplx z) const;

  /// Length of the ray from an interior point w in direction theta until exit.
  double ray_exit(cplx w, double theta) const;

  double signed_curvature(double t) const;

 private:
  PlanarDomain() = default;
  void finalize();

  DomainKind kind_ = DomainKind::Disc;
  std::string name_;
  Curve curve_;
  cplx center_{0.0, 0.0};
  double a_ = 1.0, b_ = 1.0;  // disc radius in a_, ellipse semi-axes in a_, b_
  double diameter_ = 2.0;
  double ext_ball_radius_ = 1.0;
  // dense polar table about the center for parametric domains
  std::shared_ptr<const std::vector<double>> polar_table_;
};

struct BoundaryQuadrature {
  std::vector<cplx> nodes;
  std::vector<cplx> tangents;  // dzeta/dt at the nodes
  std::vector<double> weights; // parameter weights (2pi/N)
  int count = 0;

  /// Contour integral of f along the positively oriented boundary.
  template <class F>
  cplx integrate(F&& f) const {
    cplx acc = 0.0;
    for (int i = 0; i < count; ++i) acc += f(nodes[i]) * tangents[i] * weights[i];
    return acc;
  }
  double arc_length() const {
    double s = 0.0;
    for (int i = 0; i < count; ++i) s += std::abs(tangents[i]) * weights[i];
    return s;
  }
};

/// Equispaced-in-parameter trapezoidal nodes; spectrally accurate on smooth
/// closed curves. Requires N >= 16.
BoundaryQuadrature boundary_quadrature(const PlanarDomain& dom, int n);

struct AreaQuadrature {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // plain area measure dA
  std::optional<cplx> singular_center;

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  template <class F>
  cplx integrate(F&& f) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
    return acc;
  }
};

/// Polar rule about the domain center: Gauss-Legendre radially, trapezoid in
/// angle.
AreaQuadrature area_quadrature(const PlanarDomain& dom, int n_r, int n_theta);

struct SingularQuadControls {
  int n_theta = 48;
  int per_panel = 4;        // Gauss points per dyadic radial panel
  double floor_rel = 1e-6;  // innermost panel size relative to the diameter
  bool adaptive_theta = true;
  int max_theta = 288;
  double theta_boost = 14.0;  // n_theta >= boost / sqrt(delta(w)/diam) when adaptive

  SingularQuadControls refined(double factor) const {
    SingularQuadControls c = *this;
    c.n_theta = static_cast<int>(std::lround(c.n_theta * factor));
    c.max_theta = static_cast<int>(std::lround(c.max_theta * factor));
    c.per_panel = static_cast<int>(std::lround(c.per_panel * factor));
    return c;
  }
};

/// Quadrature in polar coordinates about the marked point w with dyadic radial
/// panels, built for integrands with an integrable singularity at w.
AreaQuadrature singular_area_quadrature(const PlanarDomain& dom, cplx w,
                                        const SingularQuadControls& controls = {});

/// Exhaustion level: the inner domain is the outer one scaled about its center
/// so that 1/(l+1) < dist(inner, outer boundary) < 1/l.
struct ExhaustionStep {
  int level = 0;
  double scale = 1.0;
  cplx center{0.0, 0.0};
  PlanarDomain inner = PlanarDomain::unit_disc();
  double inner_distance = 0.0;  // dist(inner domain, outer boundary)

  cplx map(cplx z) const { return center + scale * (z - center); }  // h_l
  double map_derivative() const { return scale; }
};

ExhaustionStep exhaustion(const PlanarDomain& dom, int level);

/// The domain scaled about its center by rho in (0, 1].
PlanarDomain scaled_about_center(const PlanarDomain& dom, double rho);

/// Descriptor for the supported domain kinds; mirrors the on-disk schema.
struct DomainDescriptor {
  std::string kind = "disc";  // disc | ellipse | wobble
  double a = 1.0;             // ellipse semi-axis / disc radius
  double b = 1.0;             // ellipse semi-axis
  double amplitude = 0.15;    // wobble
  int lobes = 3;              // wobble
  int boundary_n = 256;       // quadrature defaults
  int grid_r = 32;
  int grid_theta = 64;
};

PlanarDomain make_domain(const DomainDescriptor& spec);

/// Star-shaped test curve rho(t) = 1 + amplitude*cos(lobes*t).
PlanarDomain make_wobble_domain(double amplitude, int lobes);

}  // namespace dbar
