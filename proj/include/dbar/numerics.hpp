#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const cplx kImag{0.0, 1.0};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Fourth-order central Wirtinger derivative d/dzbar of a scalar field.
template <class F>
cplx wirtinger_dzbar_fd(F&& f, cplx z, double h) {
  auto d4 = [&](cplx dir) {
    return (-f(z + 2.0 * h * dir) + 8.0 * f(z + h * dir) - 8.0 * f(z - h * dir) +
            f(z - 2.0 * h * dir)) /
           (12.0 * h);
  };
  return 0.5 * (d4(cplx(1, 0)) + kImag * d4(kImag));
}

/// Fourth-order central Wirtinger derivative d/dz.
template <class F>
cplx wirtinger_dz_fd(F&& f, cplx z, double h) {
  auto d4 = [&](cplx dir) {
    return (-f(z + 2.0 * h * dir) + 8.0 * f(z + h * dir) - 8.0 * f(z - h * dir) +
            f(z - 2.0 * h * dir)) /
           (12.0 * h);
  };
  return 0.5 * (d4(cplx(1, 0)) - kImag * d4(kImag));
}

/// Deterministic seeded RNG wrapper used by all samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  double uniform01() { return uniform(0.0, 1.0); }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  /// Uniform point in the disc of given center and radius.
  cplx in_disc(cplx center, double radius) {
    double r = radius * std::sqrt(uniform01());
    double t = uniform(0.0, kTwoPi);
    return center + std::polar(r, t);
  }

 private:
  std::mt19937_64 eng_;
};

/// Index-parallel loop; results must be written to disjoint slots so the
/// outcome is independent of the thread schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// FNV-1a hash of a string, used for config fingerprints in reports.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline double sup_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace dbar
