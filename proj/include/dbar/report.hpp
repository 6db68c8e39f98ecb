#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dbar/numerics.hpp"

namespace dbar {

/// Empirically fitted constant / decay exponent / residual record for a named
/// inequality. The fitted constants are grid-dependent estimates, never claims
/// about the true constants.
struct EstimateReport {
  std::string inequality;
  long long samples = 0;
  double supremum = 0.0;
  cplx argmax_w{0.0, 0.0};
  cplx argmax_z{0.0, 0.0};
  double stability_ratio = -1.0;  // sup at doubled samples / sup at base; -1 if single-size run
  bool has_slope = false;
  double slope = 0.0;
  std::map<std::string, double> extras;
  std::map<std::string, double> grid;  // quadrature / grid metadata
  std::uint64_t seed = 0;
};

/// Flat JSON serialization with sorted keys; deterministic for fixed inputs.
std::string to_json_string(const EstimateReport& report);

}  // namespace dbar
