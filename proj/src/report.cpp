#include "dbar/report.hpp"

#include <json.hpp>

namespace dbar {

std::string to_json_string(const EstimateReport& r) {
  nlohmann::json j;
  j["inequality"] = r.inequality;
  j["samples"] = r.samples;
  j["supremum"] = r.supremum;
  j["argmax"] = {{"w", {r.argmax_w.real(), r.argmax_w.imag()}},
                 {"z", {r.argmax_z.real(), r.argmax_z.imag()}}};
  if (r.stability_ratio >= 0.0) j["stability_ratio"] = r.stability_ratio;
  if (r.has_slope) j["slope"] = r.slope;
  if (!r.extras.empty()) j["extras"] = r.extras;
  if (!r.grid.empty()) j["grid"] = r.grid;
  j["seed"] = r.seed;
  return j.dump();
}

}  // namespace dbar
