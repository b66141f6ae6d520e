#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace mrrsim {

// Wavelength channel cap: resonance linewidth against channel spacing bounds
// how many rings share one bus without crosstalk.
constexpr int kMaxColumns = 8;

// One processing-engine array configuration: `tiles` arrays of `rows` x
// `columns` weighting rings sharing the modulated input bus.
struct OpeConfig {
  int tiles = 4;
  int rows = 8;
  int columns = 8;
  int n_t = 7;            // digit slots minus one; a stream carries n_t + 1 slots
  double clock_hz = 5e9;  // slot rate. Shift-and-add delay lines reach about
                          // 345 ps, which floors the usable slot rate near 2.9 GHz.
  bool osa_enabled = true;
  double t_to = 7.5e-6;  // s per thermo-optic reprogramming event
  double t_eo = 2e-10;   // s per electro-optic modulation slot

  void validate() const;
  static OpeConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class MappingMode { WeightStationary, InputStationary, Analog };

MappingMode mapping_mode_from_string(std::string_view s);
std::string to_string(MappingMode mode);

}  // namespace mrrsim
