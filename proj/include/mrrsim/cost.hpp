#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mrrsim/ope.hpp"
#include "mrrsim/workload.hpp"

namespace mrrsim {

// Per-event energies in SI units (J per bit/event, W for static terms).
struct EnergyTable {
  double laser_static = 1.38e-3;    // W
  double mrr_to_static = 1.58e-3;   // W per locked weighting ring
  double mrr_eo_dynamic = 6.3e-15;  // J per modulated slot bit
  double dac_dynamic = 5.2e-12;     // J per DAC bit
  double pd_tia_dynamic = 4.4e-13;  // J per detect event
  double sram_leak = 4.81e-11;      // W per buffered bit
  double sram_dynamic = 5e-14;      // J per bit moved
  double adc_dynamic = 2.55e-12;    // J per conversion (configurable stand-in)
  int dac_bits = 8;
  int adc_bits = 8;
  int acc_bits = 24;  // electrical partial-sum accumulator width

  void validate() const;
  static EnergyTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};
EnergyTable load_energy_table(const std::string& path);

struct EventCounts {
  std::uint64_t reprogram_events = 0;
  std::uint64_t mrr_writes = 0;
  std::uint64_t eo_slot_bits = 0;
  std::uint64_t dac_bits_total = 0;
  std::uint64_t pd_events = 0;
  std::uint64_t adc_events = 0;
  std::uint64_t sram_read_bits = 0;
  std::uint64_t sram_write_bits = 0;
  std::uint64_t compute_cycles = 0;
  // Derived occupancy used by the static-energy terms.
  std::uint64_t mrr_active = 0;
  std::uint64_t buffer_bits = 0;
};

struct EnergyBreakdown {
  double laser = 0.0;
  double mrr_static = 0.0;
  double sram_leak = 0.0;
  double mrr_eo = 0.0;
  double dac = 0.0;
  double pd_tia = 0.0;
  double adc = 0.0;
  double sram_dynamic = 0.0;
  double total = 0.0;
};

struct LayerCost {
  EventCounts counts;
  EnergyBreakdown breakdown;
  double energy_j = 0.0;
  double delay_s = 0.0;
  double edp = 0.0;  // J * s
};

// Event counts for one GEMM mapped onto the array. The stationary operand is
// tiled onto the rows*tiles x columns ring footprint (reduction dim on the
// wavelength columns); the streamed operand is digit-serialized. Analog
// mapping has no slot/event structure and is rejected.
EventCounts layer_event_counts(const GemmShape& g, const OpeConfig& ope, MappingMode mode,
                               const EnergyTable& table);

double layer_delay(const EventCounts& c, const OpeConfig& ope);
EnergyBreakdown energy_breakdown(const EventCounts& c, const EnergyTable& table, double delay_s);
LayerCost layer_edp(const GemmShape& g, const OpeConfig& ope, MappingMode mode, const EnergyTable& table);

// Sum of per-layer EDPs over a network (convs lowered through im2col).
double network_edp(const NetworkSpec& net, const OpeConfig& ope, MappingMode mode, const EnergyTable& table);

}  // namespace mrrsim
