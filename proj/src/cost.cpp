#include "mrrsim/cost.hpp"

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

void EnergyTable::validate() const {
  if (!(laser_static >= 0.0 && mrr_to_static >= 0.0 && mrr_eo_dynamic >= 0.0 && dac_dynamic >= 0.0 &&
        pd_tia_dynamic >= 0.0 && sram_leak >= 0.0 && sram_dynamic >= 0.0 && adc_dynamic >= 0.0))
    throw ValidationError("energy table: energies and powers must be non-negative");
  if (dac_bits < 1 || adc_bits < 1 || acc_bits < 1)
    throw ValidationError("energy table: bit widths must be >= 1");
}

EnergyTable EnergyTable::from_json(const nlohmann::json& j) {
  const std::string ctx = "energy table";
  check_keys(j, {},
             {"laser_static", "mrr_to_static", "mrr_eo_dynamic", "dac_dynamic", "pd_tia_dynamic",
              "sram_leak", "sram_dynamic", "adc_dynamic", "dac_bits", "adc_bits", "acc_bits"},
             ctx);
  EnergyTable t;
  if (j.contains("laser_static")) t.laser_static = require_number(j, "laser_static", ctx);
  if (j.contains("mrr_to_static")) t.mrr_to_static = require_number(j, "mrr_to_static", ctx);
  if (j.contains("mrr_eo_dynamic")) t.mrr_eo_dynamic = require_number(j, "mrr_eo_dynamic", ctx);
  if (j.contains("dac_dynamic")) t.dac_dynamic = require_number(j, "dac_dynamic", ctx);
  if (j.contains("pd_tia_dynamic")) t.pd_tia_dynamic = require_number(j, "pd_tia_dynamic", ctx);
  if (j.contains("sram_leak")) t.sram_leak = require_number(j, "sram_leak", ctx);
  if (j.contains("sram_dynamic")) t.sram_dynamic = require_number(j, "sram_dynamic", ctx);
  if (j.contains("adc_dynamic")) t.adc_dynamic = require_number(j, "adc_dynamic", ctx);
  if (j.contains("dac_bits")) t.dac_bits = static_cast<int>(require_integer(j, "dac_bits", ctx));
  if (j.contains("adc_bits")) t.adc_bits = static_cast<int>(require_integer(j, "adc_bits", ctx));
  if (j.contains("acc_bits")) t.acc_bits = static_cast<int>(require_integer(j, "acc_bits", ctx));
  t.validate();
  return t;
}

nlohmann::json EnergyTable::to_json() const {
  nlohmann::ordered_json j;
  j["laser_static"] = laser_static;
  j["mrr_to_static"] = mrr_to_static;
  j["mrr_eo_dynamic"] = mrr_eo_dynamic;
  j["dac_dynamic"] = dac_dynamic;
  j["pd_tia_dynamic"] = pd_tia_dynamic;
  j["sram_leak"] = sram_leak;
  j["sram_dynamic"] = sram_dynamic;
  j["adc_dynamic"] = adc_dynamic;
  j["dac_bits"] = dac_bits;
  j["adc_bits"] = adc_bits;
  j["acc_bits"] = acc_bits;
  return j;
}

EnergyTable load_energy_table(const std::string& path) {
  return EnergyTable::from_json(load_json_file(path));
}

namespace {
std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }
}  // namespace

EventCounts layer_event_counts(const GemmShape& g, const OpeConfig& ope, MappingMode mode,
                               const EnergyTable& table) {
  if (mode == MappingMode::Analog)
    throw UnsupportedError("layer_event_counts: analog mapping has no slot/event structure");
  ope.validate();
  table.validate();
  if (g.m < 1 || g.k < 1 || g.n < 1) throw ValidationError("layer_event_counts: gemm dims must be >= 1");

  const bool ws = mode == MappingMode::WeightStationary;
  const std::uint64_t m = static_cast<std::uint64_t>(g.m);
  const std::uint64_t k = static_cast<std::uint64_t>(g.k);
  const std::uint64_t n = static_cast<std::uint64_t>(g.n);
  const std::uint64_t cols = static_cast<std::uint64_t>(ope.columns);
  const std::uint64_t rt = static_cast<std::uint64_t>(ope.rows) * static_cast<std::uint64_t>(ope.tiles);
  const std::uint64_t trc = rt * cols;
  const std::uint64_t slots = static_cast<std::uint64_t>(ope.n_t) + 1;
  const std::uint64_t detect_factor = ope.osa_enabled ? 1 : slots;

  const std::uint64_t stationary = ws ? n : m;  // mapped onto the rows*tiles lanes
  const std::uint64_t streamed = ws ? m : n;    // digit-serialized over the input bus
  const std::uint64_t k_tiles = ceil_div(k, cols);
  const std::uint64_t n_w = k_tiles * ceil_div(stationary, rt);
  const std::uint64_t outputs = m * n;

  EventCounts c;
  c.reprogram_events = n_w;
  c.mrr_writes = n_w * trc;
  c.dac_bits_total = c.mrr_writes * static_cast<std::uint64_t>(table.dac_bits);
  c.eo_slot_bits = k_tiles * streamed * cols * slots;
  c.pd_events = n_w * streamed * rt * detect_factor;
  c.adc_events = c.pd_events;
  c.compute_cycles = n_w * streamed * slots;
  // Partial sums spill per extra reduction pass; the final result is written once.
  const std::uint64_t acc = static_cast<std::uint64_t>(table.acc_bits);
  c.sram_read_bits = (k_tiles - 1) * acc * outputs * detect_factor;
  c.sram_write_bits = (k_tiles - 1) * acc * outputs * detect_factor + acc * outputs;
  c.mrr_active = trc;
  c.buffer_bits = outputs * acc + trc * static_cast<std::uint64_t>(table.dac_bits);
  return c;
}

double layer_delay(const EventCounts& c, const OpeConfig& ope) {
  ope.validate();
  // Reprogramming serializes with compute; no double buffering.
  return static_cast<double>(c.compute_cycles) / ope.clock_hz +
         static_cast<double>(c.reprogram_events) * ope.t_to;
}

EnergyBreakdown energy_breakdown(const EventCounts& c, const EnergyTable& table, double delay_s) {
  table.validate();
  if (!(delay_s >= 0.0)) throw DomainError("energy_breakdown: delay must be non-negative");
  EnergyBreakdown b;
  b.laser = table.laser_static * delay_s;
  b.mrr_static = static_cast<double>(c.mrr_active) * table.mrr_to_static * delay_s;
  b.sram_leak = static_cast<double>(c.buffer_bits) * table.sram_leak * delay_s;
  b.mrr_eo = static_cast<double>(c.eo_slot_bits) * table.mrr_eo_dynamic;
  b.dac = static_cast<double>(c.dac_bits_total) * table.dac_dynamic;
  b.pd_tia = static_cast<double>(c.pd_events) * table.pd_tia_dynamic;
  b.adc = static_cast<double>(c.adc_events) * table.adc_dynamic;
  b.sram_dynamic = static_cast<double>(c.sram_read_bits + c.sram_write_bits) * table.sram_dynamic;
  b.total = b.laser + b.mrr_static + b.sram_leak + b.mrr_eo + b.dac + b.pd_tia + b.adc + b.sram_dynamic;
  return b;
}

LayerCost layer_edp(const GemmShape& g, const OpeConfig& ope, MappingMode mode, const EnergyTable& table) {
  LayerCost cost;
  cost.counts = layer_event_counts(g, ope, mode, table);
  cost.delay_s = layer_delay(cost.counts, ope);
  cost.breakdown = energy_breakdown(cost.counts, table, cost.delay_s);
  cost.energy_j = cost.breakdown.total;
  cost.edp = cost.energy_j * cost.delay_s;
  return cost;
}

double network_edp(const NetworkSpec& net, const OpeConfig& ope, MappingMode mode,
                   const EnergyTable& table) {
  validate_network(net);
  double total = 0.0;
  for (const LayerSpec& l : net.layers) total += layer_edp(conv_to_gemm(l), ope, mode, table).edp;
  return total;
}

}  // namespace mrrsim
