#include "mrrsim/ope.hpp"

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

void OpeConfig::validate() const {
  if (tiles < 1 || rows < 1 || columns < 1)
    throw ValidationError("ope config: tiles, rows and columns must be >= 1");
  if (columns > kMaxColumns)
    throw ValidationError("ope config: columns must be <= " + std::to_string(kMaxColumns));
  if (n_t < 0) throw ValidationError("ope config: n_t must be >= 0");
  if (!(clock_hz > 0.0)) throw ValidationError("ope config: clock_hz must be positive");
  if (!(t_eo > 0.0)) throw ValidationError("ope config: t_eo must be positive");
  if (!(t_to >= t_eo)) throw ValidationError("ope config: t_to must be >= t_eo");
}

OpeConfig OpeConfig::from_json(const nlohmann::json& j) {
  const std::string ctx = "ope config";
  check_keys(j, {}, {"tiles", "rows", "columns", "n_t", "clock_hz", "osa_enabled", "t_to", "t_eo"}, ctx);
  OpeConfig c;
  if (j.contains("tiles")) c.tiles = static_cast<int>(require_integer(j, "tiles", ctx));
  if (j.contains("rows")) c.rows = static_cast<int>(require_integer(j, "rows", ctx));
  if (j.contains("columns")) c.columns = static_cast<int>(require_integer(j, "columns", ctx));
  if (j.contains("n_t")) c.n_t = static_cast<int>(require_integer(j, "n_t", ctx));
  if (j.contains("clock_hz")) c.clock_hz = require_number(j, "clock_hz", ctx);
  if (j.contains("osa_enabled")) {
    if (!j["osa_enabled"].is_boolean()) throw ValidationError(ctx + ": key 'osa_enabled' must be a boolean");
    c.osa_enabled = j["osa_enabled"].get<bool>();
  }
  if (j.contains("t_to")) c.t_to = require_number(j, "t_to", ctx);
  if (j.contains("t_eo")) c.t_eo = require_number(j, "t_eo", ctx);
  c.validate();
  return c;
}

nlohmann::json OpeConfig::to_json() const {
  nlohmann::ordered_json j;
  j["tiles"] = tiles;
  j["rows"] = rows;
  j["columns"] = columns;
  j["n_t"] = n_t;
  j["clock_hz"] = clock_hz;
  j["osa_enabled"] = osa_enabled;
  j["t_to"] = t_to;
  j["t_eo"] = t_eo;
  return j;
}

MappingMode mapping_mode_from_string(std::string_view s) {
  if (s == "ws") return MappingMode::WeightStationary;
  if (s == "is") return MappingMode::InputStationary;
  if (s == "analog") return MappingMode::Analog;
  throw ValidationError("mapping mode must be one of ws|is|analog, got '" + std::string(s) + "'");
}

std::string to_string(MappingMode mode) {
  switch (mode) {
    case MappingMode::WeightStationary: return "ws";
    case MappingMode::InputStationary: return "is";
    case MappingMode::Analog: return "analog";
  }
  throw DomainError("mapping mode: invalid enum value");
}

}  // namespace mrrsim
