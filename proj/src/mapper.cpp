#include "mrrsim/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

void LayerProfile::validate() const {
  if (!(d_is >= 0.0) || !(d_ws >= 0.0))
    throw ValidationError("layer profile '" + name + "': degradations must be >= 0");
  if (!(e_is >= 0.0) || !(e_ws >= 0.0))
    throw ValidationError("layer profile '" + name + "': EDPs must be >= 0");
}

LayerProfile LayerProfile::from_json(const nlohmann::json& j) {
  check_keys(j, {"name", "d_is", "d_ws", "e_is", "e_ws"}, {}, "layer profile");
  LayerProfile p;
  p.name = require_string(j, "name", "layer profile");
  p.d_is = require_number(j, "d_is", "layer profile");
  p.d_ws = require_number(j, "d_ws", "layer profile");
  p.e_is = require_number(j, "e_is", "layer profile");
  p.e_ws = require_number(j, "e_ws", "layer profile");
  p.validate();
  return p;
}

nlohmann::json LayerProfile::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["d_is"] = d_is;
  j["d_ws"] = d_ws;
  j["e_is"] = e_is;
  j["e_ws"] = e_ws;
  return j;
}

void MapperParams::validate() const {
  if (!(alpha_min >= 0.0 && alpha_min <= 1.0))
    throw ValidationError("mapper: alpha_min must lie in [0, 1]");
  if (!(gamma >= 0.0)) throw ValidationError("mapper: gamma must be >= 0");
  if (!(d_tol > 0.0)) throw ValidationError("mapper: d_tol must be > 0");
  if (!(epsilon > 0.0)) throw ValidationError("mapper: epsilon must be > 0");
}

MapperParams MapperParams::from_json(const nlohmann::json& j) {
  check_keys(j, {}, {"alpha_min", "gamma", "d_tol", "epsilon"}, "mapper params");
  MapperParams p;
  if (j.contains("alpha_min")) p.alpha_min = require_number(j, "alpha_min", "mapper params");
  if (j.contains("gamma")) p.gamma = require_number(j, "gamma", "mapper params");
  if (j.contains("d_tol")) p.d_tol = require_number(j, "d_tol", "mapper params");
  if (j.contains("epsilon")) p.epsilon = require_number(j, "epsilon", "mapper params");
  p.validate();
  return p;
}

nlohmann::json MapperParams::to_json() const {
  nlohmann::json j;
  j["alpha_min"] = alpha_min;
  j["gamma"] = gamma;
  j["d_tol"] = d_tol;
  j["epsilon"] = epsilon;
  return j;
}

double layer_alpha(double d_ref, const MapperParams& params) {
  const double a = params.alpha_min + params.gamma * std::log1p(d_ref / params.d_tol);
  return std::clamp(a, params.alpha_min, 1.0);
}

namespace {

// Ratio against the better mode. Degradations are floored so two clean modes
// compare as equals and the decision falls to energy; a zero reference EDP
// sends every nonzero competitor to infinity.
double degradation_ratio(double d, double d_ref, double eps) {
  return std::max(d, eps) / std::max(d_ref, eps);
}

double energy_ratio(double e, double e_ref) {
  if (e_ref == 0.0) return e == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return e / e_ref;
}

}  // namespace

LayerDecision mapping_metric(const LayerProfile& p, const MapperParams& params) {
  p.validate();
  params.validate();
  const double d_ref = std::max(std::min(p.d_is, p.d_ws), params.epsilon);
  const double e_ref = std::min(p.e_is, p.e_ws);
  const double alpha = layer_alpha(d_ref, params);

  const auto score = [&](double d, double e) {
    return std::pow(degradation_ratio(d, d_ref, params.epsilon), alpha) *
           std::pow(energy_ratio(e, e_ref), 1.0 - alpha);
  };

  LayerDecision dec;
  dec.name = p.name;
  dec.alpha = alpha;
  dec.m_is = score(p.d_is, p.e_is);
  dec.m_ws = score(p.d_ws, p.e_ws);
  dec.chosen = dec.m_is < dec.m_ws ? MappingMode::InputStationary : MappingMode::WeightStationary;
  return dec;
}

MappingDecision select_mappings(const std::vector<LayerProfile>& profiles,
                                const MapperParams& params) {
  if (profiles.empty()) throw ValidationError("mapper: need at least one layer profile");
  MappingDecision out;
  out.layers.reserve(profiles.size());
  for (const LayerProfile& p : profiles) out.layers.push_back(mapping_metric(p, params));
  return out;
}

}  // namespace mrrsim
