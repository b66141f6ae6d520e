#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mrrsim/ope.hpp"

namespace mrrsim {

// Measured per-layer behavior of the two streaming modes: accuracy
// degradation in percentage points and energy-delay product in J*s.
struct LayerProfile {
  std::string name;
  double d_is = 0.0;
  double d_ws = 0.0;
  double e_is = 0.0;
  double e_ws = 0.0;

  void validate() const;
  static LayerProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct MapperParams {
  double alpha_min = 0.01;
  double gamma = 0.1;
  double d_tol = 1.0;      // pct at which the accuracy term starts to bite
  double epsilon = 1e-6;   // pct floor that keeps zero-degradation ratios finite

  void validate() const;
  static MapperParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct LayerDecision {
  std::string name;
  MappingMode chosen = MappingMode::WeightStationary;
  double alpha = 0.0;
  double m_is = 0.0;
  double m_ws = 0.0;
};

struct MappingDecision {
  std::vector<LayerDecision> layers;
};

// Accuracy weight for one layer: alpha_min + gamma * ln(1 + d_ref/d_tol),
// clamped to [alpha_min, 1].
double layer_alpha(double d_ref, const MapperParams& params);

// Balanced score of both modes for one layer; ties resolve to WS.
LayerDecision mapping_metric(const LayerProfile& p, const MapperParams& params);

MappingDecision select_mappings(const std::vector<LayerProfile>& profiles,
                                const MapperParams& params);

}  // namespace mrrsim
