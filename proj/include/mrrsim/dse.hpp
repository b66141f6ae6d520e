#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrrsim/cost.hpp"
#include "mrrsim/ope.hpp"
#include "mrrsim/workload.hpp"

namespace mrrsim {

// Search space for the array geometry sweep. Candidates are filtered by the
// chip budget constraints before evaluation.
struct DseConstraints {
  int c_max = 8;
  std::int64_t total_mrr_max = 1024;
  std::vector<int> t_candidates = {1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<int> r_candidates = {1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<int> c_candidates = {1, 2, 3, 4, 5, 6, 7, 8};

  void validate() const;
  static DseConstraints from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct AggregateMetric {
  double geomean = 0.0;
  double worst = 0.0;
  double merit = 0.0;
};

// One evaluated configuration: geometry plus per-network total EDP and the
// aggregated score.
struct DseRow {
  int tiles = 0;
  int rows = 0;
  int columns = 0;
  std::vector<double> network_edp;
  AggregateMetric agg;
};

struct DseResult {
  std::vector<std::string> network_names;
  std::vector<DseRow> table;  // in enumeration order
  std::size_t chosen = 0;     // index into table
};

// All geometries satisfying C <= c_max and T*R*C <= total_mrr_max, ordered
// lexicographically in (T, R, C). Non-geometry fields copy from base.
std::vector<OpeConfig> enumerate_configs(const DseConstraints& cons, const OpeConfig& base);

// Geometric mean in log space, worst case, and the lambda blend of the two.
AggregateMetric aggregate_metric(const std::vector<double>& edps, double lambda);

// Full sweep: evaluates every enumerated geometry on every network, then picks
// the argmin of the blended metric. Ties prefer smaller T*R*C, then fewer
// columns, then fewer rows.
DseResult select_config(const std::vector<NetworkSpec>& networks, const DseConstraints& cons,
                        double lambda, const OpeConfig& base, MappingMode mode,
                        const EnergyTable& table);

}  // namespace mrrsim
