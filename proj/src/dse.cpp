#include "mrrsim/dse.hpp"

#include <algorithm>
#include <cmath>

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

void DseConstraints::validate() const {
  if (c_max < 1) throw ValidationError("dse: c_max must be >= 1");
  if (total_mrr_max < 1) throw ValidationError("dse: total_mrr_max must be >= 1");
  if (t_candidates.empty() || r_candidates.empty() || c_candidates.empty())
    throw ValidationError("dse: candidate lists must be nonempty");
  for (int v : t_candidates)
    if (v < 1) throw ValidationError("dse: tile candidates must be >= 1");
  for (int v : r_candidates)
    if (v < 1) throw ValidationError("dse: row candidates must be >= 1");
  for (int v : c_candidates)
    if (v < 1) throw ValidationError("dse: column candidates must be >= 1");
}

DseConstraints DseConstraints::from_json(const nlohmann::json& j) {
  check_keys(j, {},
             {"c_max", "total_mrr_max", "t_candidates", "r_candidates", "c_candidates"},
             "dse constraints");
  DseConstraints cons;
  if (j.contains("c_max")) cons.c_max = static_cast<int>(require_integer(j, "c_max", "dse constraints"));
  if (j.contains("total_mrr_max"))
    cons.total_mrr_max = require_integer(j, "total_mrr_max", "dse constraints");
  const auto read_list = [&](const char* key, std::vector<int>& out) {
    if (!j.contains(key)) return;
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw ParseError(std::string("dse constraints: ") + key + " must be an array");
    out.clear();
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw ParseError(std::string("dse constraints: ") + key + " entries must be integers");
      out.push_back(v.get<int>());
    }
  };
  read_list("t_candidates", cons.t_candidates);
  read_list("r_candidates", cons.r_candidates);
  read_list("c_candidates", cons.c_candidates);
  cons.validate();
  return cons;
}

nlohmann::json DseConstraints::to_json() const {
  nlohmann::json j;
  j["c_max"] = c_max;
  j["total_mrr_max"] = total_mrr_max;
  j["t_candidates"] = t_candidates;
  j["r_candidates"] = r_candidates;
  j["c_candidates"] = c_candidates;
  return j;
}

std::vector<OpeConfig> enumerate_configs(const DseConstraints& cons, const OpeConfig& base) {
  cons.validate();
  std::vector<int> ts = cons.t_candidates;
  std::vector<int> rs = cons.r_candidates;
  std::vector<int> cs = cons.c_candidates;
  std::sort(ts.begin(), ts.end());
  std::sort(rs.begin(), rs.end());
  std::sort(cs.begin(), cs.end());

  std::vector<OpeConfig> out;
  for (int t : ts) {
    for (int r : rs) {
      for (int c : cs) {
        if (c > cons.c_max) continue;
        if (static_cast<std::int64_t>(t) * r * c > cons.total_mrr_max) continue;
        OpeConfig cfg = base;
        cfg.tiles = t;
        cfg.rows = r;
        cfg.columns = c;
        cfg.validate();
        out.push_back(cfg);
      }
    }
  }
  return out;
}

AggregateMetric aggregate_metric(const std::vector<double>& edps, double lambda) {
  if (edps.empty()) throw DomainError("aggregate_metric: need at least one network");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("aggregate_metric: lambda must lie in [0, 1]");
  double log_sum = 0.0;
  double worst = 0.0;
  for (double e : edps) {
    if (!(e > 0.0)) throw DomainError("aggregate_metric: EDP values must be positive");
    log_sum += std::log(e);
    worst = std::max(worst, e);
  }
  AggregateMetric m;
  m.geomean = std::exp(log_sum / static_cast<double>(edps.size()));
  m.worst = worst;
  m.merit = (1.0 - lambda) * m.geomean + lambda * m.worst;
  return m;
}

DseResult select_config(const std::vector<NetworkSpec>& networks, const DseConstraints& cons,
                        double lambda, const OpeConfig& base, MappingMode mode,
                        const EnergyTable& table) {
  if (networks.empty()) throw ValidationError("dse: need at least one network");
  const std::vector<OpeConfig> configs = enumerate_configs(cons, base);
  if (configs.empty()) throw ValidationError("dse: constraints admit no configuration");

  DseResult res;
  for (const NetworkSpec& n : networks) res.network_names.push_back(n.name);
  res.table.reserve(configs.size());
  for (const OpeConfig& cfg : configs) {
    DseRow row;
    row.tiles = cfg.tiles;
    row.rows = cfg.rows;
    row.columns = cfg.columns;
    for (const NetworkSpec& n : networks) row.network_edp.push_back(network_edp(n, cfg, mode, table));
    row.agg = aggregate_metric(row.network_edp, lambda);
    res.table.push_back(std::move(row));
  }

  const auto key = [](const DseRow& r) {
    return std::make_tuple(r.agg.merit, static_cast<std::int64_t>(r.tiles) * r.rows * r.columns,
                           r.columns, r.rows);
  };
  res.chosen = 0;
  for (std::size_t i = 1; i < res.table.size(); ++i)
    if (key(res.table[i]) < key(res.table[res.chosen])) res.chosen = i;
  return res;
}

}  // namespace mrrsim
