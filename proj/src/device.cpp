#include "mrrsim/device.hpp"

#include <algorithm>
#include <cmath>

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

void MrrParams::validate() const {
  if (!(lambda0 > 0.0 && lambda_ref > 0.0)) throw ValidationError("mrr params: wavelengths must be positive");
  if (!(lambda0 > lambda_ref)) throw ValidationError("mrr params: lambda0 must exceed lambda_ref");
  if (!(attenuation_a > 0.0 && attenuation_a <= 1.0))
    throw ValidationError("mrr params: attenuation_a must lie in (0, 1]");
  if (!(n0 > 0.0)) throw ValidationError("mrr params: n0 must be positive");
  if (!(gamma > 0.0)) throw ValidationError("mrr params: gamma must be positive");
  if (!(heater_resistance > 0.0)) throw ValidationError("mrr params: heater_resistance must be positive");
  if (!(thermal_resistance > 0.0)) throw ValidationError("mrr params: thermal_resistance must be positive");
  if (!(thermo_optic_coeff > 0.0)) throw ValidationError("mrr params: thermo_optic_coeff must be positive");
  if (!(v_min >= 0.0)) throw ValidationError("mrr params: v_min must be non-negative");
  if (!(v_max > v_min)) throw ValidationError("mrr params: v_max must exceed v_min");
  if (!(q_max > q_min)) throw ValidationError("mrr params: q_max must exceed q_min");
}

MrrParams MrrParams::from_json(const nlohmann::json& j) {
  const std::string ctx = "mrr params";
  check_keys(j, {},
             {"lambda0", "lambda_ref", "attenuation_a", "n0", "gamma", "heater_resistance",
              "thermal_resistance", "thermo_optic_coeff", "v_min", "v_max", "q_min", "q_max"},
             ctx);
  MrrParams p;
  const auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = require_number(j, key, ctx);
  };
  num("lambda0", p.lambda0);
  num("lambda_ref", p.lambda_ref);
  num("attenuation_a", p.attenuation_a);
  num("n0", p.n0);
  num("gamma", p.gamma);
  num("heater_resistance", p.heater_resistance);
  num("thermal_resistance", p.thermal_resistance);
  num("thermo_optic_coeff", p.thermo_optic_coeff);
  num("v_min", p.v_min);
  num("v_max", p.v_max);
  num("q_min", p.q_min);
  num("q_max", p.q_max);
  p.validate();
  return p;
}

nlohmann::json MrrParams::to_json() const {
  nlohmann::ordered_json j;
  j["lambda0"] = lambda0;
  j["lambda_ref"] = lambda_ref;
  j["attenuation_a"] = attenuation_a;
  j["n0"] = n0;
  j["gamma"] = gamma;
  j["heater_resistance"] = heater_resistance;
  j["thermal_resistance"] = thermal_resistance;
  j["thermo_optic_coeff"] = thermo_optic_coeff;
  j["v_min"] = v_min;
  j["v_max"] = v_max;
  j["q_min"] = q_min;
  j["q_max"] = q_max;
  return j;
}

void NoiseParams::validate() const {
  if (!(sigma_dac >= 0.0)) throw ValidationError("noise params: sigma_dac must be non-negative");
  if (!(sigma_th >= 0.0)) throw ValidationError("noise params: sigma_th must be non-negative");
}

NoiseParams NoiseParams::from_json(const nlohmann::json& j) {
  const std::string ctx = "noise params";
  check_keys(j, {}, {"sigma_dac", "sigma_th", "seed"}, ctx);
  NoiseParams n;
  if (j.contains("sigma_dac")) n.sigma_dac = require_number(j, "sigma_dac", ctx);
  if (j.contains("sigma_th")) n.sigma_th = require_number(j, "sigma_th", ctx);
  if (j.contains("seed")) n.seed = static_cast<std::uint64_t>(require_integer(j, "seed", ctx));
  n.validate();
  return n;
}

nlohmann::json NoiseParams::to_json() const {
  nlohmann::ordered_json j;
  j["sigma_dac"] = sigma_dac;
  j["sigma_th"] = sigma_th;
  j["seed"] = seed;
  return j;
}

double delta_temperature(double volts, const MrrParams& p) {
  if (!(volts >= 0.0)) throw DomainError("delta_temperature: voltage must be non-negative");
  const double heater_mw = volts * volts / p.heater_resistance * 1e3;
  return heater_mw * p.thermal_resistance;
}

double resonance_shift(double delta_t_kelvin, const MrrParams& p) {
  if (!(delta_t_kelvin >= 0.0)) throw DomainError("resonance_shift: temperature rise must be non-negative");
  const double bt = p.thermo_optic_coeff * delta_t_kelvin;
  return p.lambda0 * bt / (p.n0 + bt);
}

double drop_port_transmission(double detuning_nm, double gamma_nm) {
  const double g2 = gamma_nm * gamma_nm;
  return g2 / (detuning_nm * detuning_nm + g2);
}

WeightMap::WeightMap(const MrrParams& p) : p_(p) {
  p_.validate();
  t_hi_ = from_delta_t(delta_temperature(p_.v_min, p_));
  t_lo_ = from_delta_t(delta_temperature(p_.v_max, p_));
  if (t_hi_ == t_lo_) throw CalibrationError("weight map: transmission endpoints coincide");
}

double WeightMap::from_delta_t(double delta_t_kelvin) const {
  const double resonance = p_.lambda0 + resonance_shift(delta_t_kelvin, p_);
  return 2.0 * drop_port_transmission(resonance - p_.lambda_ref, p_.gamma) - 1.0;
}

double WeightMap::weight(double volts) const {
  if (!(volts >= p_.v_min && volts <= p_.v_max))
    throw RangeError("weight_from_voltage: voltage outside [v_min, v_max]");
  const double t = from_delta_t(delta_temperature(volts, p_));
  // Lerp on the endpoint values keeps both endpoints exact.
  const double r = (t - t_lo_) / (t_hi_ - t_lo_);
  return p_.q_min * (1.0 - r) + p_.q_max * r;
}

double WeightMap::voltage(double w) const {
  if (!(w >= p_.q_min && w <= p_.q_max))
    throw RangeError("voltage_from_weight: weight outside [q_min, q_max]");
  if (w >= weight(p_.v_min)) return p_.v_min;
  if (w <= weight(p_.v_max)) return p_.v_max;
  // weight() is strictly decreasing in volts; bisect to double resolution.
  double lo = p_.v_min, hi = p_.v_max;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (weight(mid) > w ? lo : hi) = mid;
  }
  return std::abs(weight(lo) - w) <= std::abs(weight(hi) - w) ? lo : hi;
}

double WeightMap::noisy(double volts, const NoiseParams& n, RngStream& rng) const {
  if (!(volts >= p_.v_min && volts <= p_.v_max))
    throw RangeError("noisy_weight: voltage outside [v_min, v_max]");
  const double v = std::clamp(volts + rng.normal(n.sigma_dac), p_.v_min, p_.v_max);
  const double dt = std::max(delta_temperature(v, p_) + rng.normal(n.sigma_th), 0.0);
  const double t = from_delta_t(dt);
  const double r = (t - t_lo_) / (t_hi_ - t_lo_);
  return p_.q_min * (1.0 - r) + p_.q_max * r;
}

double differential_transmission(double volts, const MrrParams& p) {
  if (!(volts >= p.v_min && volts <= p.v_max))
    throw RangeError("differential_transmission: voltage outside [v_min, v_max]");
  const double resonance = p.lambda0 + resonance_shift(delta_temperature(volts, p), p);
  return 2.0 * drop_port_transmission(resonance - p.lambda_ref, p.gamma) - 1.0;
}

double weight_from_voltage(double volts, const MrrParams& p) { return WeightMap(p).weight(volts); }

double voltage_from_weight(double weight, const MrrParams& p) { return WeightMap(p).voltage(weight); }

double noisy_weight(double volts, const MrrParams& p, const NoiseParams& n, RngStream& rng) {
  return WeightMap(p).noisy(volts, n, rng);
}

TuningFigures tuning_figures(const MrrParams& p) {
  p.validate();
  const double efficiency = p.lambda0 * p.thermo_optic_coeff / p.n0 * p.thermal_resistance;
  return {efficiency, 0.5 * p.gamma / efficiency};
}

MrrParams load_mrr_params(const std::string& path) { return MrrParams::from_json(load_json_file(path)); }

NoiseParams load_noise_params(const std::string& path) { return NoiseParams::from_json(load_json_file(path)); }

}  // namespace mrrsim
