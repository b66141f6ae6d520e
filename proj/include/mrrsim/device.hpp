#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mrrsim/rng.hpp"

namespace mrrsim {

// Parameters of one thermo-optically tuned microring weighting element.
// Wavelengths in nm, voltages in V, heater resistance in ohm, thermal
// resistance in K/mW, thermo-optic coefficient in 1/K. q_min/q_max bound the
// unitless weight range the transmission band is mapped onto.
struct MrrParams {
  double lambda0 = 1538.74;
  double lambda_ref = 1538.26;
  // Round-trip attenuation from the device datasheet. Retained for fidelity;
  // the Lorentzian drop-port response below does not consume it.
  double attenuation_a = 0.925;
  double n0 = 2.4;
  double gamma = 0.7534;
  double heater_resistance = 50.0;
  double thermal_resistance = 2.0;
  double thermo_optic_coeff = 1.86e-4;
  double v_min = 1.0;
  double v_max = 3.0;
  double q_min = -1.0;
  double q_max = 1.0;

  void validate() const;
  static MrrParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Gaussian perturbations applied along the programming chain, plus the base
// seed all derived streams start from.
struct NoiseParams {
  double sigma_dac = 0.02;  // V, applied to the bias voltage
  double sigma_th = 0.04;   // K, applied to the heater temperature rise
  std::uint64_t seed = 0;

  void validate() const;
  static NoiseParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Heater temperature rise at a bias voltage. V^2/R_h lands in mW so the
// K/mW thermal resistance applies directly.
double delta_temperature(double volts, const MrrParams& p);

// Resonance wavelength shift (nm) for a temperature rise, via the thermo-optic
// index change lambda0 * beta * dT / (n0 + beta * dT).
double resonance_shift(double delta_t_kelvin, const MrrParams& p);

// Lorentzian drop-port response at a given detuning from resonance.
double drop_port_transmission(double detuning_nm, double gamma_nm);

// Balanced drop/through detection: 2 * T_drop - 1 at the reference wavelength.
double differential_transmission(double volts, const MrrParams& p);

double weight_from_voltage(double volts, const MrrParams& p);
double voltage_from_weight(double weight, const MrrParams& p);

// One noisy programming event: DAC error on the bias, thermal error on the
// temperature rise, then the same transmission map as the clean chain.
// With both sigmas zero this reproduces weight_from_voltage bit for bit.
double noisy_weight(double volts, const MrrParams& p, const NoiseParams& n, RngStream& rng);

struct TuningFigures {
  double efficiency_nm_per_mw;  // small-signal resonance shift per heater mW
  double static_power_mw;       // heater power to hold half a linewidth
};
TuningFigures tuning_figures(const MrrParams& p);

// Calibrated voltage-to-weight map. Precomputes the transmission endpoints
// once; the free functions above construct one per call.
class WeightMap {
 public:
  explicit WeightMap(const MrrParams& p);
  double weight(double volts) const;
  double voltage(double weight) const;
  double noisy(double volts, const NoiseParams& n, RngStream& rng) const;
  const MrrParams& params() const { return p_; }

 private:
  double from_delta_t(double delta_t_kelvin) const;
  MrrParams p_;
  double t_hi_ = 0.0;  // differential transmission at v_min
  double t_lo_ = 0.0;  // differential transmission at v_max
};

MrrParams load_mrr_params(const std::string& path);
NoiseParams load_noise_params(const std::string& path);

}  // namespace mrrsim
