#include "mrrsim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "mrrsim/device.hpp"
#include "mrrsim/encoding.hpp"
#include "mrrsim/errors.hpp"
#include "mrrsim/report.hpp"

using namespace mrrsim;

struct mrrsim_device {
  MrrParams params;
  WeightMap map;
  explicit mrrsim_device(const MrrParams& p) : params(p), map(p) {}
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error, const std::string& message) {
  if (error) *error = dup_string(message);
}

// Exceptions cross the C boundary as status codes; most-derived types first.
template <typename Fn>
mrrsim_status guarded(char** error, Fn&& fn) {
  if (error) *error = nullptr;
  try {
    fn();
    return MRRSIM_OK;
  } catch (const DomainError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_DOMAIN;
  } catch (const ShapeError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_SHAPE;
  } catch (const RangeError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_RANGE;
  } catch (const CalibrationError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_CALIBRATION;
  } catch (const ParseError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_PARSE;
  } catch (const IoError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_IO;
  } catch (const UnsupportedError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_UNSUPPORTED;
  } catch (const ValidationError& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  } catch (const nlohmann::json::exception& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_RANGE;
  } catch (const std::bad_alloc&) {
    return MRRSIM_STATUS_INTERNAL;
  } catch (const std::exception& e) {
    set_error(error, e.what());
    return MRRSIM_STATUS_INTERNAL;
  } catch (...) {
    set_error(error, "unknown error");
    return MRRSIM_STATUS_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* mrrsim_version(void) { return "0.1.0"; }

const char* mrrsim_status_name(mrrsim_status status) {
  switch (status) {
    case MRRSIM_OK: return "ok";
    case MRRSIM_STATUS_INVALID_ARGUMENT: return "invalid_argument";
    case MRRSIM_STATUS_DOMAIN: return "domain";
    case MRRSIM_STATUS_RANGE: return "range";
    case MRRSIM_STATUS_SHAPE: return "shape";
    case MRRSIM_STATUS_CALIBRATION: return "calibration";
    case MRRSIM_STATUS_PARSE: return "parse";
    case MRRSIM_STATUS_IO: return "io";
    case MRRSIM_STATUS_UNSUPPORTED: return "unsupported";
    case MRRSIM_STATUS_INTERNAL: return "internal";
  }
  return "unknown";
}

void mrrsim_buffer_free(char* buffer) { std::free(buffer); }

mrrsim_status mrrsim_device_create(const char* params_json, mrrsim_device** out, char** error) {
  if (!out) {
    set_error(error, "out handle pointer is null");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(error, [&] {
    MrrParams p;
    if (params_json && params_json[0] != '\0')
      p = MrrParams::from_json(nlohmann::json::parse(params_json));
    else
      p.validate();
    *out = new mrrsim_device(p);
  });
}

void mrrsim_device_destroy(mrrsim_device* device) { delete device; }

mrrsim_status mrrsim_device_weight_from_voltage(const mrrsim_device* device, double volts,
                                                double* weight, char** error) {
  if (!device || !weight) {
    set_error(error, "null argument");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  return guarded(error, [&] { *weight = device->map.weight(volts); });
}

mrrsim_status mrrsim_device_voltage_from_weight(const mrrsim_device* device, double weight,
                                                double* volts, char** error) {
  if (!device || !volts) {
    set_error(error, "null argument");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  return guarded(error, [&] { *volts = device->map.voltage(weight); });
}

mrrsim_status mrrsim_device_tuning_figures(const mrrsim_device* device,
                                           double* efficiency_nm_per_mw, double* static_power_mw,
                                           char** error) {
  if (!device || !efficiency_nm_per_mw || !static_power_mw) {
    set_error(error, "null argument");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    const TuningFigures f = tuning_figures(device->params);
    *efficiency_nm_per_mw = f.efficiency_nm_per_mw;
    *static_power_mw = f.static_power_mw;
  });
}

mrrsim_status mrrsim_encode(double x, int n_t, int8_t* digits, char** error) {
  if (!digits) {
    set_error(error, "digits buffer is null");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    const DigitStream s = encode_signed_digits(x, n_t);
    for (int t = 0; t <= n_t; ++t) digits[t] = s.digits[static_cast<std::size_t>(t)];
  });
}

mrrsim_status mrrsim_decode(const int8_t* digits, int n_t, double* value, char** error) {
  if (!digits || !value) {
    set_error(error, "null argument");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    DigitStream s;
    s.n_t = n_t;
    if (n_t < 0) throw RangeError("decode: n_t must be >= 0");
    s.digits.assign(digits, digits + n_t + 1);
    *value = decode_value(s);
  });
}

mrrsim_status mrrsim_run_report(const char* command, const char* config_json, char** report_text,
                                char** error) {
  if (!command || !report_text) {
    set_error(error, "null argument");
    return MRRSIM_STATUS_INVALID_ARGUMENT;
  }
  *report_text = nullptr;
  return guarded(error, [&] {
    nlohmann::json cfg = nlohmann::json::object();
    if (config_json && config_json[0] != '\0') {
      try {
        cfg = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
      }
    }
    const std::string text = run_command_text(command, cfg);
    *report_text = dup_string(text);
    if (!*report_text) throw std::bad_alloc();
  });
}

}  // extern "C"
