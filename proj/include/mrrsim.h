/* C interface to the mrrsim core. Every entry point returns a status code;
 * functions that can fail in interesting ways also hand back a malloc'd
 * message through `error`, which the caller releases with mrrsim_buffer_free.
 * All strings are UTF-8; all handles are opaque.
 */
#ifndef MRRSIM_H
#define MRRSIM_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(MRRSIM_BUILD)
#    define MRRSIM_API __declspec(dllexport)
#  else
#    define MRRSIM_API __declspec(dllimport)
#  endif
#else
#  define MRRSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrrsim_status {
  MRRSIM_OK = 0,
  MRRSIM_STATUS_INVALID_ARGUMENT = 1, /* config/usage violations */
  MRRSIM_STATUS_DOMAIN = 2,           /* argument outside a physical domain */
  MRRSIM_STATUS_RANGE = 3,            /* value outside its operating range */
  MRRSIM_STATUS_SHAPE = 4,            /* inconsistent array dimensions */
  MRRSIM_STATUS_CALIBRATION = 5,      /* degenerate device calibration */
  MRRSIM_STATUS_PARSE = 6,            /* malformed JSON or schema violation */
  MRRSIM_STATUS_IO = 7,               /* missing or unreadable/unwritable file */
  MRRSIM_STATUS_UNSUPPORTED = 8,      /* valid request outside the model's scope */
  MRRSIM_STATUS_INTERNAL = 9
} mrrsim_status;

typedef struct mrrsim_device mrrsim_device;

MRRSIM_API const char* mrrsim_version(void);
MRRSIM_API const char* mrrsim_status_name(mrrsim_status status);

/* Releases any buffer returned through a char** out-parameter. NULL is ok. */
MRRSIM_API void mrrsim_buffer_free(char* buffer);

/* params_json: device parameter object, NULL or "" for defaults. */
MRRSIM_API mrrsim_status mrrsim_device_create(const char* params_json, mrrsim_device** out,
                                              char** error);
MRRSIM_API void mrrsim_device_destroy(mrrsim_device* device);

MRRSIM_API mrrsim_status mrrsim_device_weight_from_voltage(const mrrsim_device* device,
                                                           double volts, double* weight,
                                                           char** error);
MRRSIM_API mrrsim_status mrrsim_device_voltage_from_weight(const mrrsim_device* device,
                                                           double weight, double* volts,
                                                           char** error);
MRRSIM_API mrrsim_status mrrsim_device_tuning_figures(const mrrsim_device* device,
                                                      double* efficiency_nm_per_mw,
                                                      double* static_power_mw, char** error);

/* digits must hold n_t + 1 entries, least significant slot first. */
MRRSIM_API mrrsim_status mrrsim_encode(double x, int n_t, int8_t* digits, char** error);
MRRSIM_API mrrsim_status mrrsim_decode(const int8_t* digits, int n_t, double* value, char** error);

/* Runs one reporting command (device-curve, mac-sim, energy, dse, profile,
 * map) from a JSON config and returns the rendered report text. */
MRRSIM_API mrrsim_status mrrsim_run_report(const char* command, const char* config_json,
                                           char** report_text, char** error);

#ifdef __cplusplus
}
#endif

#endif /* MRRSIM_H */
