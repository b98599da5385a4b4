/* C interface to the symbiotic backscatter toolkit. All functions return an
   sbc_status; on failure sbc_last_error() describes the problem (per thread). */
#ifndef SBC_SBC_H
#define SBC_SBC_H

#include <stdint.h>

#if defined(_WIN32)
#define SBC_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SBC_API __attribute__((visibility("default")))
#else
#define SBC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbc_status {
  SBC_OK = 0,
  SBC_ERR_INVALID_ARGUMENT = 1,
  SBC_ERR_SCENARIO = 2,
  SBC_ERR_PRECISION = 3,
  SBC_ERR_DOMAIN = 4, /* module precondition violated */
  SBC_ERR_INTERNAL = 5
} sbc_status;

typedef enum sbc_scheme { SBC_MASK = 0, SBC_MPSK = 1 } sbc_scheme;

typedef struct sbc_complex {
  double re;
  double im;
} sbc_complex;

typedef struct sbc_channel {
  sbc_complex h1; /* PT -> receiver */
  sbc_complex h2; /* PT -> BD */
  sbc_complex h3; /* BD -> receiver */
} sbc_channel;

typedef struct sbc_system {
  double power_w;
  double noise_w;
  int spread;
} sbc_system;

typedef struct sbc_scenario sbc_scenario;

SBC_API const char* sbc_version(void);
SBC_API const char* sbc_last_error(void);
SBC_API void sbc_string_free(char* s);

SBC_API sbc_status sbc_scenario_default(sbc_scenario** out);
SBC_API sbc_status sbc_scenario_load_file(const char* path, sbc_scenario** out);
SBC_API sbc_status sbc_scenario_load_string(const char* text, sbc_scenario** out);
SBC_API void sbc_scenario_free(sbc_scenario* s);

/* "a.b.c=value"; the scenario is left untouched when the result is invalid. */
SBC_API sbc_status sbc_scenario_override(sbc_scenario* s, const char* assignment);
SBC_API sbc_status sbc_scenario_set_seed(sbc_scenario* s, uint64_t seed);
/* Sweep steps, or grid points for "optimize". 0 restores the default. */
SBC_API sbc_status sbc_scenario_set_grid(sbc_scenario* s, int grid);
/* Canonical text; free with sbc_string_free. */
SBC_API sbc_status sbc_scenario_to_string(const sbc_scenario* s, char** out);
/* NULL when the scenario raises no warning. Valid until the next change. */
SBC_API const char* sbc_scenario_warning(const sbc_scenario* s);

/* rate, phase-sweep, ratio-sweep, order-sweep, optimize or mi. The CSV is
   returned in *csv_out and must be freed with sbc_string_free. */
SBC_API sbc_status sbc_run(const sbc_scenario* s, const char* command, char** csv_out);

SBC_API sbc_status sbc_composite_phase(const sbc_channel* ch, double* out);
SBC_API sbc_status sbc_pt_rate_no_bd(const sbc_system* sys, const sbc_channel* ch,
                                     double* out);
/* alpha0 is ignored for MASK. */
SBC_API sbc_status sbc_pt_rate(const sbc_system* sys, const sbc_channel* ch,
                               sbc_scheme scheme, int order, double alpha0,
                               double phase, double* out);
SBC_API sbc_status sbc_pt_rate_ask_infinite(const sbc_system* sys, const sbc_channel* ch,
                                            double phase, double* out);
SBC_API sbc_status sbc_pt_rate_psk_infinite(const sbc_system* sys, const sbc_channel* ch,
                                            double alpha0, double* out);
SBC_API sbc_status sbc_bd_rate(const sbc_system* sys, const sbc_channel* ch,
                               sbc_scheme scheme, int order, double alpha0,
                               double phase, double* out);
SBC_API sbc_status sbc_optimal_phase(sbc_scheme scheme, double theta0, int order,
                                     double* out);

#ifdef __cplusplus
}
#endif

#endif
