#ifndef FOCKFORGE_H
#define FOCKFORGE_H

#include <stddef.h>

#if defined(FOCKFORGE_BUILDING_LIBRARY)
#define FF_API __attribute__((visibility("default")))
#else
#define FF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ff_status {
  FF_OK = 0,
  FF_INVALID_ARGUMENT = 1,
  FF_BASIS_MISMATCH = 2,
  FF_MEMORY_GUARD = 3,
  FF_TAIL_BOUND = 4,
  FF_NORMALIZATION = 5,
  FF_PARSE = 6,
  FF_CONFIG = 7,
  FF_IO = 8,
  FF_NUMERIC = 9,
  FF_INTERNAL = 10
} ff_status;

typedef struct ff_basis ff_basis;
typedef struct ff_state ff_state;

FF_API const char* ff_version(void);
/* Message of the last failed call on this thread, "" if none. */
FF_API const char* ff_last_error(void);
FF_API const char* ff_status_name(ff_status status);
FF_API void ff_string_free(char* s);

/* max_size 0 means the default guard of 10^6 states. */
FF_API ff_status ff_basis_create(int modes, int cutoff, size_t max_size, ff_basis** out);
FF_API void ff_basis_destroy(ff_basis* basis);
FF_API size_t ff_basis_size(const ff_basis* basis);
FF_API int ff_basis_modes(const ff_basis* basis);
/* occ must hold ff_basis_modes() entries. */
FF_API ff_status ff_basis_occupations(const ff_basis* basis, size_t ordinal, int* occ);

/* Family record as JSON text, e.g. {"family":"glauber","alpha":[[0.5,0]]}. */
FF_API ff_status ff_state_create(const ff_basis* basis, const char* record, ff_state** out);
FF_API void ff_state_destroy(ff_state* state);
/* Dense amplitudes in basis order; re and im hold ff_basis_size() entries. */
FF_API ff_status ff_state_amplitudes(const ff_state* state, double* re, double* im);
FF_API ff_status ff_state_norm2(const ff_state* state, double* out);
FF_API ff_status ff_state_truncation_loss(const ff_state* state, double* out);
FF_API ff_status ff_state_inner(const ff_state* bra, const ff_state* ket, double* re, double* im);

/* Generators use the text form, e.g. "0.5*K1 + Product(E(1,1),Edag(1,1))". */
FF_API ff_status ff_generator_canonical(const char* text, char** out);
FF_API ff_status ff_apply_generator(const char* generator, const ff_state* in, ff_state** out);
FF_API ff_status ff_eigen_residual(const char* generator, const ff_state* state, double eigen_re, double eigen_im,
                                   double* residual);

/* Runs a JSON config. out_dir and formats ("json,txt,csv") may be NULL to
   use the config's own settings. exit_code receives 0 (all checks pass),
   1 (a check failed) or 2 (config error); report_text, if not NULL, the
   human-readable report (free with ff_string_free). */
FF_API ff_status ff_run_file(const char* path, const char* out_dir, const char* formats, int override_memory_guard,
                             int* exit_code, char** report_text);
FF_API ff_status ff_run_text(const char* config, const char* out_dir, const char* formats, int override_memory_guard,
                             int* exit_code, char** report_text);

/* Suite names and parameter schemas as JSON. */
FF_API ff_status ff_suite_catalog(char** out);
/* CSV with columns nu, z, lhs, rhs, ratio. */
FF_API ff_status ff_bessel_check_csv(const int* nus, size_t n_nu, const double* zs, size_t n_z, char** out);

#ifdef __cplusplus
}
#endif

#endif
