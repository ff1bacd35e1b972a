/* C interface to the catmin library. All strings are UTF-8 and
 * NUL-terminated. Returned strings stay valid until the next call on the
 * same session or until the session is destroyed. */
#ifndef CATMIN_CATMIN_H
#define CATMIN_CATMIN_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CATMIN_BUILDING_LIBRARY)
#define CATMIN_API __attribute__((visibility("default")))
#else
#define CATMIN_API
#endif

typedef struct catmin_session catmin_session;

typedef enum catmin_status {
  CATMIN_OK = 0,
  CATMIN_FAIL = 1,          /* command ran; verdict is FAIL */
  CATMIN_INVALID_INPUT = 2, /* malformed instance, option or argument */
  CATMIN_NUMERICAL = 3,
  CATMIN_UNSUPPORTED = 4,
  CATMIN_INTERNAL = 5
} catmin_status;

CATMIN_API const char* catmin_version(void);

CATMIN_API catmin_session* catmin_session_create(void);
CATMIN_API void catmin_session_destroy(catmin_session* s);

/* Keys: seed, refine, samples, trials, amplitude, h, svg (0/1),
 * tol-zero, tol-descent, tol-angle, tol-geodesic. */
CATMIN_API catmin_status catmin_set_option(catmin_session* s, const char* key, const char* value);

/* Relative paths that do not exist are looked up under $CATMIN_FIXTURES. */
CATMIN_API catmin_status catmin_load_file(catmin_session* s, const char* path);
CATMIN_API catmin_status catmin_load_json(catmin_session* s, const char* text);

/* Runs a command; the report is available afterwards even on failure.
 * Returns CATMIN_OK, CATMIN_FAIL or CATMIN_INVALID_INPUT mirroring the
 * command's exit code 0/1/2. */
CATMIN_API catmin_status catmin_run(catmin_session* s, const char* command);

CATMIN_API const char* catmin_report_json(const catmin_session* s);
CATMIN_API const char* catmin_svg(const catmin_session* s);
CATMIN_API const char* catmin_last_error(const catmin_session* s);

#ifdef __cplusplus
}
#endif

#endif
