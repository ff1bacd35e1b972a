#include "catmin/catmin.h"

#include "commands.hpp"

#include <charconv>
#include <new>
#include <optional>
#include <string>

struct catmin_session {
  catmin::CommandOptions options;
  std::optional<catmin::Json> instance;
  std::string report;
  std::string svg;
  std::string error;
};

namespace {

catmin_status fail(catmin_session* s, catmin_status st, std::string msg) {
  s->error = std::move(msg);
  return st;
}

template <class T>
bool parse_value(const std::string& v, T& out) {
  const char* end = v.data() + v.size();
  auto r = std::from_chars(v.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

catmin_status status_of(const catmin::Error& e) {
  switch (e.kind()) {
    case catmin::ErrorKind::InvalidInput: return CATMIN_INVALID_INPUT;
    case catmin::ErrorKind::Numerical: return CATMIN_NUMERICAL;
    case catmin::ErrorKind::Unsupported: return CATMIN_UNSUPPORTED;
  }
  return CATMIN_INTERNAL;
}

}  // namespace

extern "C" {

const char* catmin_version(void) { return "1.0.0"; }

catmin_session* catmin_session_create(void) { return new (std::nothrow) catmin_session(); }

void catmin_session_destroy(catmin_session* s) { delete s; }

catmin_status catmin_set_option(catmin_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return CATMIN_INVALID_INPUT;
  const std::string k = key, v = value;
  auto& o = s->options;
  auto positive = [&](std::optional<double>& slot) {
    double x = 0.0;
    if (!parse_value(v, x) || !(x > 0.0)) return fail(s, CATMIN_INVALID_INPUT, k + " must be a positive number");
    slot = x;
    return CATMIN_OK;
  };
  bool ok = true;
  if (k == "seed") {
    ok = parse_value(v, o.seed);
  } else if (k == "refine") {
    ok = parse_value(v, o.refine) && o.refine >= 1;
  } else if (k == "samples") {
    ok = parse_value(v, o.samples) && o.samples >= 0;
  } else if (k == "trials") {
    ok = parse_value(v, o.trials) && o.trials >= 1;
  } else if (k == "amplitude") {
    ok = parse_value(v, o.amplitude) && o.amplitude > 0.0;
  } else if (k == "spacing") {
    ok = parse_value(v, o.h) && o.h > 0.0;
  } else if (k == "svg") {
    o.svg = v == "1" || v == "true";
  } else if (k == "tol-zero") {
    return positive(o.tol_zero);
  } else if (k == "tol-descent") {
    return positive(o.tol_descent);
  } else if (k == "tol-angle") {
    return positive(o.tol_angle);
  } else if (k == "tol-geodesic") {
    return positive(o.tol_geodesic);
  } else {
    return fail(s, CATMIN_INVALID_INPUT, "unknown option '" + k + "'");
  }
  if (!ok) return fail(s, CATMIN_INVALID_INPUT, "bad value '" + v + "' for option " + k);
  return CATMIN_OK;
}

catmin_status catmin_load_json(catmin_session* s, const char* text) {
  if (!s || !text) return CATMIN_INVALID_INPUT;
  try {
    s->instance = catmin::parse_json_text(text);
    return CATMIN_OK;
  } catch (const catmin::Error& e) {
    return fail(s, status_of(e), e.what());
  } catch (const std::exception& e) {
    return fail(s, CATMIN_INTERNAL, e.what());
  }
}

catmin_status catmin_load_file(catmin_session* s, const char* path) {
  if (!s || !path) return CATMIN_INVALID_INPUT;
  try {
    const std::string p = catmin::resolve_input_path(path);
    s->instance = catmin::parse_json_text(catmin::read_text_file(p));
    return CATMIN_OK;
  } catch (const catmin::Error& e) {
    return fail(s, status_of(e), std::string(path) + ": " + e.what());
  } catch (const std::exception& e) {
    return fail(s, CATMIN_INTERNAL, e.what());
  }
}

catmin_status catmin_run(catmin_session* s, const char* command) {
  if (!s || !command) return CATMIN_INVALID_INPUT;
  try {
    auto r = catmin::run_command(command, s->instance, s->options);
    s->report = catmin::dump(r.report);
    s->svg = std::move(r.svg);
    s->error.clear();
    if (r.report.contains("error")) s->error = r.report["error"]["message"].get<std::string>();
    return r.exit_code == 0 ? CATMIN_OK : r.exit_code == 1 ? CATMIN_FAIL : CATMIN_INVALID_INPUT;
  } catch (const std::exception& e) {
    return fail(s, CATMIN_INTERNAL, e.what());
  }
}

const char* catmin_report_json(const catmin_session* s) { return s ? s->report.c_str() : ""; }
const char* catmin_svg(const catmin_session* s) { return s ? s->svg.c_str() : ""; }
const char* catmin_last_error(const catmin_session* s) { return s ? s->error.c_str() : ""; }

}  // extern "C"
