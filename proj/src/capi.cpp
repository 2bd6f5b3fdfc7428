#include "swarmtrack/swarmtrack.h"

#include "swarmtrack/output.hpp"
#include "swarmtrack/scenario.hpp"
#include "swarmtrack/suite.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

using namespace swarmtrack;

struct swarmtrack_scenario {
  ScenarioDocument doc;
};

struct swarmtrack_run {
  SimConfig config;
  RunResult result;
};

struct swarmtrack_verify_report {
  VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

swarmtrack_status fail(swarmtrack_status code, std::string msg) {
  g_last_error = std::move(msg);
  return code;
}

// Maps exceptions escaping the core onto status codes.
template <class F>
swarmtrack_status guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return fail(SWARMTRACK_ERR_PARSE, e.what());
  } catch (const ConfigError& e) {
    return fail(SWARMTRACK_ERR_CONFIG, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SWARMTRACK_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SWARMTRACK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SWARMTRACK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SWARMTRACK_ERR_INTERNAL, "unknown error");
  }
}

swarmtrack_status copy_out(const std::string& s, char** out) {
  if (!out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null output pointer");
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) return fail(SWARMTRACK_ERR_INTERNAL, "out of memory");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  *out = buf;
  return SWARMTRACK_OK;
}

}  // namespace

extern "C" {

const char* swarmtrack_version(void) { return "1.0.0"; }

const char* swarmtrack_last_error(void) { return g_last_error.c_str(); }

void swarmtrack_string_free(char* s) { std::free(s); }

swarmtrack_status swarmtrack_scenario_parse(const char* text, swarmtrack_scenario** out) {
  if (!text || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new swarmtrack_scenario{ScenarioDocument::parse(text)};
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_load(const char* path, swarmtrack_scenario** out) {
  if (!path || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  if (!std::filesystem::exists(path)) return fail(SWARMTRACK_ERR_IO, std::string("no such file: ") + path);
  return guarded([&] {
    *out = new swarmtrack_scenario{ScenarioDocument::load(path)};
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_preset(const char* name, swarmtrack_scenario** out) {
  if (!name || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  const Preset* p = find_preset(name);
  if (!p) return fail(SWARMTRACK_ERR_NOT_FOUND, std::string("unknown preset '") + name + "'");
  return guarded([&] {
    *out = new swarmtrack_scenario{ScenarioDocument::parse(p->text)};
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_clone(const swarmtrack_scenario* s, swarmtrack_scenario** out) {
  if (!s || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new swarmtrack_scenario{s->doc};
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_set(swarmtrack_scenario* s, const char* key, const char* value) {
  if (!s || !key || !value) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    s->doc.set(key, value);
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_validate(const swarmtrack_scenario* s) {
  if (!s) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null scenario");
  return guarded([&] {
    resolve(s->doc);
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_scenario_to_text(const swarmtrack_scenario* s, char** out) {
  if (!s) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null scenario");
  return copy_out(s->doc.to_text(), out);
}

void swarmtrack_scenario_free(swarmtrack_scenario* s) { delete s; }

size_t swarmtrack_preset_count(void) { return presets().size(); }

const char* swarmtrack_preset_name(size_t index) {
  return index < presets().size() ? presets()[index].name.c_str() : nullptr;
}

const char* swarmtrack_preset_description(size_t index) {
  return index < presets().size() ? presets()[index].description.c_str() : nullptr;
}

swarmtrack_status swarmtrack_run_execute(const swarmtrack_scenario* s, swarmtrack_run** out) {
  if (!s || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Scenario sc = resolve(s->doc);
    auto* r = new swarmtrack_run{sc.config, run(sc.config, sc.team, sc.initial)};
    *out = r;
    return SWARMTRACK_OK;
  });
}

swarmtrack_status swarmtrack_run_summary_get(const swarmtrack_run* r, swarmtrack_run_summary* out) {
  if (!r || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  const RunReport& rep = r->result.report;
  swarmtrack_run_summary s{};
  s.steps = rep.steps_taken;
  s.records = rep.records;
  s.aborted = rep.aborted ? 1 : 0;
  s.initial_connected = rep.initial_connected ? 1 : 0;
  s.violations = rep.violations();
  s.edges_added = rep.edges_added;
  s.connectivity_violations = rep.connectivity_violations;
  s.disconnections = rep.disconnections;
  s.collisions = rep.collisions;
  s.nonfinite = rep.nonfinite;
  s.gain_violation_records = rep.gain_violation_records;
  s.clamp_total = rep.clamp_total;
  s.final_center_error = r->result.metrics.empty() ? std::nan("") : r->result.metrics.back().center_error;
  s.min_pair_distance = std::numeric_limits<double>::infinity();
  for (const auto& m : r->result.metrics) s.min_pair_distance = std::min(s.min_pair_distance, m.min_pair_distance);
  *out = s;
  return SWARMTRACK_OK;
}

size_t swarmtrack_run_record_count(const swarmtrack_run* r) { return r ? r->result.metrics.size() : 0; }

swarmtrack_status swarmtrack_run_metric(const swarmtrack_run* r, size_t record, swarmtrack_metric which,
                                        double* out) {
  if (!r || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  if (record >= r->result.metrics.size()) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "record out of range");
  const Metrics& m = r->result.metrics[record];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (which) {
    case SWARMTRACK_METRIC_TIME: *out = m.t; break;
    case SWARMTRACK_METRIC_CENTER_ERROR: *out = m.center_error; break;
    case SWARMTRACK_METRIC_VELOCITY_CENTER_ERROR: *out = m.velocity_center_error.value_or(nan); break;
    case SWARMTRACK_METRIC_MIN_PAIR_DISTANCE: *out = m.min_pair_distance; break;
    case SWARMTRACK_METRIC_LAMBDA2: *out = m.lambda2; break;
    case SWARMTRACK_METRIC_SUM_GRAD_NORM: *out = m.sum_grad_norm; break;
    case SWARMTRACK_METRIC_CONSENSUS_VEL_NORM: *out = m.consensus_vel_norm.value_or(nan); break;
    case SWARMTRACK_METRIC_LYAP_W: *out = m.lyap_W; break;
    case SWARMTRACK_METRIC_LYAP_W1: *out = m.lyap_W1; break;
    case SWARMTRACK_METRIC_REMARK1_OK: *out = m.remark1_ok ? 1.0 : 0.0; break;
    case SWARMTRACK_METRIC_GAIN_OK: *out = m.gain_ok ? 1.0 : 0.0; break;
    case SWARMTRACK_METRIC_CLAMP_EVENTS: *out = static_cast<double>(m.clamp_events); break;
    default: return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "unknown metric");
  }
  return SWARMTRACK_OK;
}

swarmtrack_status swarmtrack_run_positions(const swarmtrack_run* r, size_t record, double* out, size_t capacity) {
  if (!r || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  if (record >= r->result.trace.size()) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "record out of range");
  const auto& x = r->result.trace[record].positions;
  if (capacity < static_cast<size_t>(x.size())) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(out, x.data(), sizeof(double) * static_cast<size_t>(x.size()));
  return SWARMTRACK_OK;
}

swarmtrack_status swarmtrack_run_write(const swarmtrack_run* r, const char* out_dir) {
  if (!r || !out_dir) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  try {
    write_run_outputs(out_dir, r->result, r->config);
  } catch (const std::exception& e) {
    return fail(SWARMTRACK_ERR_IO, e.what());
  }
  return SWARMTRACK_OK;
}

swarmtrack_status swarmtrack_run_trace_csv(const swarmtrack_run* r, char** out) {
  if (!r) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null run");
  return copy_out(trace_csv(r->result), out);
}

swarmtrack_status swarmtrack_run_report_text(const swarmtrack_run* r, char** out) {
  if (!r) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null run");
  return copy_out(report_text(r->result, r->config), out);
}

swarmtrack_status swarmtrack_run_report_kv(const swarmtrack_run* r, char** out) {
  if (!r) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null run");
  return copy_out(report_kv(r->result, r->config), out);
}

void swarmtrack_run_free(swarmtrack_run* r) { delete r; }

swarmtrack_status swarmtrack_verify(const char* suite, uint64_t seed, const swarmtrack_scenario* s,
                                    swarmtrack_verify_report** out) {
  if (!suite || !out) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null argument");
  Suite which{};
  try {
    which = parse_suite(suite);
  } catch (const ConfigError& e) {
    return fail(SWARMTRACK_ERR_NOT_FOUND, e.what());
  }
  return guarded([&] {
    VerifyReport rep;
    if (s) {
      rep = verify_scenario(resolve(s->doc), which, seed, "scenario");
    } else {
      for (const auto& p : presets()) {
        rep.append(verify_scenario(resolve(ScenarioDocument::parse(p.text)), which, seed, p.name));
      }
    }
    *out = new swarmtrack_verify_report{std::move(rep)};
    return SWARMTRACK_OK;
  });
}

int swarmtrack_verify_passed(const swarmtrack_verify_report* v) { return v && v->report.passed() ? 1 : 0; }

size_t swarmtrack_verify_check_count(const swarmtrack_verify_report* v) { return v ? v->report.checks.size() : 0; }

swarmtrack_status swarmtrack_verify_text(const swarmtrack_verify_report* v, char** out) {
  if (!v) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null report");
  return copy_out(verify_text(v->report), out);
}

swarmtrack_status swarmtrack_verify_kv(const swarmtrack_verify_report* v, char** out) {
  if (!v) return fail(SWARMTRACK_ERR_INVALID_ARGUMENT, "null report");
  return copy_out(verify_kv(v->report), out);
}

void swarmtrack_verify_free(swarmtrack_verify_report* v) { delete v; }

}  // extern "C"
