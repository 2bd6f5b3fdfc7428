#include "swarmtrack/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace swarmtrack {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

namespace {

std::string coord_name(int k) {
  static const char* names[] = {"x", "y", "z"};
  return k < 3 ? names[k] : "x" + std::to_string(k + 1);
}

const char* dynamics_name(Dynamics d) { return d == Dynamics::Single ? "single" : "double"; }

struct Stat {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double last = std::numeric_limits<double>::quiet_NaN();
  bool any = false;

  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    last = v;
    any = true;
  }
};

struct MetricColumn {
  const char* name;
  std::function<std::optional<double>(const Metrics&)> get;
};

const std::vector<MetricColumn>& metric_columns() {
  static const std::vector<MetricColumn> cols = {
      {"center_error", [](const Metrics& m) { return std::optional<double>(m.center_error); }},
      {"velocity_center_error", [](const Metrics& m) { return m.velocity_center_error; }},
      {"min_pair_distance", [](const Metrics& m) { return std::optional<double>(m.min_pair_distance); }},
      {"lambda2", [](const Metrics& m) { return std::optional<double>(m.lambda2); }},
      {"sum_grad_norm", [](const Metrics& m) { return std::optional<double>(m.sum_grad_norm); }},
      {"consensus_vel_norm", [](const Metrics& m) { return m.consensus_vel_norm; }},
      {"lyap_W", [](const Metrics& m) { return std::optional<double>(m.lyap_W); }},
      {"lyap_W1", [](const Metrics& m) { return std::optional<double>(m.lyap_W1); }},
  };
  return cols;
}

std::string status_word(const RunReport& r) {
  if (r.aborted) return "aborted";
  if (r.violations() > 0) return "violations";
  return "ok";
}

}  // namespace

std::string trace_csv(const RunResult& result) {
  std::string out = "t,agent";
  const int m = result.trace.empty() ? 0 : result.trace.front().dim();
  for (int k = 0; k < m; ++k) out += ",p" + coord_name(k);
  for (int k = 0; k < m; ++k) out += ",v" + coord_name(k);
  out += '\n';
  for (const auto& s : result.trace) {
    const std::string t = format_number(s.t);
    for (int i = 0; i < s.agents(); ++i) {
      out += t;
      out += ',';
      out += std::to_string(i + 1);
      for (int k = 0; k < m; ++k) {
        out += ',';
        out += format_number(s.positions(i, k));
      }
      for (int k = 0; k < m; ++k) {
        out += ',';
        out += format_number(s.velocities(i, k));
      }
      out += '\n';
    }
  }
  return out;
}

std::string metrics_csv(const RunResult& result) {
  std::string out = "t";
  for (const auto& c : metric_columns()) {
    out += ',';
    out += c.name;
  }
  out += ",remark1_ok,gain_ok,clamp_events\n";
  for (const auto& m : result.metrics) {
    out += format_number(m.t);
    for (const auto& c : metric_columns()) {
      out += ',';
      if (const auto v = c.get(m)) out += format_number(*v);
    }
    out += m.remark1_ok ? ",1" : ",0";
    out += m.gain_ok ? ",1," : ",0,";
    out += std::to_string(m.clamp_events);
    out += '\n';
  }
  return out;
}

std::string report_kv(const RunResult& result, const SimConfig& config) {
  const RunReport& r = result.report;
  std::ostringstream os;
  os << "status=" << status_word(r) << '\n';
  os << "dynamics=" << dynamics_name(config.dynamics) << '\n';
  os << "steps=" << r.steps_taken << '\n';
  os << "records=" << r.records << '\n';
  os << "initial_connected=" << (r.initial_connected ? 1 : 0) << '\n';
  os << "aborted=" << (r.aborted ? 1 : 0) << '\n';
  os << "abort_reason=" << r.abort_reason << '\n';
  os << "violations=" << r.violations() << '\n';
  os << "events.edge_added=" << r.edges_added << '\n';
  os << "events.connectivity_violation=" << r.connectivity_violations << '\n';
  os << "events.disconnected=" << r.disconnections << '\n';
  os << "events.collision=" << r.collisions << '\n';
  os << "events.nonfinite=" << r.nonfinite << '\n';
  os << "records.gain_violation=" << r.gain_violation_records << '\n';
  os << "records.remark1_violation=" << r.remark1_violation_records << '\n';
  os << "clamp_total=" << r.clamp_total << '\n';
  for (const auto& c : metric_columns()) {
    Stat s;
    for (const auto& m : result.metrics) {
      if (const auto v = c.get(m)) s.add(*v);
    }
    if (!s.any) continue;
    os << "metric." << c.name << ".min=" << format_number(s.min) << '\n';
    os << "metric." << c.name << ".max=" << format_number(s.max) << '\n';
    os << "metric." << c.name << ".final=" << format_number(s.last) << '\n';
  }
  return os.str();
}

std::string report_text(const RunResult& result, const SimConfig& config) {
  const RunReport& r = result.report;
  std::ostringstream os;
  os << "swarmtrack run report\n";
  os << "  dynamics:        " << dynamics_name(config.dynamics) << '\n';
  os << "  status:          " << status_word(r) << '\n';
  os << "  steps:           " << r.steps_taken << " of " << config.step_count() << " (dt=" << format_number(config.dt)
     << ")\n";
  os << "  records:         " << r.records << '\n';
  if (!r.initial_connected) os << "  WARNING: initial graph is not connected\n";
  if (r.aborted) os << "  aborted:         " << r.abort_reason << '\n';
  os << "\nevents\n";
  os << "  edges added:              " << r.edges_added << '\n';
  os << "  connectivity violations:  " << r.connectivity_violations << '\n';
  os << "  disconnections:           " << r.disconnections << '\n';
  os << "  collisions:               " << r.collisions << '\n';
  os << "  nonfinite states:         " << r.nonfinite << '\n';
  os << "  gain-condition misses:    " << r.gain_violation_records << " records\n";
  os << "  error-bound misses:       " << r.remark1_violation_records << " records\n";
  os << "  force-cap clamps:         " << r.clamp_total << '\n';
  os << "\nmetrics (min / max / final)\n";
  for (const auto& c : metric_columns()) {
    Stat s;
    for (const auto& m : result.metrics) {
      if (const auto v = c.get(m)) s.add(*v);
    }
    if (!s.any) continue;
    os << "  " << c.name << ": " << format_number(s.min) << " / " << format_number(s.max) << " / "
       << format_number(s.last) << '\n';
  }
  if (!result.tail.empty()) {
    os << "\nstate tail before abort\n";
    for (const auto& s : result.tail) {
      os << "  t=" << format_number(s.t) << ':';
      for (int i = 0; i < s.agents(); ++i) {
        os << " (";
        for (int k = 0; k < s.dim(); ++k) os << (k ? "," : "") << format_number(s.positions(i, k));
        os << ')';
      }
      os << '\n';
    }
  }
  os << "\nplotting: agent paths are the p* columns of trace.csv grouped by agent;\n"
        "tracking error over time is metrics.csv column center_error (velocity_center_error\n"
        "and consensus_vel_norm for double integrators).\n";
  return os.str();
}

std::string verify_kv(const VerifyReport& report) {
  std::ostringstream os;
  os << "status=" << (report.passed() ? "ok" : "failed") << '\n';
  os << "checks=" << report.checks.size() << '\n';
  for (const auto& c : report.checks) {
    os << "check." << c.name << ".passed=" << (c.passed ? 1 : 0) << '\n';
    os << "check." << c.name << ".value=" << format_number(c.value) << '\n';
    os << "check." << c.name << ".threshold=" << format_number(c.threshold) << '\n';
  }
  return os.str();
}

std::string verify_text(const VerifyReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << format_number(c.value)
       << " limit=" << format_number(c.threshold);
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  os << (report.passed() ? "all checks passed" : "some checks failed") << '\n';
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void write_run_outputs(const std::string& dir, const RunResult& result, const SimConfig& config) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  write_atomic((d / "trace.csv").string(), trace_csv(result));
  write_atomic((d / "metrics.csv").string(), metrics_csv(result));
  write_atomic((d / "report.txt").string(), report_text(result, config));
  write_atomic((d / "report.kv").string(), report_kv(result, config));
}

}  // namespace swarmtrack
