#pragma once

#include "swarmtrack/sim.hpp"
#include "swarmtrack/verify.hpp"

#include <string>

namespace swarmtrack {

/// Shortest round-trip-safe decimal with at least 15 significant digits.
std::string format_number(double v);

/// `t,agent,px,py,...,vx,vy,...`, one row per record and agent (1-based).
std::string trace_csv(const RunResult& result);

/// One row per record; booleans 0/1, inapplicable columns empty.
std::string metrics_csv(const RunResult& result);

std::string report_text(const RunResult& result, const SimConfig& config);

/// key=value lines, stable order.
std::string report_kv(const RunResult& result, const SimConfig& config);

std::string verify_text(const VerifyReport& report);
std::string verify_kv(const VerifyReport& report);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// trace.csv, metrics.csv, report.txt and report.kv under `dir` (created if needed).
void write_run_outputs(const std::string& dir, const RunResult& result, const SimConfig& config);

}  // namespace swarmtrack
