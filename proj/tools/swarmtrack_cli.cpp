// Command-line front end over the swarmtrack C API.
#include <swarmtrack/swarmtrack.h>

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct ScenarioDeleter {
  void operator()(swarmtrack_scenario* s) const { swarmtrack_scenario_free(s); }
};
struct RunDeleter {
  void operator()(swarmtrack_run* r) const { swarmtrack_run_free(r); }
};
struct ReportDeleter {
  void operator()(swarmtrack_verify_report* v) const { swarmtrack_verify_free(v); }
};
using ScenarioPtr = std::unique_ptr<swarmtrack_scenario, ScenarioDeleter>;
using RunPtr = std::unique_ptr<swarmtrack_run, RunDeleter>;
using ReportPtr = std::unique_ptr<swarmtrack_verify_report, ReportDeleter>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  swarmtrack_string_free(s);
  return out;
}

void report_error(const std::string& what) {
  std::cerr << "error: " << what << ": " << swarmtrack_last_error() << '\n';
}

// Accepts a file path, the same path with ".scn" appended, or a built-in preset
// name (optionally written as presets/<name>).
ScenarioPtr open_scenario(const std::string& ref) {
  swarmtrack_scenario* s = nullptr;
  for (const std::string& path : {ref, ref + ".scn"}) {
    std::error_code ec;
    if (fs::is_regular_file(path, ec)) {
      if (swarmtrack_scenario_load(path.c_str(), &s) != SWARMTRACK_OK) {
        report_error("cannot load scenario '" + path + "'");
        return nullptr;
      }
      return ScenarioPtr(s);
    }
  }
  const std::string name = fs::path(ref).filename().string();
  if (swarmtrack_scenario_preset(name.c_str(), &s) != SWARMTRACK_OK) {
    std::cerr << "error: '" << ref << "' is neither a scenario file nor a built-in preset\n";
    return nullptr;
  }
  return ScenarioPtr(s);
}

bool apply_overrides(swarmtrack_scenario* s, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: override '" << kv << "' is not of the form key=value\n";
      return false;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (swarmtrack_scenario_set(s, key.c_str(), value.c_str()) != SWARMTRACK_OK) {
      report_error("override '" + kv + "' rejected");
      return false;
    }
  }
  return true;
}

struct RunOutcome {
  int exit_code = kExitUsage;
  swarmtrack_run_summary summary{};
};

RunOutcome execute_and_write(const swarmtrack_scenario* s, const std::string& out_dir, bool quiet) {
  RunOutcome outcome;
  swarmtrack_run* raw = nullptr;
  if (swarmtrack_run_execute(s, &raw) != SWARMTRACK_OK) {
    report_error("run failed");
    return outcome;
  }
  RunPtr run(raw);
  if (swarmtrack_run_write(run.get(), out_dir.c_str()) != SWARMTRACK_OK) {
    report_error("cannot write outputs to '" + out_dir + "'");
    return outcome;
  }
  swarmtrack_run_summary_get(run.get(), &outcome.summary);
  if (!quiet) {
    char* text = nullptr;
    if (swarmtrack_run_report_text(run.get(), &text) == SWARMTRACK_OK) std::cout << take_string(text);
  }
  outcome.exit_code = (outcome.summary.aborted || outcome.summary.violations > 0) ? kExitViolation : kExitOk;
  return outcome;
}

int cmd_run(const std::string& ref, const std::string& out_dir, const std::vector<std::string>& overrides) {
  ScenarioPtr s = open_scenario(ref);
  if (!s || !apply_overrides(s.get(), overrides)) return kExitUsage;
  if (swarmtrack_scenario_validate(s.get()) != SWARMTRACK_OK) {
    report_error("invalid scenario");
    return kExitUsage;
  }
  return execute_and_write(s.get(), out_dir, false).exit_code;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& scenario_ref, bool machine) {
  ScenarioPtr s;
  if (!scenario_ref.empty()) {
    s = open_scenario(scenario_ref);
    if (!s) return kExitUsage;
  }
  swarmtrack_verify_report* raw = nullptr;
  if (swarmtrack_verify(suite.c_str(), seed, s.get(), &raw) != SWARMTRACK_OK) {
    report_error("verify failed");
    return kExitUsage;
  }
  ReportPtr rep(raw);
  char* text = nullptr;
  const auto status = machine ? swarmtrack_verify_kv(rep.get(), &text) : swarmtrack_verify_text(rep.get(), &text);
  if (status == SWARMTRACK_OK) std::cout << take_string(text);
  return swarmtrack_verify_passed(rep.get()) ? kExitOk : kExitViolation;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
  return out;
}

int cmd_sweep(const std::string& ref, const std::string& param, std::vector<std::string> values,
              const std::string& out_dir, const std::vector<std::string>& overrides, bool parallel) {
  std::erase_if(values, [](const std::string& v) { return v.empty(); });
  if (values.empty()) {
    std::cerr << "error: sweep needs at least one value\n";
    return kExitUsage;
  }
  ScenarioPtr base = open_scenario(ref);
  if (!base || !apply_overrides(base.get(), overrides)) return kExitUsage;

  // Build and validate every variant before running any of them.
  std::vector<ScenarioPtr> variants;
  std::vector<std::string> dirs;
  for (std::size_t k = 0; k < values.size(); ++k) {
    swarmtrack_scenario* c = nullptr;
    if (swarmtrack_scenario_clone(base.get(), &c) != SWARMTRACK_OK) {
      report_error("clone failed");
      return kExitUsage;
    }
    variants.emplace_back(c);
    if (swarmtrack_scenario_set(c, param.c_str(), values[k].c_str()) != SWARMTRACK_OK ||
        swarmtrack_scenario_validate(c) != SWARMTRACK_OK) {
      report_error(param + "=" + values[k]);
      return kExitUsage;
    }
    dirs.push_back((fs::path(out_dir) / (std::to_string(k + 1) + "_" + sanitize(param) + "=" + sanitize(values[k])))
                       .string());
  }

  std::vector<RunOutcome> outcomes(values.size());
  auto work = [&](std::size_t k) { outcomes[k] = execute_and_write(variants[k].get(), dirs[k], true); };
  if (parallel) {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < values.size(); ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t k = 0; k < values.size(); ++k) work(k);
  }

  std::ostringstream csv;
  csv.precision(15);
  csv << "value,final_center_error,min_pair_distance,violations,exit_code\n";
  int worst = kExitOk;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& o = outcomes[k];
    csv << values[k] << ',' << o.summary.final_center_error << ',' << o.summary.min_pair_distance << ','
        << o.summary.violations << ',' << o.exit_code << '\n';
    if (o.exit_code == kExitUsage) worst = kExitUsage;
    else if (o.exit_code == kExitViolation && worst == kExitOk) worst = kExitViolation;
  }
  const fs::path summary = fs::path(out_dir) / "summary.csv";
  const fs::path tmp = fs::path(out_dir) / "summary.csv.tmp";
  {
    std::ofstream f(tmp);
    f << csv.str();
    if (!f) {
      std::cerr << "error: cannot write " << summary << '\n';
      return kExitUsage;
    }
  }
  fs::rename(tmp, summary);
  std::cout << csv.str();
  return worst;
}

int cmd_presets(const std::string& format) {
  const bool machine = format == "machine";
  for (std::size_t k = 0; k < swarmtrack_preset_count(); ++k) {
    const std::string name = swarmtrack_preset_name(k);
    swarmtrack_scenario* raw = nullptr;
    if (swarmtrack_scenario_preset(name.c_str(), &raw) != SWARMTRACK_OK) {
      report_error("preset " + name);
      return kExitUsage;
    }
    ScenarioPtr s(raw);
    char* text = nullptr;
    swarmtrack_scenario_to_text(s.get(), &text);
    const std::string body = take_string(text);
    if (!machine) {
      if (k > 0) std::cout << '\n';
      std::cout << "# preset: " << name << "\n# " << swarmtrack_preset_description(k) << '\n' << body;
      continue;
    }
    std::cout << "preset." << name << ".description=" << swarmtrack_preset_description(k) << '\n';
    std::istringstream in(body);
    std::string line, section;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.front() == '[') {
        section = line.substr(1, line.size() - 2);
        continue;
      }
      const auto eq = line.find(" = ");
      std::cout << "preset." << name << '.' << section << '.' << line.substr(0, eq) << '=' << line.substr(eq + 3)
                << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed swarm tracking simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(swarmtrack_version()));

  std::string scenario, out_dir = ".", param, suite, format = "human", verify_scenario;
  std::vector<std::string> overrides, values;
  std::uint64_t seed = 1;
  bool parallel = false, machine = false;

  auto* run = app.add_subcommand("run", "Run one scenario and write trace, metrics and report");
  run->add_option("scenario", scenario, "Scenario file or preset name")->required();
  run->add_option("--out,-o", out_dir, "Output directory");
  run->add_option("--set", overrides, "Override section.key=value (repeatable)");

  auto* verify = app.add_subcommand("verify", "Run the oracle suites");
  verify->add_option("suite", suite, "all|cost|potential|optimum|averaged")
      ->required()
      ->check(CLI::IsMember({"all", "cost", "potential", "optimum", "averaged"}));
  verify->add_option("--seed", seed, "Sampling seed");
  verify->add_option("--scenario", verify_scenario, "Verify this scenario instead of both presets");
  verify->add_flag("--machine", machine, "Emit key=value lines");

  auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a parameter");
  sweep->add_option("scenario", scenario, "Scenario file or preset name")->required();
  sweep->add_option("--param", param, "Parameter path, e.g. integration.dt")->required();
  sweep->add_option("--values", values, "Comma separated values")->delimiter(',')->required();
  sweep->add_option("--out,-o", out_dir, "Output directory")->required();
  sweep->add_option("--set", overrides, "Override applied to every run (repeatable)");
  sweep->add_flag("--parallel", parallel, "Run values concurrently");

  auto* presets = app.add_subcommand("presets", "List the built-in presets");
  presets->add_option("--format", format, "human|machine")->check(CLI::IsMember({"human", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(scenario, out_dir, overrides);
    if (*verify) return cmd_verify(suite, seed, verify_scenario, machine);
    if (*sweep) return cmd_sweep(scenario, param, values, out_dir, overrides, parallel);
    if (*presets) return cmd_presets(format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
