#include <doctest.h>

#include <swarmtrack/swarmtrack.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
  std::string out = s;
  swarmtrack_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("presets are listed") {
  REQUIRE(swarmtrack_preset_count() == 2);
  CHECK(std::string(swarmtrack_preset_name(0)) == "single_fig1");
  CHECK(std::string(swarmtrack_preset_name(1)) == "double_fig2");
  CHECK(swarmtrack_preset_name(2) == nullptr);
  CHECK(std::strlen(swarmtrack_preset_description(0)) > 0);
  CHECK(std::strlen(swarmtrack_version()) > 0);
}

TEST_CASE("status codes") {
  swarmtrack_scenario* s = nullptr;
  CHECK(swarmtrack_scenario_preset("missing", &s) == SWARMTRACK_ERR_NOT_FOUND);
  CHECK(std::string(swarmtrack_last_error()).find("missing") != std::string::npos);
  CHECK(swarmtrack_scenario_parse("[bogus]\n", &s) == SWARMTRACK_ERR_PARSE);
  CHECK(swarmtrack_scenario_parse(nullptr, &s) == SWARMTRACK_ERR_INVALID_ARGUMENT);
  CHECK(swarmtrack_scenario_load("/nonexistent/file.scn", &s) == SWARMTRACK_ERR_IO);
  CHECK(s == nullptr);

  REQUIRE(swarmtrack_scenario_preset("single_fig1", &s) == SWARMTRACK_OK);
  CHECK(swarmtrack_scenario_set(s, "gains.nonsense", "1") == SWARMTRACK_ERR_PARSE);
  CHECK(std::string(swarmtrack_last_error()).find("gains.nonsense") != std::string::npos);
  CHECK(swarmtrack_scenario_set(s, "cost.sigma", "-1") == SWARMTRACK_OK);
  CHECK(swarmtrack_scenario_validate(s) != SWARMTRACK_OK);
  swarmtrack_run* r = nullptr;
  CHECK(swarmtrack_run_execute(s, &r) != SWARMTRACK_OK);
  CHECK(r == nullptr);
  swarmtrack_verify_report* v = nullptr;
  CHECK(swarmtrack_verify("cost", 1, s, &v) != SWARMTRACK_OK);
  CHECK(swarmtrack_verify("nonsense", 1, nullptr, &v) == SWARMTRACK_ERR_NOT_FOUND);
  swarmtrack_scenario_free(s);
  swarmtrack_scenario_free(nullptr);
  swarmtrack_run_free(nullptr);
  swarmtrack_verify_free(nullptr);
}

TEST_CASE("short run through the C interface") {
  swarmtrack_scenario* s = nullptr;
  REQUIRE(swarmtrack_scenario_preset("single_fig1", &s) == SWARMTRACK_OK);
  REQUIRE(swarmtrack_scenario_set(s, "integration.t_end", "0.01") == SWARMTRACK_OK);
  swarmtrack_scenario* copy = nullptr;
  REQUIRE(swarmtrack_scenario_clone(s, &copy) == SWARMTRACK_OK);
  REQUIRE(swarmtrack_scenario_set(copy, "integration.t_end", "0") == SWARMTRACK_OK);

  swarmtrack_run* r = nullptr;
  REQUIRE(swarmtrack_run_execute(s, &r) == SWARMTRACK_OK);
  swarmtrack_run_summary sum{};
  REQUIRE(swarmtrack_run_summary_get(r, &sum) == SWARMTRACK_OK);
  CHECK(sum.steps == 10);
  CHECK(sum.records == 11);
  CHECK(sum.aborted == 0);
  CHECK(sum.violations == 0);
  CHECK(sum.initial_connected == 1);
  CHECK(swarmtrack_run_record_count(r) == 11);

  double t = -1;
  REQUIRE(swarmtrack_run_metric(r, 10, SWARMTRACK_METRIC_TIME, &t) == SWARMTRACK_OK);
  CHECK(t == doctest::Approx(0.01));
  double vce = 0;
  REQUIRE(swarmtrack_run_metric(r, 0, SWARMTRACK_METRIC_VELOCITY_CENTER_ERROR, &vce) == SWARMTRACK_OK);
  CHECK(std::isnan(vce));
  double l2 = 0;
  REQUIRE(swarmtrack_run_metric(r, 0, SWARMTRACK_METRIC_LAMBDA2, &l2) == SWARMTRACK_OK);
  CHECK(l2 == doctest::Approx(6.0));
  CHECK(swarmtrack_run_metric(r, 11, SWARMTRACK_METRIC_TIME, &t) == SWARMTRACK_ERR_INVALID_ARGUMENT);

  std::vector<double> pos(12);
  REQUIRE(swarmtrack_run_positions(r, 0, pos.data(), pos.size()) == SWARMTRACK_OK);
  CHECK(pos[0] == 1.5);
  CHECK(pos[1] == 0.0);
  CHECK(swarmtrack_run_positions(r, 0, pos.data(), 3) == SWARMTRACK_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(swarmtrack_run_trace_csv(r, &csv) == SWARMTRACK_OK);
  CHECK(take(csv).rfind("t,agent,px,py,vx,vy\n", 0) == 0);
  char* kv = nullptr;
  REQUIRE(swarmtrack_run_report_kv(r, &kv) == SWARMTRACK_OK);
  CHECK(take(kv).find("status=ok") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "swarmtrack_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(swarmtrack_run_write(r, dir.string().c_str()) == SWARMTRACK_OK);
  CHECK(std::filesystem::exists(dir / "metrics.csv"));
  std::filesystem::remove_all(dir);
  swarmtrack_run_free(r);

  swarmtrack_run* r0 = nullptr;
  REQUIRE(swarmtrack_run_execute(copy, &r0) == SWARMTRACK_OK);
  CHECK(swarmtrack_run_record_count(r0) == 1);
  swarmtrack_run_free(r0);
  swarmtrack_scenario_free(copy);
  swarmtrack_scenario_free(s);
}

TEST_CASE("scenario text survives a round trip") {
  swarmtrack_scenario* s = nullptr;
  REQUIRE(swarmtrack_scenario_preset("double_fig2", &s) == SWARMTRACK_OK);
  char* text = nullptr;
  REQUIRE(swarmtrack_scenario_to_text(s, &text) == SWARMTRACK_OK);
  const std::string first = take(text);
  swarmtrack_scenario* again = nullptr;
  REQUIRE(swarmtrack_scenario_parse(first.c_str(), &again) == SWARMTRACK_OK);
  REQUIRE(swarmtrack_scenario_to_text(again, &text) == SWARMTRACK_OK);
  CHECK(take(text) == first);
  swarmtrack_scenario_free(again);
  swarmtrack_scenario_free(s);
}

TEST_CASE("potential suite through the C interface") {
  swarmtrack_verify_report* v = nullptr;
  REQUIRE(swarmtrack_verify("potential", 7, nullptr, &v) == SWARMTRACK_OK);
  CHECK(swarmtrack_verify_passed(v) == 1);
  CHECK(swarmtrack_verify_check_count(v) == 14);
  char* kv = nullptr;
  REQUIRE(swarmtrack_verify_kv(v, &kv) == SWARMTRACK_OK);
  CHECK(take(kv).find("single_fig1.potential.gradient_fd") != std::string::npos);
  swarmtrack_verify_free(v);
}
