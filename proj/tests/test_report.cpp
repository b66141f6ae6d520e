#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mrrsim/errors.hpp"
#include "mrrsim/report.hpp"

using namespace mrrsim;

namespace {
const std::string kModelPath = std::string(MRRSIM_ASSETS_DIR) + "/toy_model.json";
}

TEST_CASE("12-digit formatting is stable and round-trips") {
  CHECK(format_g12(0.1) == "0.1");
  CHECK(format_g12(1.0) == "1");
  CHECK(format_g12(-2.5e-13) == "-2.5e-13");
  CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(round_g12(1.0 / 3.0) == 0.333333333333);
  CHECK(round_g12(0.5) == 0.5);
  // Idempotent once rounded.
  for (double v : {3.14159265358979, 1e-300, 6.02e23, -7.25}) {
    const double r = round_g12(v);
    CHECK(round_g12(r) == r);
    CHECK(format_g12(r) == format_g12(round_g12(r)));
  }
}

TEST_CASE("recursive JSON rounding touches every number") {
  const nlohmann::json j = {{"a", 1.0 / 3.0}, {"b", {{"c", 2.0 / 3.0}}}, {"d", {1.0 / 7.0, "s"}}};
  const nlohmann::json r = round_json_g12(j);
  CHECK(r["a"].get<double>() == 0.333333333333);
  CHECK(r["b"]["c"].get<double>() == 0.666666666667);
  CHECK(r["d"][0].get<double>() == 0.142857142857);
  CHECK(r["d"][1].get<std::string>() == "s");
}

TEST_CASE("device curve report has the documented shape") {
  const Report r = run_command("device-curve", {{"points", 16}});
  CHECK(r.command == "device-curve");
  CHECK(r.columns == std::vector<std::string>{"v_volt", "delta_t_k", "delta_lambda_nm", "t_diff",
                                              "weight"});
  CHECK(r.rows.size() == 16);
  CHECK(r.config.contains("seed"));
  CHECK(r.config.contains("device"));
  // First and last rows sit at the rails.
  CHECK(std::get<double>(r.rows.front()[0]) == 1.0);
  CHECK(std::get<double>(r.rows.back()[0]) == 3.0);
  CHECK(std::get<double>(r.rows.front()[4]) == 1.0);
  CHECK(std::get<double>(r.rows.back()[4]) == -1.0);
}

TEST_CASE("CSV rendering is byte-stable and carries the config header") {
  const nlohmann::json cfg = {{"seed", 5}, {"count", 4}};
  const std::string a = run_command_text("mac-sim", cfg);
  const std::string b = run_command_text("mac-sim", cfg);
  CHECK(a == b);
  CHECK(a.rfind("# mrrsim mac-sim\n", 0) == 0);
  CHECK(a.find("# config ") != std::string::npos);
  CHECK(a.find("instance,osa_value,dot_value,abs_error") != std::string::npos);
  CHECK(a.find("# summary ") != std::string::npos);
  CHECK(a.back() == '\n');
}

TEST_CASE("JSON rendering parses and hoists extras") {
  const nlohmann::json cfg = {{"seed", 5}, {"count", 4}, {"format", "json"}};
  const std::string text = run_command_text("mac-sim", cfg);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["command"] == "mac-sim");
  CHECK(j["rows"].is_array());
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][0].contains("osa_value"));
  CHECK(j.contains("summary"));
  CHECK(j["summary"]["max_abs_error"].get<double>() <= 1e-12);
  CHECK(j["config"]["seed"] == 5);
}

TEST_CASE("seed changes the sampled instances") {
  const std::string a = run_command_text("mac-sim", {{"seed", 1}});
  const std::string b = run_command_text("mac-sim", {{"seed", 2}});
  CHECK(a != b);
}

TEST_CASE("energy report totals match the sum of its rows") {
  const nlohmann::json cfg = {{"workload", "alexnet"}, {"format", "json"}};
  const nlohmann::json j = nlohmann::json::parse(run_command_text("energy", cfg));
  REQUIRE(j["rows"].size() == 8);
  double energy = 0.0, delay = 0.0;
  for (const nlohmann::json& row : j["rows"]) {
    energy += row["energy_j"].get<double>();
    delay += row["delay_s"].get<double>();
  }
  // Totals are rounded through the 12-digit formatter.
  CHECK(j["totals"]["energy_j"].get<double>() == doctest::Approx(energy).epsilon(1e-9));
  CHECK(j["totals"]["delay_s"].get<double>() == doctest::Approx(delay).epsilon(1e-9));
}

TEST_CASE("dse report carries per-network columns and the chosen config") {
  const nlohmann::json cfg = {{"workloads", {"alexnet", "resnet18"}}, {"format", "json"}};
  const nlohmann::json j = nlohmann::json::parse(run_command_text("dse", cfg));
  REQUIRE(j["rows"].size() == 333);
  CHECK(j["rows"][0].contains("edp_alexnet"));
  CHECK(j["rows"][0].contains("edp_resnet18"));
  CHECK(j["chosen"].contains("tiles"));
  CHECK(j["chosen"].contains("merit"));
  // The chosen merit is the table minimum.
  const double chosen_merit = j["chosen"]["merit"].get<double>();
  for (const nlohmann::json& row : j["rows"]) CHECK(chosen_merit <= row["merit"].get<double>());
}

TEST_CASE("dse rejects an out-of-range blend weight") {
  CHECK_THROWS_AS((void)run_command("dse", {{"workloads", {"alexnet"}}, {"lambda", 1.5}}),
                  ValidationError);
  CHECK_THROWS_AS((void)run_command("dse", {{"workloads", nlohmann::json::array()}}),
                  ValidationError);
}

TEST_CASE("profile report lists every model layer") {
  const nlohmann::json cfg = {{"model_path", kModelPath},
                              {"eval_count", 32},
                              {"reps", 2},
                              {"format", "json"},
                              {"sigma_dac", 0.2}};
  const nlohmann::json j = nlohmann::json::parse(run_command_text("profile", cfg));
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["layer"] == "conv1");
  CHECK(j["rows"][2]["layer"] == "fc");
  for (const nlohmann::json& row : j["rows"]) CHECK(row["d_pct"].get<double>() >= 0.0);
  CHECK(j["summary"]["clean_accuracy"].get<double>() >= 0.9);
  CHECK(j["config"]["model"].contains("name"));
}

TEST_CASE("map report pairs profiling with the cost model") {
  const nlohmann::json cfg = {{"model_path", kModelPath},
                              {"eval_count", 32},
                              {"reps", 2},
                              {"format", "json"}};
  const nlohmann::json j = nlohmann::json::parse(run_command_text("map", cfg));
  REQUIRE(j["rows"].size() == 3);
  for (const nlohmann::json& row : j["rows"]) {
    CHECK((row["chosen"] == "ws" || row["chosen"] == "is"));
    CHECK(row["e_is_js"].get<double>() > 0.0);
    CHECK(row["e_ws_js"].get<double>() > 0.0);
  }
  const double hybrid = j["summary"]["edp_hybrid_js"].get<double>();
  CHECK(hybrid <= j["summary"]["edp_all_is_js"].get<double>() + 1e-15);
  CHECK(hybrid <= j["summary"]["edp_all_ws_js"].get<double>() + 1e-15);
}

TEST_CASE("map validates the paired workload layer count") {
  const nlohmann::json cfg = {{"model_path", kModelPath}, {"workload", "alexnet"}};
  CHECK_THROWS_AS((void)run_command("map", cfg), ValidationError);
}

TEST_CASE("unknown commands and formats are rejected") {
  CHECK_THROWS_AS((void)run_command("frobnicate", nlohmann::json::object()), ValidationError);
  CHECK_THROWS_AS((void)run_command("device-curve", {{"format", "xml"}}), ValidationError);
  CHECK_THROWS_AS((void)run_command("device-curve", {{"seed", -1}}), ValidationError);
  CHECK_THROWS_AS((void)run_command("device-curve", {{"bogus_key", 1}}), ValidationError);
}

TEST_CASE("missing referenced files surface as IO errors") {
  CHECK_THROWS_AS((void)run_command("energy", {{"workload", "/nonexistent/net.json"}}), IoError);
  CHECK_THROWS_AS((void)run_command("profile", {{"model_path", "/nonexistent/model.json"}}),
                  IoError);
}

TEST_CASE("unknown bundled workload names list the known ones") {
  try {
    (void)run_command("energy", {{"workload", "lenet"}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("alexnet") != std::string::npos);
    CHECK(msg.find("vgg16") != std::string::npos);
  }
}
