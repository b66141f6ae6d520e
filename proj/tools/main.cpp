// Command-line front end. All computation happens behind the C API; this
// translates flags into a config document, runs the command, and places the
// report. Exit codes: 0 success, 1 validation/usage, 2 I/O.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrrsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct GlobalOpts {
  std::int64_t seed = 0;
  std::string format = "csv";
  std::string out_dir;
  std::string out_file;
};

// One subcommand invocation assembled from flags.
struct Invocation {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
};

int run(const Invocation& inv, const GlobalOpts& g) {
  nlohmann::json cfg = inv.config;
  cfg["seed"] = g.seed;
  cfg["format"] = g.format;

  char* text = nullptr;
  char* error = nullptr;
  const mrrsim_status st =
      mrrsim_run_report(inv.command.c_str(), cfg.dump().c_str(), &text, &error);
  if (st != MRRSIM_OK) {
    std::cerr << "mrrsim " << inv.command << ": " << mrrsim_status_name(st) << ": "
              << (error ? error : "unknown error") << "\n";
    mrrsim_buffer_free(error);
    mrrsim_buffer_free(text);
    return st == MRRSIM_STATUS_IO ? kExitIo : kExitValidation;
  }

  int rc = kExitOk;
  if (!g.out_file.empty() || !g.out_dir.empty()) {
    std::filesystem::path path;
    if (!g.out_file.empty()) {
      path = g.out_file;
    } else {
      path = std::filesystem::path(g.out_dir) / (inv.command + "." + g.format);
    }
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (out) out.write(text, static_cast<std::streamsize>(std::string(text).size()));
    if (!out) {
      std::cerr << "mrrsim " << inv.command << ": io: cannot write " << path.string() << "\n";
      rc = kExitIo;
    }
  } else {
    std::cout << text;
  }
  mrrsim_buffer_free(error);
  mrrsim_buffer_free(text);
  return rc;
}

// "T,R,C" -> ope geometry fields.
void parse_ope_geometry(const std::string& s, nlohmann::json& ope) {
  int t = 0, r = 0, c = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%d,%d,%d%c", &t, &r, &c, &extra) != 3)
    throw CLI::ValidationError("--ope", "expected T,R,C (e.g. 4,8,8)");
  ope["tiles"] = t;
  ope["rows"] = r;
  ope["columns"] = c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral, noise-aware cost simulator for microring optical accelerators"};
  app.set_version_flag("--version", std::string("mrrsim ") + mrrsim_version());
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Base seed for every derived random stream")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out-dir", g.out_dir, "Write the report to <out-dir>/<command>.<format>");
  app.add_option("--out", g.out_file, "Write the report to this exact path");

  Invocation inv;

  // device-curve
  auto* curve = app.add_subcommand("device-curve", "Sweep the voltage-to-weight device chain");
  std::string curve_params;
  std::int64_t curve_points = 256;
  curve->add_option("--params", curve_params, "Device parameter JSON file");
  curve->add_option("--points", curve_points, "Grid points across [v_min, v_max]")
      ->check(CLI::Range(static_cast<std::int64_t>(2), static_cast<std::int64_t>(1 << 20)));
  curve->callback([&] {
    inv.command = "device-curve";
    if (!curve_params.empty()) inv.config["device"] = curve_params;
    inv.config["points"] = curve_points;
  });

  // mac-sim
  auto* mac = app.add_subcommand("mac-sim", "Shift-and-add MAC vs direct dot product");
  std::int64_t mac_nlambda = 8, mac_nt = 7, mac_count = 16;
  mac->add_option("--nlambda", mac_nlambda, "Wavelength channels per MAC");
  mac->add_option("--nt", mac_nt, "Digit precision (slots = nt + 1)");
  mac->add_option("--count", mac_count, "Random instances to run");
  mac->callback([&] {
    inv.command = "mac-sim";
    inv.config["n_lambda"] = mac_nlambda;
    inv.config["n_t"] = mac_nt;
    inv.config["count"] = mac_count;
  });

  // energy
  auto* energy = app.add_subcommand("energy", "Per-layer event counts, energy, delay, EDP");
  std::string en_workload, en_ope, en_energy, en_mode = "ws";
  std::int64_t en_nt = -1;
  bool en_no_osa = false;
  energy->add_option("--workload", en_workload, "Bundled workload name or JSON file")->required();
  energy->add_option("--ope", en_ope, "Array geometry T,R,C");
  energy->add_option("--nt", en_nt, "Digit precision");
  energy->add_option("--energy", en_energy, "Energy table JSON file");
  energy->add_option("--mode", en_mode, "Streaming mode")->check(CLI::IsMember({"ws", "is"}));
  energy->add_flag("--no-osa", en_no_osa, "Detect every digit slot separately");
  energy->callback([&] {
    inv.command = "energy";
    inv.config["workload"] = en_workload;
    inv.config["mode"] = en_mode;
    nlohmann::json ope = nlohmann::json::object();
    if (!en_ope.empty()) parse_ope_geometry(en_ope, ope);
    if (en_nt >= 0) ope["n_t"] = en_nt;
    if (en_no_osa) ope["osa_enabled"] = false;
    if (!ope.empty()) inv.config["ope"] = ope;
    if (!en_energy.empty()) inv.config["energy"] = en_energy;
  });

  // dse
  auto* dse = app.add_subcommand("dse", "Sweep array geometries, pick the best blended EDP");
  std::vector<std::string> dse_workloads;
  std::string dse_energy, dse_constraints, dse_mode = "ws";
  double dse_lambda = 0.5;
  std::int64_t dse_nt = -1;
  bool dse_no_osa = false;
  dse->add_option("--workloads", dse_workloads, "Bundled names and/or JSON files")
      ->required()
      ->expected(-1);
  dse->add_option("--lambda", dse_lambda, "Blend between geomean (0) and worst case (1)");
  dse->add_option("--mode", dse_mode, "Streaming mode")->check(CLI::IsMember({"ws", "is"}));
  dse->add_option("--energy", dse_energy, "Energy table JSON file");
  dse->add_option("--constraints", dse_constraints, "Search constraints JSON file");
  dse->add_option("--nt", dse_nt, "Digit precision");
  dse->add_flag("--no-osa", dse_no_osa, "Detect every digit slot separately");
  dse->callback([&] {
    inv.command = "dse";
    inv.config["workloads"] = dse_workloads;
    inv.config["lambda"] = dse_lambda;
    inv.config["mode"] = dse_mode;
    nlohmann::json ope = nlohmann::json::object();
    if (dse_nt >= 0) ope["n_t"] = dse_nt;
    if (dse_no_osa) ope["osa_enabled"] = false;
    if (!ope.empty()) inv.config["ope"] = ope;
    if (!dse_energy.empty()) inv.config["energy"] = dse_energy;
    if (!dse_constraints.empty()) inv.config["constraints"] = dse_constraints;
  });

  // profile
  auto* profile = app.add_subcommand("profile", "Per-layer accuracy degradation under noise");
  std::string pf_model, pf_params, pf_ope, pf_mode = "ws";
  double pf_sdac = 0.02, pf_sth = 0.04;
  std::int64_t pf_reps = 5, pf_eval = 512, pf_eval_seed = -1, pf_nt = -1;
  profile->add_option("--model", pf_model, "Model sidecar JSON file")->required();
  profile->add_option("--mode", pf_mode, "Streaming mode")->check(CLI::IsMember({"ws", "is"}));
  profile->add_option("--sigma-dac", pf_sdac, "DAC voltage noise sigma (V)");
  profile->add_option("--sigma-th", pf_sth, "Thermal noise sigma (K)");
  profile->add_option("--reps", pf_reps, "Noise repetitions per layer");
  profile->add_option("--eval-count", pf_eval, "Evaluation samples");
  profile
      ->add_option("--eval-seed", pf_eval_seed,
                   "Eval distribution seed; default is the one the bundled model is calibrated on")
      ->check(CLI::NonNegativeNumber);
  profile->add_option("--params", pf_params, "Device parameter JSON file");
  profile->add_option("--ope", pf_ope, "Array geometry T,R,C");
  profile->add_option("--nt", pf_nt, "Digit precision");
  profile->callback([&] {
    inv.command = "profile";
    inv.config["model_path"] = pf_model;
    inv.config["mode"] = pf_mode;
    inv.config["sigma_dac"] = pf_sdac;
    inv.config["sigma_th"] = pf_sth;
    inv.config["reps"] = pf_reps;
    inv.config["eval_count"] = pf_eval;
    if (pf_eval_seed >= 0) inv.config["eval_seed"] = pf_eval_seed;
    if (!pf_params.empty()) inv.config["device"] = pf_params;
    nlohmann::json ope = nlohmann::json::object();
    if (!pf_ope.empty()) parse_ope_geometry(pf_ope, ope);
    if (pf_nt >= 0) ope["n_t"] = pf_nt;
    if (!ope.empty()) inv.config["ope"] = ope;
  });

  // map
  auto* map = app.add_subcommand("map", "Choose WS or IS per layer from accuracy and EDP");
  std::string mp_model, mp_workload, mp_params, mp_energy, mp_ope;
  double mp_sdac = 0.02, mp_sth = 0.04;
  std::int64_t mp_reps = 5, mp_eval = 512, mp_eval_seed = -1, mp_nt = -1;
  map->add_option("--model", mp_model, "Model sidecar JSON file")->required();
  map->add_option("--workload", mp_workload,
                  "Cost shapes (bundled name or JSON file); default derives from the model");
  map->add_option("--sigma-dac", mp_sdac, "DAC voltage noise sigma (V)");
  map->add_option("--sigma-th", mp_sth, "Thermal noise sigma (K)");
  map->add_option("--reps", mp_reps, "Noise repetitions per layer");
  map->add_option("--eval-count", mp_eval, "Evaluation samples");
  map->add_option("--eval-seed", mp_eval_seed,
                  "Eval distribution seed; default is the one the bundled model is calibrated on")
      ->check(CLI::NonNegativeNumber);
  map->add_option("--params", mp_params, "Device parameter JSON file");
  map->add_option("--energy", mp_energy, "Energy table JSON file");
  map->add_option("--ope", mp_ope, "Array geometry T,R,C");
  map->add_option("--nt", mp_nt, "Digit precision");
  map->callback([&] {
    inv.command = "map";
    inv.config["model_path"] = mp_model;
    if (!mp_workload.empty()) inv.config["workload"] = mp_workload;
    inv.config["sigma_dac"] = mp_sdac;
    inv.config["sigma_th"] = mp_sth;
    inv.config["reps"] = mp_reps;
    inv.config["eval_count"] = mp_eval;
    if (mp_eval_seed >= 0) inv.config["eval_seed"] = mp_eval_seed;
    if (!mp_params.empty()) inv.config["device"] = mp_params;
    if (!mp_energy.empty()) inv.config["energy"] = mp_energy;
    nlohmann::json ope = nlohmann::json::object();
    if (!mp_ope.empty()) parse_ope_geometry(mp_ope, ope);
    if (mp_nt >= 0) ope["n_t"] = mp_nt;
    if (!ope.empty()) inv.config["ope"] = ope;
  });

  // Global flags are accepted before or after the subcommand name.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  return run(inv, g);
}
