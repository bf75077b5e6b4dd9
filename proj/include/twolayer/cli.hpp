#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twolayer/errors.hpp"
#include "twolayer/frame.hpp"
#include "twolayer/scenarios.hpp"

namespace twolayer::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr const char* kOutputRootEnv = "TWOLAYER_OUTPUT_ROOT";

enum class Mode { Run, Converge, WellBalancedSuite };

struct RunConfig {
  Mode mode = Mode::Run;
  std::string scenario;
  std::optional<std::string> config_file;
  std::optional<int> n;
  std::optional<std::string> eigen;
  std::optional<std::string> limiter;
  std::optional<double> t_final;
  std::optional<int> frames;
  std::optional<std::string> out;
  std::vector<int> resolutions{64, 128, 256, 512, 1024};
  int reference_n = 5000;
  std::string reference_eigen = "direct";
};

inline fs::path output_root() {
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return fs::path(env);
  return fs::path("output");
}

inline fs::path output_dir(const RunConfig& cfg, const std::string& default_leaf) {
  if (cfg.out) return fs::path(*cfg.out);
  return output_root() / default_leaf;
}

/// Scenario from name, then config file, then flags (flags win).
inline ScenarioSpec resolve_spec(const RunConfig& cfg) {
  ScenarioSpec spec;
  std::map<std::string, std::string> kv;
  if (cfg.config_file) {
    std::ifstream in(*cfg.config_file);
    if (!in) throw ConfigError("cannot read config file '" + *cfg.config_file + "'");
    kv = parse_key_values(in);
  }
  std::string name = cfg.scenario;
  if (name.empty()) {
    if (auto it = kv.find("scenario"); it != kv.end()) name = it->second;
  }
  if (!name.empty()) spec = build_scenario(name);
  else if (!cfg.config_file) throw ConfigError("no scenario given (use --scenario or --config)");
  apply_key_values(spec, kv);
  if (cfg.n) spec.n = *cfg.n;
  if (cfg.eigen) spec.eigen = parse_eigen_method(*cfg.eigen);
  if (cfg.limiter) spec.limiter = parse_limiter(*cfg.limiter);
  if (cfg.t_final) spec.t_final = *cfg.t_final;
  if (cfg.frames) spec.frames = *cfg.frames;
  validate(spec);
  return spec;
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("cannot create output directory '" + dir.string() + "'");
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << text;
}

inline std::string frame_name(std::size_t k) {
  std::ostringstream os;
  os << "frame_" << std::setw(4) << std::setfill('0') << k << ".csv";
  return os.str();
}

/// All frames in one table with a leading time column.
inline std::string stacked_csv(const std::vector<SolutionFrame>& frames) {
  std::ostringstream os;
  os << "t," << SolutionFrame::kHeader << '\n' << std::setprecision(17);
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      os << f.t << ',' << f.x[i] << ',' << f.b[i] << ',' << f.h1[i] << ',' << f.hu1[i] << ','
         << f.h2[i] << ',' << f.hu2[i] << ',' << f.eta1[i] << ',' << f.eta2[i] << ','
         << f.u1[i] << ',' << f.u2[i] << '\n';
    }
  }
  return os.str();
}

inline json error_report_json(const ErrorReport& rep) {
  json j;
  j["n"] = rep.n;
  for (const auto& f : rep.fields) j["fields"][f.field] = {{"l1", f.l1}, {"linf", f.linf}};
  return j;
}

inline std::string error_report_text(const ErrorReport& rep) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "field" << std::right << std::setw(14) << "L1"
     << std::setw(14) << "Linf" << '\n';
  os << std::scientific << std::setprecision(3);
  for (const auto& f : rep.fields)
    os << std::left << std::setw(8) << f.field << std::right << std::setw(14) << f.l1
       << std::setw(14) << f.linf << '\n';
  return os.str();
}

inline json manifest_json(const ScenarioSpec& spec, const RunResult& res,
                          const std::vector<std::string>& frame_files) {
  const Diagnostics& d = res.final_state.diag;
  const auto mass = total_mass(res.final_state, spec.grid());
  json j;
  j["scenario"] = spec.name;
  j["eigensolver"] = std::string(to_string(spec.eigen));
  j["inundation"] = std::string(to_string(spec.inundation));
  j["limiter"] = std::string(to_string(spec.limiter));
  j["dry_tolerance"] = spec.dry_tolerance;
  j["cfl_target"] = spec.cfl;
  j["n_cells"] = spec.n;
  j["t_final"] = spec.t_final;
  j["wall_clock_seconds"] = res.wall_seconds;
  j["steps"] = d.steps;
  j["rejected_steps"] = d.rejected_steps;
  j["max_cfl"] = d.max_cfl;
  j["clipped_mass"] = {d.clipped_mass[0], d.clipped_mass[1], d.clipped_mass[0] + d.clipped_mass[1]};
  j["boundary_inflow"] = {d.boundary_inflow[0], d.boundary_inflow[1]};
  j["initial_mass"] = {res.initial_mass[0], res.initial_mass[1]};
  j["final_mass"] = {mass[0], mass[1]};
  j["frames"] = frame_files;
  j["config"] = format_key_values(spec);
  return j;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const ScenarioSpec spec = resolve_spec(cfg);
  const fs::path dir = output_dir(cfg, spec.name);
  ensure_dir(dir);
  write_text(dir / "config.txt", format_key_values(spec));
  std::vector<std::string> files;
  const RunResult res = run_scenario(spec, [&](const SolutionFrame& f) {
    const std::string name = frame_name(files.size());
    std::ofstream os(dir / name, std::ios::binary);
    write_csv(os, f);
    files.push_back(name);
  });
  write_text(dir / "stacked.csv", stacked_csv(res.frames));
  if (spec.perturbation.kind == PerturbationKind::None) {
    // quiescent scenarios: the initial state is the exact solution
    const ErrorReport rep = error_norms(res.frames.back(), initial_frame(spec), spec.parameters());
    write_text(dir / "errors.json", error_report_json(rep).dump(2) + "\n");
    write_text(dir / "errors.txt", error_report_text(rep));
    log << error_report_text(rep);
  }
  write_text(dir / "manifest.json", manifest_json(spec, res, files).dump(2) + "\n");
  log << spec.name << ": " << res.final_state.diag.steps << " steps, " << files.size()
      << " frames -> " << dir.string() << '\n';
  return kExitOk;
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& log) {
  const ScenarioSpec base = resolve_spec(cfg);
  if (cfg.resolutions.size() < 3) throw ConfigError("converge needs at least 3 resolutions");
  const fs::path dir = output_dir(cfg, base.name + "-converge");
  ensure_dir(dir);

  ScenarioSpec ref = base;
  ref.n = cfg.reference_n;
  ref.eigen = parse_eigen_method(cfg.reference_eigen);
  ref.frames = 1;
  for (int n : cfg.resolutions)
    if (n >= ref.n) throw ConfigError("reference resolution must exceed every test resolution");
  // every run is independent; the reference and the sweep run concurrently
  auto ref_future = std::async(std::launch::async, [ref] { return run_scenario(ref); });
  std::vector<std::future<RunResult>> runs;
  for (int n : cfg.resolutions) {
    ScenarioSpec s = base;
    s.n = n;
    s.frames = 1;
    runs.push_back(std::async(std::launch::async, [s] { return run_scenario(s); }));
  }
  const RunResult ref_run = ref_future.get();
  auto write_final = [&](int n, const SolutionFrame& f) {
    const fs::path sub = dir / ("n" + std::to_string(n));
    ensure_dir(sub);
    std::ofstream os(sub / "frame_final.csv", std::ios::binary);
    write_csv(os, f);
  };
  write_final(ref.n, ref_run.frames.back());

  const Parameters p = base.parameters();
  std::map<std::string, std::vector<std::pair<int, double>>> l1;
  json j;
  j["scenario"] = base.name;
  j["eigensolver"] = std::string(to_string(base.eigen));
  j["reference_eigensolver"] = std::string(to_string(ref.eigen));
  j["reference_n"] = ref.n;
  j["t_final"] = base.t_final;
  j["dry_tolerance"] = base.dry_tolerance;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const int n = cfg.resolutions[k];
    const RunResult r = runs[k].get();
    write_final(n, r.frames.back());
    const ErrorReport rep = error_norms(r.frames.back(), ref_run.frames.back(), p);
    j["errors"].push_back(error_report_json(rep));
    for (const auto& f : rep.fields) l1[f.field].push_back({n, f.l1});
  }

  std::ostringstream txt;
  txt << std::left << std::setw(8) << "field";
  for (int n : cfg.resolutions) txt << std::right << std::setw(12) << ("N=" + std::to_string(n));
  txt << std::right << std::setw(9) << "order" << '\n';
  for (const std::string& field : error_fields()) {
    const auto& samples = l1[field];
    double order = std::numeric_limits<double>::quiet_NaN();
    try {
      order = convergence_order(samples);
    } catch (const ConfigError&) {
    }
    j["order"][field] = std::isfinite(order) ? json(order) : json(nullptr);
    txt << std::left << std::setw(8) << field << std::scientific << std::setprecision(3);
    for (const auto& [n, e] : samples) txt << std::right << std::setw(12) << e;
    txt << std::fixed << std::setprecision(2) << std::right << std::setw(9) << order << '\n';
  }
  write_text(dir / "errors.json", j.dump(2) + "\n");
  write_text(dir / "errors.txt", txt.str());
  log << txt.str();
  return kExitOk;
}

inline int cmd_well_balanced_suite(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = output_dir(cfg, "well-balanced");
  ensure_dir(dir);
  json j;
  std::ostringstream txt;
  txt << std::left << std::setw(11) << "Bathymetry" << std::setw(10) << "Dry-State"
      << std::setw(6) << "Layer" << std::right;
  for (const char* norm : {"L1", "Linf"})
    for (const char* col : {"rho h", "rho hu", "eta"})
      txt << std::setw(13) << (std::string(norm) + " " + col);
  txt << '\n';
  for (const char* name : {"wb-smooth-wet", "wb-smooth-dry", "wb-jump-wet", "wb-jump-dry"}) {
    RunConfig one = cfg;
    one.scenario = name;
    one.config_file.reset();
    ScenarioSpec spec = resolve_spec(one);
    const RunResult res = run_scenario(spec);
    const Parameters p = spec.parameters();
    const ErrorReport rep = error_norms(res.frames.back(), initial_frame(spec), p);
    j[name] = error_report_json(rep);
    const std::string sname(name);
    const bool smooth = sname.find("smooth") != std::string::npos;
    const bool dry = sname.ends_with("dry");
    for (int layer = 1; layer <= 2; ++layer) {
      const std::string k = std::to_string(layer);
      const double rho = p.rho(layer);
      const FieldError& h = rep.get("h" + k);
      const FieldError& hu = rep.get("hu" + k);
      const FieldError& eta = rep.get("eta" + k);
      txt << std::left << std::setw(11) << (layer == 1 ? (smooth ? "Smooth" : "Jump") : "")
          << std::setw(10) << (layer == 1 ? (dry ? "True" : "False") : "") << std::setw(6)
          << layer << std::right << std::scientific << std::setprecision(2) << std::setw(13)
          << rho * h.l1 << std::setw(13) << rho * hu.l1 << std::setw(13) << eta.l1
          << std::setw(13) << rho * h.linf << std::setw(13) << rho * hu.linf << std::setw(13)
          << eta.linf << '\n';
    }
  }
  write_text(dir / "errors.json", j.dump(2) + "\n");
  write_text(dir / "errors.txt", txt.str());
  log << txt.str();
  return kExitOk;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad resolution list entry '" + item + "'");
    }
  }
  return out;
}

inline int main(int argc, char** argv, std::ostream& log = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Two-layer shallow water f-wave solver"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string resolutions;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario, "scenario name");
    sub->add_option_function<std::string>("--config", [&](const std::string& v) { cfg.config_file = v; },
                                          "flat key = value config file");
    sub->add_option_function<int>("--n", [&](int v) { cfg.n = v; }, "number of cells");
    sub->add_option_function<std::string>("--eigen", [&](const std::string& v) { cfg.eigen = v; },
                                          "velocity-difference | linearized-static | linearized-dynamic | direct");
    sub->add_option_function<std::string>("--limiter", [&](const std::string& v) { cfg.limiter = v; },
                                          "none | minmod | mc");
    sub->add_option_function<double>("--t-final", [&](double v) { cfg.t_final = v; }, "final time (s)");
    sub->add_option_function<std::string>("--out", [&](const std::string& v) { cfg.out = v; },
                                          "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario and write frames");
  add_common(run);
  run->add_option_function<int>("--frames", [&](int v) { cfg.frames = v; }, "number of frames");
  run->callback([&] { cfg.mode = Mode::Run; });

  CLI::App* conv = app.add_subcommand("converge", "grid convergence study against a fine run");
  add_common(conv);
  conv->add_option("--resolutions", resolutions, "comma separated cell counts");
  conv->add_option("--reference-n", cfg.reference_n, "reference cell count");
  conv->add_option("--reference-eigen", cfg.reference_eigen, "reference eigensolver");
  conv->callback([&] { cfg.mode = Mode::Converge; });

  CLI::App* wb = app.add_subcommand("well-balanced-suite", "at-rest error tables");
  add_common(wb);
  wb->callback([&] { cfg.mode = Mode::WellBalancedSuite; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, log, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, log, err);
    return kExitConfig;
  }

  try {
    if (!resolutions.empty()) cfg.resolutions = parse_int_list(resolutions);
    switch (cfg.mode) {
      case Mode::Run: return cmd_run(cfg, log);
      case Mode::Converge: return cmd_converge(cfg, log);
      case Mode::WellBalancedSuite: return cmd_well_balanced_suite(cfg, log);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace twolayer::cli
