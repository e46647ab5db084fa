#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "axygate/io.hpp"

namespace {

using namespace axygate;

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::vector<double> phase_grid(int points) {
  std::vector<double> phases;
  for (int i = 0; i < points; ++i) {
    phases.push_back(constants::two_pi * i / points);
  }
  return phases;
}

int run(int argc, char** argv) {
  CLI::App app{"AXY conditional-phase gate designer and simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--seed", seed_override, "seed override")
      ->each([&](const std::string&) { seed_set = true; });

  auto* design = app.add_subcommand("design", "search gate timings");

  auto* simulate = app.add_subcommand("simulate", "run a measurement protocol");
  std::string protocol;
  std::string solution_path;
  simulate->add_option("--protocol", protocol, "ramsey or bell")->required();
  simulate->add_option("--solution", solution_path, "solution JSON from design")
      ->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "scan one error axis");
  std::string axis_name;
  double from = 0.0, to = 0.0;
  int points = 0;
  sweep_cmd->add_option("--axis", axis_name,
                        "nbar | trap_freq_offset | area_error | timing_error")
      ->required();
  sweep_cmd->add_option("--from", from, "first axis value")->required();
  sweep_cmd->add_option("--to", to, "last axis value")->required();
  sweep_cmd->add_option("--points", points, "grid size")->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--solution", solution_path, "solution JSON from design")
      ->required();

  auto* fit = app.add_subcommand("fit", "analyze a data file");
  std::string kind;
  std::string input_path;
  fit->add_option("--kind", kind, "fringe | nbar | bell")->required();
  fit->add_option("--input", input_path, "CSV produced by simulate/sweep")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (seed_set) cfg.seed = seed_override;
  const OutputMeta meta{tool_version(), cfg.hash_hex};
  const GateSystem system = make_system(cfg);

  if (design->parsed()) {
    GateSolution solution;
    try {
      solution = optimize_block(make_design_spec(cfg));
    } catch (const DesignInfeasible& e) {
      std::cerr << "design infeasible: " << e.what() << "\n";
      return 3;
    }
    const PulseSchedule schedule = solution_schedule(solution, system.qubits);
    atomic_write(join_path(cfg.out_dir, "solution.json"),
                 solution_to_json(solution, cfg.target_phi, schedule, meta));
    atomic_write(join_path(cfg.out_dir, "schedule.json"),
                 schedule_to_json(schedule, solution.params, meta));
    std::cout << "r=" << solution.params.r
              << " gate_time_s=" << solution.gate_time
              << " phi=" << solution.phi_achieved << "\n";
    return 0;
  }

  if (simulate->parsed()) {
    const GateSolution solution = solution_from_json(read_file(solution_path));
    if (protocol == "ramsey") {
      for (int control = 0; control < 2; ++control) {
        const FringeScan scan = simulate_ramsey(
            solution, system, control, cfg.errors, phase_grid(24), cfg.shots,
            cfg.path, cfg.seed + control, cfg.fock);
        atomic_write(join_path(cfg.out_dir, "ramsey_control" +
                                                std::to_string(control) + ".csv"),
                     fringe_to_csv(scan, meta));
        atomic_write(
            join_path(cfg.out_dir,
                      "ramsey_fit_control" + std::to_string(control) + ".json"),
            fringe_fit_to_json(fit_fringe(scan), meta));
      }
      return 0;
    }
    if (protocol == "bell") {
      const auto counts = simulate_bell(solution, system, cfg.errors, cfg.shots,
                                        cfg.path, cfg.seed, cfg.fock);
      atomic_write(join_path(cfg.out_dir, "bell_counts.csv"),
                   counts_to_csv(counts, meta));
      atomic_write(join_path(cfg.out_dir, "bell_analysis.json"),
                   entanglement_to_json(entanglement_report(counts), meta));
      return 0;
    }
    throw ConfigError("unknown protocol: " + protocol);
  }

  if (sweep_cmd->parsed()) {
    const GateSolution solution = solution_from_json(read_file(solution_path));
    std::vector<double> values;
    for (int i = 0; i < points; ++i) {
      values.push_back(points == 1 ? from
                                   : from + (to - from) * i / (points - 1));
    }
    const auto rows =
        sweep(solution, system, cfg.errors, sweep_axis_from_name(axis_name),
              values, cfg.shots, cfg.path, cfg.seed, cfg.fock);
    atomic_write(join_path(cfg.out_dir, "sweep_" + axis_name + ".csv"),
                 sweep_to_csv(rows, meta));
    return 0;
  }

  // fit
  const std::string text = read_file(input_path);
  std::string result;
  if (kind == "fringe") {
    result = fringe_fit_to_json(fit_fringe(fringe_from_csv(text)), meta);
  } else if (kind == "bell") {
    result = entanglement_to_json(entanglement_report(counts_from_csv(text)), meta);
  } else if (kind == "nbar") {
    const SpectrumFile file = spectrum_from_csv(text);
    result = nbar_fit_to_json(
        fit_nbar(file.spectrum, file.eps, file.mode_freqs, file.omega), meta);
  } else {
    throw ConfigError("unknown fit kind: " + kind);
  }
  atomic_write(join_path(cfg.out_dir, "fit_" + kind + ".json"), result);
  std::cout << result;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ScheduleInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
