#include "tendon/log.hpp"
#include "tendon/models.hpp"
#include "tendon/robot_io.hpp"
#include "tendon/runner.hpp"
#include "tendon/scenario.hpp"
#include "tendon/trace.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace tendon;

namespace {

nlohmann::json metrics_json(const Metrics& m) {
  return {{"max_tension_kgf", m.max_tension},
          {"settle_error_deg", m.settle_error_deg},
          {"slack_fraction", m.slack_fraction},
          {"cocontraction_index_kgf", m.cocontraction_index},
          {"peak_temperature_c", m.peak_temperature}};
}

nlohmann::json perturbations_json(const MusculoskeletalModel& robot,
                                  const std::vector<ViaPointPerturbation>& list) {
  nlohmann::json out = nlohmann::json::array();
  for (const ViaPointPerturbation& p : list) {
    out.push_back({{"muscle", robot.muscle(p.muscle).name},
                   {"point", p.point},
                   {"offset_mm", {p.offset[0] * 1e3, p.offset[1] * 1e3, p.offset[2] * 1e3}}});
  }
  return out;
}

void print_metrics(const std::string& label, const Metrics& m) {
  std::printf("%-6s max tension %6.2f kgf | co-contraction %6.2f kgf | slack %5.3f | peak temp %5.1f C\n",
              label.c_str(), m.max_tension, m.cocontraction_index, m.slack_fraction,
              m.peak_temperature);
  std::printf("       settle error per waypoint [deg]:");
  for (double e : m.settle_error_deg) std::printf(" %.2f", e);
  std::printf("\n");
}

MusculoskeletalModel load_robot_ref(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return models::by_name(ref.substr(8));
  return load_robot_file(ref);
}

int cmd_run(const std::string& scenario_path, const std::string& controller,
            std::optional<std::uint64_t> seed, const std::string& out_dir,
            const std::string& polys_path) {
  Scenario scenario = load_scenario_file(scenario_path);
  if (!controller.empty()) scenario.controller.kind = controller_kind_from_string(controller);
  if (seed) scenario.seed = *seed;
  if (scenario.controller.kind == ControllerKind::jsc && scenario.controller.jsc_kp.size() == 0) {
    scenario.controller.jsc_kp = VecX::Constant(scenario.robot.joint_count(), 30.0);
    scenario.controller.jsc_kd = VecX::Constant(scenario.robot.joint_count(), 1.0);
  }
  validate_scenario(scenario);

  RunResult result;
  if (!polys_path.empty()) {
    auto polys = load_polynomials(polys_path);
    if (static_cast<int>(polys.size()) != scenario.robot.muscle_count())
      throw ValidationError("polynomial cache does not match the scenario robot");
    result = run_scenario(scenario, polys);
  } else {
    result = run_scenario(scenario);
  }

  fs::create_directories(out_dir);
  fs::path trace_path = fs::path(out_dir) / "trace.csv";
  export_trace(result.trace, trace_path);

  nlohmann::json doc = metrics_json(result.metrics);
  doc["scenario"] = scenario.name;
  doc["controller"] = to_string(scenario.controller.kind);
  doc["seed"] = scenario.seed;
  doc["applied_perturbations"] =
      perturbations_json(scenario.robot, result.applied_perturbations);
  std::ofstream mf(fs::path(out_dir) / "metrics.json");
  mf << doc.dump(2) << "\n";

  print_metrics(to_string(scenario.controller.kind), result.metrics);
  std::printf("trace: %s\n", trace_path.c_str());
  return 0;
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& controllers,
                std::optional<std::uint64_t> seed, const std::string& out_dir) {
  Scenario scenario = load_scenario_file(scenario_path);
  if (seed) scenario.seed = *seed;
  std::vector<ControllerKind> kinds;
  for (const std::string& c : controllers) kinds.push_back(controller_kind_from_string(c));

  Comparison comparison = compare_controllers(scenario, kinds);

  nlohmann::json doc;
  doc["scenario"] = scenario.name;
  doc["seed"] = scenario.seed;
  doc["applied_perturbations"] =
      perturbations_json(scenario.robot, comparison.applied_perturbations);
  for (const ComparisonEntry& e : comparison.entries) {
    print_metrics(to_string(e.kind), e.metrics);
    doc["metrics"][to_string(e.kind)] = metrics_json(e.metrics);
  }
  for (size_t i = 0; i < comparison.entries.size(); ++i) {
    for (size_t j = 0; j < comparison.entries.size(); ++j) {
      if (i == j) continue;
      ControllerKind a = comparison.entries[i].kind;
      ControllerKind b = comparison.entries[j].kind;
      double ratio = comparison.max_tension_ratio(a, b);
      doc["max_tension_ratio"][to_string(a) + "/" + to_string(b)] = ratio;
    }
  }
  for (size_t i = 0; i + 1 < comparison.entries.size(); ++i) {
    ControllerKind a = comparison.entries[i].kind;
    for (size_t j = i + 1; j < comparison.entries.size(); ++j) {
      ControllerKind b = comparison.entries[j].kind;
      std::printf("max-tension ratio %s/%s = %.3f\n", to_string(a).c_str(),
                  to_string(b).c_str(), comparison.max_tension_ratio(a, b));
    }
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream cf(fs::path(out_dir) / "compare.json");
    cf << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_fit(const std::string& robot_ref, int degree, const std::string& out_path) {
  MusculoskeletalModel robot = load_robot_ref(robot_ref);
  FitOptions options;
  if (degree > 0) options.degree = degree;
  std::vector<LengthPolynomial> polys = fit_all_muscles(robot, options);
  save_polynomials(polys, robot_ref, out_path);
  for (const LengthPolynomial& p : polys) {
    std::printf("%-14s joints %zu  terms %zu  residual rms %.3e m\n",
                robot.muscle(p.muscle).name.c_str(), p.joints.size(), p.exponents.size(),
                p.residual_rms);
  }
  std::printf("cache: %s\n", out_path.c_str());
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  Scenario scenario = load_scenario_file(scenario_path);
  std::printf("%s: OK (robot %d joints, %d muscles, %zu waypoints, %s)\n", scenario_path.c_str(),
              scenario.robot.joint_count(), scenario.robot.muscle_count(),
              scenario.waypoints.size(), to_string(scenario.controller.kind).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale tendon-driven musculoskeletal simulation and controller suite"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, controller, robot_ref, polys_path, out_path;
  std::vector<std::string> controllers;
  std::optional<std::uint64_t> seed;
  int degree = 0;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and export its trace");
  run->add_option("--scenario", scenario_path, "scenario YAML")->required();
  run->add_option("--controller", controller, "override controller kind (msc|jaic|maic|jsc)");
  run->add_option("--seed", seed, "override scenario seed");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--polys", polys_path, "polynomial cache from 'fit' (skips fitting)");

  CLI::App* compare = app.add_subcommand("compare", "Run several controllers on one plant");
  compare->add_option("--scenario", scenario_path, "scenario YAML")->required();
  compare->add_option("--controllers", controllers, "two or more of msc,jaic,maic,jsc")
      ->required()
      ->delimiter(',');
  compare->add_option("--seed", seed, "override scenario seed");
  compare->add_option("--out", out_dir, "output directory for compare.json");

  CLI::App* fit = app.add_subcommand("fit", "Fit muscle-length polynomials into a cache file");
  fit->add_option("--robot", robot_ref, "robot YAML or builtin:<name>")->required();
  fit->add_option("--degree", degree, "polynomial degree (default 4)");
  fit->add_option("--out", out_path, "cache file")->required();

  CLI::App* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario YAML")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, controller, seed, out_dir, polys_path);
    if (compare->parsed()) return cmd_compare(scenario_path, controllers, seed, out_dir);
    if (fit->parsed()) return cmd_fit(robot_ref, degree, out_path);
    if (validate->parsed()) return cmd_validate(scenario_path);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
