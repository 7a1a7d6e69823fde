#pragma once

#include "tendon/control.hpp"
#include "tendon/plant.hpp"
#include "tendon/polynomial.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tendon {

/// Target switch: from `time` on, the controller is asked for `target`.
struct Waypoint {
  double time = 0.0;  // [s]
  VecX target;        // [rad]
};

struct EstimatorParams {
  double initial_stddev_deg = 10.0;
  double process_stddev_deg_per_s = 1.0;
  double measurement_stddev_mm = 0.5;
};

/// A fully resolved experiment: robot, plant error injection, controller,
/// waypoint schedule and rates. Loaded from YAML or built in code.
struct Scenario {
  std::string name;
  MusculoskeletalModel robot;            // the nominal (controller-side) model
  std::vector<ViaPointPerturbation> perturbations;
  double random_perturbation_mm = 0.0;   // extra per-muscle offsets sampled from seed
  PlantConfig plant;                     // true_model is filled by the runner
  ExternalLoad load;
  ControllerParams controller;
  EstimatorParams estimator;
  FitOptions fit;
  VecX theta0;                           // [rad]; zero posture if empty
  VecX theta_hat0;                       // initial estimate; theta0 if empty
  std::vector<Waypoint> waypoints;       // may be empty: hold theta0
  double duration = 10.0;                // [s]
  double control_rate = 100.0;           // [Hz]
  double physics_rate = 1000.0;          // [Hz]
  std::uint64_t seed = 0;
  bool use_true_angles = false;          // bypass the estimator (diagnostics)
};

/// Structural checks (rates, waypoint ordering, limits). Throws
/// ValidationError naming the offending field.
void validate_scenario(const Scenario& scenario);

/// Scenario files are YAML; see README for the schema. `robot:` accepts
/// `builtin:<name>` or a path relative to the scenario file.
Scenario load_scenario_file(const std::filesystem::path& path);
Scenario parse_scenario_yaml(const std::string& text, const std::string& source_name,
                             const std::filesystem::path& base_dir = ".");

}  // namespace tendon
