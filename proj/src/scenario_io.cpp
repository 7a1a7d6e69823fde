#include "tendon/scenario.hpp"

#include "tendon/models.hpp"
#include "tendon/robot_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tendon {

void validate_scenario(const Scenario& scenario) {
  const int n = scenario.robot.joint_count();
  if (scenario.robot.muscle_count() == 0)
    throw ValidationError("scenario '" + scenario.name + "': robot has no muscles");
  if (!(scenario.duration > 0.0))
    throw ValidationError("scenario '" + scenario.name + "': duration must be positive");
  if (scenario.control_rate < 1.0 || scenario.physics_rate < 1.0)
    throw ValidationError("scenario '" + scenario.name + "': rates must be >= 1 Hz");
  if (scenario.physics_rate < scenario.control_rate)
    throw ValidationError("scenario '" + scenario.name +
                          "': physics rate must be >= control rate");
  if (scenario.theta0.size() != 0 && scenario.theta0.size() != n)
    throw ValidationError("scenario '" + scenario.name + "': initial_posture has " +
                          std::to_string(scenario.theta0.size()) + " entries for " +
                          std::to_string(n) + " joints");
  if (scenario.theta0.size() == n && !scenario.robot.tree().within_limits(scenario.theta0, 1e-12))
    throw ValidationError("scenario '" + scenario.name +
                          "': initial_posture violates joint limits");
  if (scenario.theta_hat0.size() != 0 && scenario.theta_hat0.size() != n)
    throw ValidationError("scenario '" + scenario.name + "': initial_estimate has wrong size");
  double prev = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < scenario.waypoints.size(); ++i) {
    const Waypoint& w = scenario.waypoints[i];
    if (!(w.time > prev))
      throw ValidationError("scenario '" + scenario.name + "': waypoints[" + std::to_string(i) +
                            "].time_s must increase strictly");
    prev = w.time;
    if (w.target.size() != n)
      throw ValidationError("scenario '" + scenario.name + "': waypoints[" + std::to_string(i) +
                            "].target_deg has wrong size");
  }
  if (scenario.random_perturbation_mm < 0.0)
    throw ValidationError("scenario '" + scenario.name + "': random_perturbation_mm < 0");
  for (size_t i = 0; i < scenario.perturbations.size(); ++i) {
    const ViaPointPerturbation& p = scenario.perturbations[i];
    if (p.muscle < 0 || p.muscle >= scenario.robot.muscle_count())
      throw ValidationError("scenario '" + scenario.name + "': perturbations[" +
                            std::to_string(i) + "] names an unknown muscle");
    const auto& points = scenario.robot.muscle(p.muscle).points;
    if (p.point < 0 || p.point >= static_cast<int>(points.size()))
      throw ValidationError("scenario '" + scenario.name + "': perturbations[" +
                            std::to_string(i) + "] names an unknown point");
  }
  validate_controller_params(scenario.controller, n);
}

namespace {

[[noreturn]] void fail(const std::string& source, const YAML::Node& node,
                       const std::string& message) {
  std::string where = source;
  if (node.Mark().line >= 0) where += ":" + std::to_string(node.Mark().line + 1);
  throw ValidationError(where + ": " + message);
}

double number(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) fail(source, node, std::string(what) + " must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(source, node, std::string(what) + " is not a valid number");
  }
}

VecX vector_field(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsSequence()) fail(source, node, std::string(what) + " must be a list");
  VecX v(node.size());
  for (size_t i = 0; i < node.size(); ++i) v[static_cast<int>(i)] = number(source, node[i], what);
  return v;
}

VecX deg_vector(const std::string& source, const YAML::Node& node, const char* what) {
  VecX v = vector_field(source, node, what);
  for (int i = 0; i < v.size(); ++i) v[i] = deg_to_rad(v[i]);
  return v;
}

Vec3 vec3_field(const std::string& source, const YAML::Node& node, const char* what) {
  VecX v = vector_field(source, node, what);
  if (v.size() != 3) fail(source, node, std::string(what) + " must have 3 entries");
  return Vec3(v[0], v[1], v[2]);
}

PointMass point_mass(const std::string& source, const YAML::Node& node,
                     const MusculoskeletalModel& robot) {
  PointMass m;
  if (!node.IsMap() || !node["link"] || !node["mass_kg"])
    fail(source, node, "point mass needs 'link' and 'mass_kg'");
  const std::string link = node["link"].as<std::string>();
  m.link = robot.tree().find_link(link);
  if (m.link < 0) fail(source, node["link"], "unknown link '" + link + "'");
  m.mass = number(source, node["mass_kg"], "mass_kg");
  if (node["offset"]) m.offset = vec3_field(source, node["offset"], "offset");
  return m;
}

}  // namespace

Scenario parse_scenario_yaml(const std::string& text, const std::string& source,
                             const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ValidationError(source + ": scenario must be a YAML map");

  Scenario sc;
  sc.name = root["name"] ? root["name"].as<std::string>() : "unnamed";

  if (!root["robot"]) fail(source, root, "scenario needs a 'robot' reference");
  const std::string robot_ref = root["robot"].as<std::string>();
  if (robot_ref.rfind("builtin:", 0) == 0) {
    sc.robot = models::by_name(robot_ref.substr(8));
  } else {
    sc.robot = load_robot_file(base_dir / robot_ref);
  }
  const int n = sc.robot.joint_count();

  if (root["duration_s"]) sc.duration = number(source, root["duration_s"], "duration_s");
  if (root["control_rate_hz"])
    sc.control_rate = number(source, root["control_rate_hz"], "control_rate_hz");
  if (root["physics_rate_hz"])
    sc.physics_rate = number(source, root["physics_rate_hz"], "physics_rate_hz");
  if (root["seed"]) sc.seed = root["seed"].as<std::uint64_t>();
  if (root["use_true_angles"]) sc.use_true_angles = root["use_true_angles"].as<bool>();
  if (root["initial_posture_deg"])
    sc.theta0 = deg_vector(source, root["initial_posture_deg"], "initial_posture_deg");

  if (const YAML::Node wps = root["waypoints"]) {
    if (!wps.IsSequence()) fail(source, wps, "'waypoints' must be a list");
    for (const auto& wn : wps) {
      if (!wn.IsMap() || !wn["time_s"] || !wn["target_deg"])
        fail(source, wn, "each waypoint needs 'time_s' and 'target_deg'");
      Waypoint w;
      w.time = number(source, wn["time_s"], "time_s");
      w.target = deg_vector(source, wn["target_deg"], "target_deg");
      if (w.target.size() != n)
        fail(source, wn["target_deg"], "target_deg needs one entry per joint");
      sc.waypoints.push_back(std::move(w));
    }
  }

  if (const YAML::Node pn = root["plant"]) {
    if (!pn.IsMap()) fail(source, pn, "'plant' must be a map");
    if (pn["wire_compliance_m_per_kgf"])
      sc.plant.wire_compliance =
          number(source, pn["wire_compliance_m_per_kgf"], "wire_compliance_m_per_kgf");
    if (pn["actuator_time_constant_s"])
      sc.plant.actuator_time_constant =
          number(source, pn["actuator_time_constant_s"], "actuator_time_constant_s");
    if (pn["joint_damping"])
      sc.plant.joint_damping = vector_field(source, pn["joint_damping"], "joint_damping");
    if (pn["joint_inertia"])
      sc.plant.joint_inertia = vector_field(source, pn["joint_inertia"], "joint_inertia");
    if (pn["tension_ceiling_kgf"])
      sc.plant.tension_ceiling = number(source, pn["tension_ceiling_kgf"], "tension_ceiling_kgf");
    if (pn["gravity"]) sc.plant.gravity = vec3_field(source, pn["gravity"], "gravity");
    if (const YAML::Node tn = pn["thermal"]) {
      if (tn["onset_kgf"]) sc.plant.thermal.heat_onset = number(source, tn["onset_kgf"], "onset_kgf");
      if (tn["heat_rate"]) sc.plant.thermal.heat_rate = number(source, tn["heat_rate"], "heat_rate");
      if (tn["cool_rate"]) sc.plant.thermal.cool_rate = number(source, tn["cool_rate"], "cool_rate");
      if (tn["ambient_c"]) sc.plant.thermal.ambient = number(source, tn["ambient_c"], "ambient_c");
    }
    if (const YAML::Node mn = pn["masses"]) {
      if (!mn.IsSequence()) fail(source, mn, "'masses' must be a list");
      for (const auto& m : mn) sc.plant.masses.push_back(point_mass(source, m, sc.robot));
    }
    if (const YAML::Node pert = pn["perturbations"]) {
      if (!pert.IsSequence()) fail(source, pert, "'perturbations' must be a list");
      for (const auto& p : pert) {
        if (!p.IsMap() || !p["muscle"] || !p["offset_mm"])
          fail(source, p, "each perturbation needs 'muscle' and 'offset_mm'");
        ViaPointPerturbation vp;
        const std::string muscle = p["muscle"].as<std::string>();
        vp.muscle = sc.robot.find_muscle(muscle);
        if (vp.muscle < 0) fail(source, p["muscle"], "unknown muscle '" + muscle + "'");
        vp.point = p["point"] ? p["point"].as<int>()
                              : static_cast<int>(sc.robot.muscle(vp.muscle).points.size()) / 2;
        vp.offset = vec3_field(source, p["offset_mm"], "offset_mm") * 1e-3;
        sc.perturbations.push_back(vp);
      }
    }
    if (pn["random_perturbation_mm"])
      sc.random_perturbation_mm =
          number(source, pn["random_perturbation_mm"], "random_perturbation_mm");
  }

  if (const YAML::Node ln = root["load"]) {
    if (ln["joint_torque_nm"])
      sc.load.joint_torque = vector_field(source, ln["joint_torque_nm"], "joint_torque_nm");
    if (ln["held_mass"]) sc.load.held_mass = point_mass(source, ln["held_mass"], sc.robot);
  }

  if (const YAML::Node cn = root["controller"]) {
    if (!cn.IsMap()) fail(source, cn, "'controller' must be a map");
    if (cn["kind"]) {
      try {
        sc.controller.kind = controller_kind_from_string(cn["kind"].as<std::string>());
      } catch (const ValidationError& e) {
        fail(source, cn["kind"], e.what());
      }
    }
    if (cn["t_bias_kgf"]) sc.controller.t_bias = number(source, cn["t_bias_kgf"], "t_bias_kgf");
    if (cn["stiffness_gain_kgf_per_mm"])
      sc.controller.stiffness_gain =
          number(source, cn["stiffness_gain_kgf_per_mm"], "stiffness_gain_kgf_per_mm");
    if (cn["antagonist_threshold"])
      sc.controller.antagonist_threshold =
          number(source, cn["antagonist_threshold"], "antagonist_threshold");
    if (cn["ramp_time_ms"])
      sc.controller.ramp_time_ms = number(source, cn["ramp_time_ms"], "ramp_time_ms");
    if (cn["epsilon_theta_deg"])
      sc.controller.epsilon_theta =
          deg_to_rad(number(source, cn["epsilon_theta_deg"], "epsilon_theta_deg"));
    if (cn["jsc_kp"]) sc.controller.jsc_kp = vector_field(source, cn["jsc_kp"], "jsc_kp");
    if (cn["jsc_kd"]) sc.controller.jsc_kd = vector_field(source, cn["jsc_kd"], "jsc_kd");
  }

  if (const YAML::Node en = root["estimator"]) {
    if (en["initial_stddev_deg"])
      sc.estimator.initial_stddev_deg =
          number(source, en["initial_stddev_deg"], "initial_stddev_deg");
    if (en["process_stddev_deg_per_s"])
      sc.estimator.process_stddev_deg_per_s =
          number(source, en["process_stddev_deg_per_s"], "process_stddev_deg_per_s");
    if (en["measurement_stddev_mm"])
      sc.estimator.measurement_stddev_mm =
          number(source, en["measurement_stddev_mm"], "measurement_stddev_mm");
    if (en["initial_estimate_deg"])
      sc.theta_hat0 = deg_vector(source, en["initial_estimate_deg"], "initial_estimate_deg");
  }

  if (const YAML::Node fn = root["fit"]) {
    if (fn["degree"]) sc.fit.degree = fn["degree"].as<int>();
    if (fn["samples_per_joint"]) sc.fit.samples_per_joint = fn["samples_per_joint"].as<int>();
    if (fn["max_total_samples"]) sc.fit.max_total_samples = fn["max_total_samples"].as<int>();
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ValidationError(path.string() + ": cannot open scenario");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario_yaml(buffer.str(), path.string(), path.parent_path());
}

}  // namespace tendon
