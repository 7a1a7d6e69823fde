#include "tendon/runner.hpp"

#include "tendon/ekf.hpp"
#include "tendon/log.hpp"
#include "tendon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tendon {

namespace {

VecX target_at(const Scenario& scenario, double time) {
  VecX target = scenario.theta0;
  for (const Waypoint& w : scenario.waypoints) {
    if (w.time <= time) target = w.target;
    else break;
  }
  return target;
}

bool row_finite(const TraceRow& row) {
  return row.theta_true.allFinite() && row.commanded.allFinite() &&
         row.realized.allFinite() && row.theta_hat.allFinite();
}

[[noreturn]] void abort_run(const Scenario& scenario, const ScenarioTrace& trace, double time) {
  std::ostringstream dump;
  dump << "scenario '" << scenario.name << "' went non-finite at t=" << time
       << "s; last rows follow\n" << trace_header(trace);
  size_t from = trace.rows.size() > 100 ? trace.rows.size() - 100 : 0;
  for (size_t i = from; i < trace.rows.size(); ++i) {
    const TraceRow& r = trace.rows[i];
    dump << "\nt=" << r.time << " theta_true=" << r.theta_true.transpose()
         << " tensions=" << r.realized.transpose();
  }
  log::error(dump.str());
  throw std::runtime_error("simulation diverged (non-finite state) in scenario '" +
                           scenario.name + "' at t=" + std::to_string(time) + " s");
}

}  // namespace

std::vector<ViaPointPerturbation> sample_perturbations(const MusculoskeletalModel& model,
                                                       double max_mm, std::uint64_t seed) {
  std::vector<ViaPointPerturbation> out;
  if (max_mm <= 0.0) return out;
  Rng rng(seed ^ 0xd1b54a32d192ed03ull);
  for (int m = 0; m < model.muscle_count(); ++m) {
    const auto& points = model.muscle(m).points;
    ViaPointPerturbation p;
    p.muscle = m;
    p.point = static_cast<int>(points.size()) / 2;  // interior point when present
    double magnitude = rng.uniform(0.0, max_mm) * 1e-3;
    // Uniform direction from two angles; deterministic across platforms.
    double z = rng.uniform(-1.0, 1.0);
    double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    p.offset = magnitude * Vec3(r * std::cos(phi), r * std::sin(phi), z);
    out.push_back(p);
  }
  return out;
}

RunResult run_scenario(const Scenario& scenario) {
  return run_scenario(scenario, fit_all_muscles(scenario.robot, scenario.fit));
}

RunResult run_scenario(const Scenario& scenario, const std::vector<LengthPolynomial>& polys) {
  validate_scenario(scenario);

  RunResult result;
  result.applied_perturbations = scenario.perturbations;
  if (scenario.random_perturbation_mm > 0.0) {
    auto sampled =
        sample_perturbations(scenario.robot, scenario.random_perturbation_mm, scenario.seed);
    result.applied_perturbations.insert(result.applied_perturbations.end(), sampled.begin(),
                                        sampled.end());
  }

  PlantConfig config =
      make_plant_config(scenario.robot, result.applied_perturbations, scenario.plant);

  const int n = scenario.robot.joint_count();
  VecX theta0 = scenario.theta0.size() ? scenario.theta0 : VecX::Zero(n);
  PlantState state = initial_plant_state(config, theta0);

  VecX theta_hat0 = scenario.theta_hat0.size() ? scenario.theta_hat0 : theta0;
  EkfState ekf = make_ekf(theta_hat0, scenario.robot.muscle_count(),
                          scenario.estimator.initial_stddev_deg,
                          scenario.estimator.process_stddev_deg_per_s,
                          scenario.estimator.measurement_stddev_mm);

  Controller controller(scenario.controller, scenario.robot, polys);

  PairStateThresholds pair_thresholds;
  pair_thresholds.loose_below = 0.5 * scenario.controller.t_bias;
  pair_thresholds.over_above = 3.0 * scenario.controller.t_bias;

  ScenarioTrace& trace = result.trace;
  for (int j = 0; j < n; ++j) trace.joint_names.push_back(scenario.robot.tree().joint_link(j).name);
  for (const MuscleRoute& m : scenario.robot.muscles()) trace.muscle_names.push_back(m.name);
  for (const auto& [a, b] : scenario.robot.antagonist_pairs())
    trace.pair_names.emplace_back(scenario.robot.muscle(a).name, scenario.robot.muscle(b).name);

  const int ticks = static_cast<int>(std::llround(scenario.duration * scenario.control_rate));
  const int substeps =
      std::max(1, static_cast<int>(std::llround(scenario.physics_rate / scenario.control_rate)));
  const double dt_control = 1.0 / scenario.control_rate;
  const double dt_physics = dt_control / substeps;

  trace.rows.reserve(ticks);
  for (int tick = 0; tick < ticks; ++tick) {
    const double time = tick * dt_control;
    VecX lengths = measured_lengths(config, state);

    ekf = ekf_predict(ekf, dt_control);
    ekf = ekf_update(ekf, lengths, polys, scenario.robot.tree());
    if (ekf.update_skipped) log::warn("EKF update skipped (non-finite innovation)");

    VecX feedback = scenario.use_true_angles ? state.theta : ekf.theta_hat;
    VecX target = target_at(scenario, time);
    Controller::Output out = controller.step(feedback, lengths, target, dt_control);

    TraceRow row;
    row.time = time;
    row.theta_true = state.theta;
    row.theta_hat = ekf.theta_hat;
    row.theta_target = target;
    row.commanded = out.commands;
    row.realized = state.tensions;
    row.measured_len = lengths;
    row.target_len = out.target_len;
    row.stiffness = out.stiffness;
    row.s = out.flags.s;
    row.agonist = out.flags.agonist;
    row.temperature = state.temperatures;
    row.pair_state = pair_states(config, state, pair_thresholds);
    trace.rows.push_back(std::move(row));
    if (!row_finite(trace.rows.back())) abort_run(scenario, trace, time);

    for (int s = 0; s < substeps; ++s)
      state = plant_step(config, state, out.commands, scenario.load, dt_physics);
  }

  result.metrics = compute_metrics(trace, scenario);
  return result;
}

Metrics compute_metrics(const ScenarioTrace& trace, const Scenario& scenario) {
  Metrics metrics;
  const double t_bias = scenario.controller.t_bias;

  // Hold phases: [waypoint time, next waypoint time); settled = last half.
  struct Phase {
    double begin, end;
  };
  std::vector<Phase> phases;
  if (scenario.waypoints.empty()) {
    phases.push_back({0.0, scenario.duration});
  } else {
    for (size_t i = 0; i < scenario.waypoints.size(); ++i) {
      double begin = scenario.waypoints[i].time;
      double end =
          i + 1 < scenario.waypoints.size() ? scenario.waypoints[i + 1].time : scenario.duration;
      phases.push_back({begin, end});
    }
  }

  metrics.settle_error_deg.assign(phases.size(), 0.0);
  std::vector<int> settled_counts(phases.size(), 0);
  int settled_total = 0;
  int slack_ticks = 0;
  double cocontraction_sum = 0.0;

  for (const TraceRow& row : trace.rows) {
    metrics.max_tension = std::max(metrics.max_tension, row.realized.maxCoeff());
    if (row.temperature.size())
      metrics.peak_temperature = std::max(metrics.peak_temperature, row.temperature.maxCoeff());

    int phase = -1;
    for (size_t i = 0; i < phases.size(); ++i) {
      if (row.time >= phases[i].begin && row.time < phases[i].end) {
        phase = static_cast<int>(i);
        break;
      }
    }
    if (phase < 0) continue;
    const Phase& ph = phases[phase];
    if (row.time < ph.begin + 0.5 * (ph.end - ph.begin)) continue;  // transient half

    ++settled_total;
    ++settled_counts[phase];
    metrics.settle_error_deg[phase] +=
        rad_to_deg((row.theta_true - row.theta_target).cwiseAbs().maxCoeff());

    if (row.realized.minCoeff() < 0.1 * t_bias) ++slack_ticks;

    if (!trace.pair_names.empty()) {
      double min_excess = std::numeric_limits<double>::infinity();
      for (size_t p = 0; p < trace.pair_names.size(); ++p) {
        int a = -1, b = -1;
        for (size_t m = 0; m < trace.muscle_names.size(); ++m) {
          if (trace.muscle_names[m] == trace.pair_names[p].first) a = static_cast<int>(m);
          if (trace.muscle_names[m] == trace.pair_names[p].second) b = static_cast<int>(m);
        }
        double excess = std::max(0.0, std::min(row.realized[a], row.realized[b]) - t_bias);
        min_excess = std::min(min_excess, excess);
      }
      cocontraction_sum += min_excess;
    }
  }

  for (size_t i = 0; i < phases.size(); ++i) {
    if (settled_counts[i] > 0) metrics.settle_error_deg[i] /= settled_counts[i];
  }
  if (settled_total > 0) {
    metrics.slack_fraction = static_cast<double>(slack_ticks) / settled_total;
    metrics.cocontraction_index = cocontraction_sum / settled_total;
  }
  return metrics;
}

const Metrics& Comparison::metrics_for(ControllerKind kind) const {
  for (const ComparisonEntry& e : entries)
    if (e.kind == kind) return e.metrics;
  throw ValidationError("comparison has no entry for controller '" + to_string(kind) + "'");
}

double Comparison::max_tension_ratio(ControllerKind a, ControllerKind b) const {
  return metrics_for(a).max_tension / metrics_for(b).max_tension;
}

Comparison compare_controllers(const Scenario& scenario,
                               const std::vector<ControllerKind>& kinds) {
  if (kinds.size() < 2)
    throw ValidationError("compare_controllers needs at least two controller kinds");
  validate_scenario(scenario);

  // Sample the model error once so every kind faces the identical plant.
  Scenario resolved = scenario;
  if (resolved.random_perturbation_mm > 0.0) {
    auto sampled =
        sample_perturbations(resolved.robot, resolved.random_perturbation_mm, resolved.seed);
    resolved.perturbations.insert(resolved.perturbations.end(), sampled.begin(), sampled.end());
    resolved.random_perturbation_mm = 0.0;
  }

  std::vector<LengthPolynomial> polys = fit_all_muscles(resolved.robot, resolved.fit);

  Comparison comparison;
  comparison.applied_perturbations = resolved.perturbations;
  for (ControllerKind kind : kinds) {
    Scenario variant = resolved;
    variant.controller.kind = kind;
    if (kind == ControllerKind::jsc && variant.controller.jsc_kp.size() == 0) {
      variant.controller.jsc_kp = VecX::Constant(variant.robot.joint_count(), 30.0);
      variant.controller.jsc_kd = VecX::Constant(variant.robot.joint_count(), 1.0);
    }
    RunResult run = run_scenario(variant, polys);
    comparison.entries.push_back({kind, run.metrics});
  }
  return comparison;
}

}  // namespace tendon
