#include "tendon/plant.hpp"

#include <cmath>

namespace tendon {

PlantConfig make_plant_config(const MusculoskeletalModel& nominal,
                              const std::vector<ViaPointPerturbation>& perturbations,
                              PlantConfig base) {
  MusculoskeletalModel true_model = nominal;
  for (const ViaPointPerturbation& p : perturbations)
    true_model = true_model.with_point_offset(p.muscle, p.point, p.offset);
  base.true_model = std::move(true_model);

  const int n = base.true_model.joint_count();
  if (base.joint_damping.size() == 0) base.joint_damping = VecX::Constant(n, 2.0);
  if (base.joint_inertia.size() == 0) base.joint_inertia = VecX::Constant(n, 0.02);
  if (base.joint_damping.size() != n || base.joint_inertia.size() != n)
    throw ValidationError("plant damping/inertia must have one entry per joint");
  if ((base.joint_damping.array() <= 0.0).any())
    throw ValidationError("joint damping must be positive");
  if ((base.joint_inertia.array() <= 0.0).any())
    throw ValidationError("joint inertia must be positive");
  if (base.wire_compliance < 0.0) throw ValidationError("wire compliance must be >= 0");
  if (base.actuator_time_constant <= 0.0)
    throw ValidationError("actuator time constant must be positive");
  if (!(base.thermal.heat_onset > 0.0 && base.thermal.heat_onset < base.tension_ceiling))
    throw ValidationError("thermal onset must lie in (0, tension ceiling)");
  for (const PointMass& m : base.masses) {
    if (m.link < 0 || m.link >= base.true_model.tree().link_count())
      throw ValidationError("point mass references unknown link");
    if (m.mass < 0.0) throw ValidationError("point mass must be >= 0");
  }
  return base;
}

PlantState initial_plant_state(const PlantConfig& config, const VecX& theta0) {
  const int n = config.true_model.joint_count();
  if (theta0.size() != n) throw ValidationError("initial posture has wrong size");
  if (!config.true_model.tree().within_limits(theta0, 1e-12))
    throw ValidationError("initial posture violates joint limits");
  PlantState s;
  s.theta = theta0;
  s.theta_dot = VecX::Zero(n);
  s.tensions = VecX::Zero(config.true_model.muscle_count());
  s.temperatures = VecX::Constant(config.true_model.muscle_count(), config.thermal.ambient);
  s.time = 0.0;
  return s;
}

VecX measured_lengths(const PlantConfig& config, const PlantState& state) {
  return config.true_model.muscle_lengths(state.theta) +
         config.wire_compliance * state.tensions;
}

VecX gravity_torque(const PlantConfig& config, const VecX& theta, const ExternalLoad& load) {
  const KinematicTree& tree = config.true_model.tree();
  const int n = tree.joint_count();
  std::vector<Transform> world = tree.forward_kinematics(theta);

  std::vector<Vec3> axis_w(n), origin_w(n);
  for (int j = 0; j < n; ++j) {
    axis_w[j] = world[j + 1].rotation() * tree.joint_link(j).axis;
    origin_w[j] = world[j + 1].translation();
  }

  VecX torque = VecX::Zero(n);
  auto add_mass = [&](const PointMass& m) {
    if (m.mass == 0.0) return;
    Vec3 p = world[m.link] * m.offset;
    Vec3 force = m.mass * config.gravity;
    for (int j = 0; j < n; ++j) {
      if (!tree.is_descendant_or_self(m.link, j + 1)) continue;
      torque[j] += axis_w[j].cross(p - origin_w[j]).dot(force);
    }
  };
  for (const PointMass& m : config.masses) add_mass(m);
  if (load.held_mass) add_mass(*load.held_mass);
  return torque;
}

PlantState plant_step(const PlantConfig& config, const PlantState& state,
                      const VecX& tension_commands, const ExternalLoad& load, double dt) {
  if (!(dt > 0.0 && dt <= 0.01))
    throw ValidationError("plant step dt must lie in (0, 10 ms]");
  const int n = config.true_model.joint_count();
  const int l = config.true_model.muscle_count();
  if (tension_commands.size() != l)
    throw ValidationError("tension command vector has wrong size");
  if (!tension_commands.allFinite())
    throw ValidationError("non-finite tension command");
  if (load.joint_torque.size() != 0 && load.joint_torque.size() != n)
    throw ValidationError("external joint torque has wrong size");

  const KinematicTree& tree = config.true_model.tree();
  PlantState next = state;

  // (a) first-order lag toward the clamped command, integrated exactly.
  VecX target = tension_commands.cwiseMax(0.0).cwiseMin(config.tension_ceiling);
  double decay = std::exp(-dt / config.actuator_time_constant);
  next.tensions = target + (state.tensions - target) * decay;

  // (b) joint torque from muscle tension, gravity, external load, damping.
  MatX g_true = config.true_model.jacobian_geometric(state.theta).g;
  VecX torque = -g_true.transpose() * (next.tensions * kKgfToNewton);
  torque += gravity_torque(config, state.theta, load);
  if (load.joint_torque.size() == n) torque += load.joint_torque;
  torque -= config.joint_damping.cwiseProduct(state.theta_dot);

  // (c) semi-implicit Euler with a hard clamp at the joint limits.
  next.theta_dot = state.theta_dot + dt * torque.cwiseQuotient(config.joint_inertia);
  next.theta = state.theta + dt * next.theta_dot;
  for (int j = 0; j < n; ++j) {
    const Link& jl = tree.joint_link(j);
    if (next.theta[j] < jl.lower_limit) {
      next.theta[j] = jl.lower_limit;
      next.theta_dot[j] = 0.0;
    } else if (next.theta[j] > jl.upper_limit) {
      next.theta[j] = jl.upper_limit;
      next.theta_dot[j] = 0.0;
    }
  }

  // (d) wire heating above the onset tension, Newton cooling toward ambient.
  const ThermalParams& th = config.thermal;
  for (int i = 0; i < l; ++i) {
    double heating = th.heat_rate * std::max(0.0, next.tensions[i] - th.heat_onset);
    double cooling = th.cool_rate * (state.temperatures[i] - th.ambient);
    next.temperatures[i] = state.temperatures[i] + (heating - cooling) * dt;
  }

  next.time = state.time + dt;
  return next;
}

TensionLevel classify_tension_level(double tension_kgf, const PairStateThresholds& thresholds) {
  if (tension_kgf < thresholds.loose_below) return TensionLevel::loose;
  if (tension_kgf > thresholds.over_above) return TensionLevel::over;
  return TensionLevel::taut;
}

int classify_pair_state(TensionLevel first, TensionLevel second, bool settled) {
  if (!settled) {
    // 3x3 grid of (first, second) tension levels, ids 1-9.
    return 1 + 3 * static_cast<int>(first) + static_cast<int>(second);
  }
  if (first == TensionLevel::over && second == TensionLevel::over) return 13;
  if (first == TensionLevel::loose) return 11;
  if (second == TensionLevel::loose) return 12;
  return 10;
}

std::vector<int> pair_states(const PlantConfig& config, const PlantState& state,
                             const PairStateThresholds& thresholds) {
  bool settled = state.theta_dot.size() == 0 ||
                 state.theta_dot.cwiseAbs().maxCoeff() <= thresholds.settled_speed;
  std::vector<int> states;
  states.reserve(config.true_model.antagonist_pairs().size());
  for (const auto& [a, b] : config.true_model.antagonist_pairs()) {
    states.push_back(classify_pair_state(classify_tension_level(state.tensions[a], thresholds),
                                         classify_tension_level(state.tensions[b], thresholds),
                                         settled));
  }
  return states;
}

}  // namespace tendon
