#include "tendon/control.hpp"

#include <Eigen/QR>

#include <cmath>

namespace tendon {

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::msc: return "msc";
    case ControllerKind::jaic: return "jaic";
    case ControllerKind::maic: return "maic";
    case ControllerKind::jsc: return "jsc";
  }
  return "?";
}

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "msc") return ControllerKind::msc;
  if (name == "jaic") return ControllerKind::jaic;
  if (name == "maic") return ControllerKind::maic;
  if (name == "jsc") return ControllerKind::jsc;
  throw ValidationError("unknown controller kind '" + name +
                        "' (expected msc, jaic, maic, or jsc)");
}

void validate_controller_params(const ControllerParams& params, int joint_count) {
  if (!(params.t_bias > 0.0)) throw ValidationError("T_bias must be positive");
  if (!(params.stiffness_gain >= 0.0)) throw ValidationError("stiffness gain k must be >= 0");
  if (!(params.ramp_time_ms > 0.0)) throw ValidationError("ramp time t_k must be positive");
  if (!(params.epsilon_theta > 0.0)) throw ValidationError("epsilon_theta must be positive");
  if (params.kind == ControllerKind::jsc) {
    if (params.jsc_kp.size() != joint_count || params.jsc_kd.size() != joint_count)
      throw ValidationError("JSC needs per-joint kp and kd gains");
    if ((params.jsc_kp.array() < 0.0).any() || (params.jsc_kd.array() < 0.0).any())
      throw ValidationError("JSC gains must be >= 0");
  }
}

VecX target_lengths(const MusculoskeletalModel& nominal, const VecX& theta_target,
                    bool* clamped) {
  VecX inside = nominal.tree().clamp_to_limits(theta_target);
  if (clamped) *clamped = (inside - theta_target).cwiseAbs().maxCoeff() > 0.0;
  return nominal.muscle_lengths(inside);
}

AgonistFlags classify(const MuscleJacobian& jacobian, const VecX& theta,
                      const VecX& theta_target, double antagonist_threshold,
                      double epsilon_theta, const AgonistFlags& previous) {
  VecX delta = theta_target - theta;
  double distance = delta.norm();
  if (distance < epsilon_theta) {
    AgonistFlags held = previous;
    held.at_target = true;
    return held;
  }
  AgonistFlags flags;
  flags.s = jacobian.g * (delta / distance);
  flags.agonist.resize(flags.s.size());
  for (int i = 0; i < flags.s.size(); ++i)
    flags.agonist[i] = flags.s[i] < antagonist_threshold;
  flags.at_target = false;
  return flags;
}

VecX ramp_stiffness(const VecX& current, const AgonistFlags& flags, double gain,
                    double ramp_time_ms, double dt) {
  if (!(dt > 0.0)) throw ValidationError("ramp dt must be positive");
  double slope = gain / (ramp_time_ms * 1e-3);  // [kgf/mm per s]
  VecX next = current;
  for (int i = 0; i < next.size(); ++i) {
    double target = flags.agonist[i] ? gain : 0.0;
    double step = slope * dt;
    if (next[i] < target)
      next[i] = std::min(next[i] + step, target);
    else if (next[i] > target)
      next[i] = std::max(next[i] - step, target);
  }
  return next;
}

VecX msc_tension(const VecX& measured, const VecX& target, const VecX& stiffness,
                 double t_bias) {
  if (measured.size() != target.size() || measured.size() != stiffness.size())
    throw ValidationError("msc_tension: mismatched vector sizes");
  VecX commands(measured.size());
  for (int i = 0; i < measured.size(); ++i) {
    double error_mm = (measured[i] - target[i]) * 1e3;
    commands[i] = t_bias + std::max(0.0, stiffness[i] * error_mm);
  }
  return commands;
}

Controller::Controller(ControllerParams params, MusculoskeletalModel nominal,
                       std::vector<LengthPolynomial> polys)
    : params_(std::move(params)), nominal_(std::move(nominal)), polys_(std::move(polys)) {
  validate_controller_params(params_, nominal_.joint_count());
  if (static_cast<int>(polys_.size()) != nominal_.muscle_count())
    throw ValidationError("controller needs one fitted polynomial per muscle");
  reset();
}

void Controller::reset() {
  const int l = nominal_.muscle_count();
  stiffness_ = VecX::Zero(l);
  previous_flags_.agonist.assign(l, false);  // all inhibited until classified
  previous_flags_.s = VecX::Zero(l);
  previous_flags_.at_target = false;
  jsc_prev_theta_ = VecX();
  jsc_velocity_ = VecX::Zero(nominal_.joint_count());
  first_step_ = true;
}

AgonistFlags Controller::classify_maic(const VecX& measured, const VecX& target_len) const {
  // Agonist iff the muscle must contract: l_target < l. The sign convention
  // matches the joint-based rule (negative s means shorten).
  AgonistFlags flags;
  flags.s = target_len - measured;
  flags.agonist.resize(flags.s.size());
  for (int i = 0; i < flags.s.size(); ++i) flags.agonist[i] = flags.s[i] < 0.0;
  flags.at_target = false;
  return flags;
}

VecX Controller::jsc_commands(const VecX& theta, const VecX& theta_target, double dt) {
  if (first_step_ || jsc_prev_theta_.size() == 0) {
    jsc_velocity_ = VecX::Zero(theta.size());
  } else {
    // Lightly filtered finite difference of the (estimated) angle.
    VecX raw = (theta - jsc_prev_theta_) / dt;
    jsc_velocity_ = 0.8 * jsc_velocity_ + 0.2 * raw;
  }
  jsc_prev_theta_ = theta;

  VecX torque = params_.jsc_kp.cwiseProduct(theta_target - theta) -
                params_.jsc_kd.cwiseProduct(jsc_velocity_);

  // Distribute as nonnegative extra tension above bias: solve
  // -G^T (T_extra * kgf) = torque, clamping negatives and re-solving the
  // residual a few times.
  MatX g = jacobian_from_polynomials(polys_, theta, nominal_.joint_count()).g;
  MatX a = -g.transpose() * kKgfToNewton;  // joints x muscles
  Eigen::CompleteOrthogonalDecomposition<MatX> solver(a);
  VecX extra = solver.solve(torque).cwiseMax(0.0);
  for (int it = 0; it < 10; ++it) {
    VecX residual = torque - a * extra;
    extra = (extra + solver.solve(residual)).cwiseMax(0.0);
  }
  return VecX::Constant(extra.size(), params_.t_bias) + extra;
}

Controller::Output Controller::step(const VecX& theta, const VecX& measured,
                                    const VecX& theta_target, double dt) {
  if (!(dt > 0.0)) throw ValidationError("controller dt must be positive");
  if (theta.size() != nominal_.joint_count())
    throw ValidationError("controller got a posture of wrong size");
  if (measured.size() != nominal_.muscle_count())
    throw ValidationError("controller got a length vector of wrong size");

  Output out;
  out.target_len = target_lengths(nominal_, theta_target, &out.target_clamped);

  const int l = nominal_.muscle_count();
  switch (params_.kind) {
    case ControllerKind::msc: {
      out.flags.agonist.assign(l, true);
      out.flags.s = VecX::Zero(l);
      stiffness_ = VecX::Constant(l, params_.stiffness_gain);
      out.commands = msc_tension(measured, out.target_len, stiffness_, params_.t_bias);
      break;
    }
    case ControllerKind::jaic: {
      MuscleJacobian g = jacobian_from_polynomials(polys_, theta, nominal_.joint_count());
      out.flags = classify(g, theta, theta_target, params_.antagonist_threshold,
                           params_.epsilon_theta, previous_flags_);
      stiffness_ = ramp_stiffness(stiffness_, out.flags, params_.stiffness_gain,
                                  params_.ramp_time_ms, dt);
      out.commands = msc_tension(measured, out.target_len, stiffness_, params_.t_bias);
      break;
    }
    case ControllerKind::maic: {
      out.flags = classify_maic(measured, out.target_len);
      stiffness_ = ramp_stiffness(stiffness_, out.flags, params_.stiffness_gain,
                                  params_.ramp_time_ms, dt);
      out.commands = msc_tension(measured, out.target_len, stiffness_, params_.t_bias);
      break;
    }
    case ControllerKind::jsc: {
      out.flags.agonist.assign(l, true);
      out.flags.s = VecX::Zero(l);
      stiffness_ = VecX::Zero(l);
      out.commands = jsc_commands(theta, theta_target, dt);
      break;
    }
  }

  previous_flags_ = out.flags;
  out.stiffness = stiffness_;
  first_step_ = false;
  return out;
}

}  // namespace tendon
