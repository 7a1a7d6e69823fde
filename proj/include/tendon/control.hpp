#pragma once

#include "tendon/muscle.hpp"
#include "tendon/polynomial.hpp"
#include "tendon/types.hpp"

#include <string>
#include <vector>

namespace tendon {

enum class ControllerKind { msc, jaic, maic, jsc };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ControllerParams {
  ControllerKind kind = ControllerKind::jaic;
  double t_bias = 2.0;             // [kgf] bias keeping wires taut
  double stiffness_gain = 10.0;    // [kgf/mm] k, given to agonists
  double antagonist_threshold = 0.0;  // [m/rad] C; agonist iff s < C
  double ramp_time_ms = 1000.0;    // [ms] t_k, full 0<->k transition
  double epsilon_theta = deg_to_rad(0.5);  // [rad] min |dtheta| to classify
  VecX jsc_kp;                     // [N m/rad] per joint (JSC only)
  VecX jsc_kd;                     // [N m s/rad]
};

void validate_controller_params(const ControllerParams& params, int joint_count);

/// Per-muscle agonist/antagonist decision plus the raw moment-arm value s.
/// MSC and JSC leave every flag agonist.
struct AgonistFlags {
  std::vector<bool> agonist;
  VecX s;                 // [m/rad] (JAIC) or [m] (MAIC length error)
  bool at_target = false; // |theta_target - theta| fell below epsilon
};

/// Target muscle lengths from the exact nominal geometry (not the fitted
/// polynomial, which would put fit error on the command path). Out-of-limit
/// targets are clamped; *clamped reports it.
VecX target_lengths(const MusculoskeletalModel& nominal, const VecX& theta_target,
                    bool* clamped = nullptr);

/// s = G(theta) (theta_target - theta)/|theta_target - theta|; muscle i is an
/// agonist iff s_i < C (it shortens toward the target). Below epsilon_theta
/// no reclassification happens: previous flags come back with at_target set.
AgonistFlags classify(const MuscleJacobian& jacobian, const VecX& theta,
                      const VecX& theta_target, double antagonist_threshold,
                      double epsilon_theta, const AgonistFlags& previous);

/// Per-muscle stiffness ramped linearly toward k (agonist) or 0 (antagonist)
/// with slope k/t_k; saturates at the target value.
VecX ramp_stiffness(const VecX& current, const AgonistFlags& flags, double gain,
                    double ramp_time_ms, double dt);

/// T = T_bias + max(0, K (l - l_target)), K in kgf/mm and lengths in meters.
VecX msc_tension(const VecX& measured, const VecX& target, const VecX& stiffness,
                 double t_bias);

/// Deterministic controller state machine; one instance per scenario run.
class Controller {
public:
  Controller(ControllerParams params, MusculoskeletalModel nominal,
             std::vector<LengthPolynomial> polys);

  struct Output {
    VecX commands;      // [kgf]
    VecX stiffness;     // [kgf/mm]
    VecX target_len;    // [m]
    AgonistFlags flags;
    bool target_clamped = false;
  };

  /// One control tick. theta is the estimate (or ground truth when wired
  /// that way); measured the encoder-side lengths.
  Output step(const VecX& theta, const VecX& measured, const VecX& theta_target, double dt);

  const ControllerParams& params() const { return params_; }
  void reset();

private:
  AgonistFlags classify_maic(const VecX& measured, const VecX& target_len) const;
  VecX jsc_commands(const VecX& theta, const VecX& theta_target, double dt);

  ControllerParams params_;
  MusculoskeletalModel nominal_;
  std::vector<LengthPolynomial> polys_;
  VecX stiffness_;
  AgonistFlags previous_flags_;
  VecX jsc_prev_theta_;
  VecX jsc_velocity_;
  bool first_step_ = true;
};

}  // namespace tendon
