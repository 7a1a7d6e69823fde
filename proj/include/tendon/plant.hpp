#pragma once

#include "tendon/muscle.hpp"
#include "tendon/types.hpp"

#include <optional>
#include <vector>

namespace tendon {

/// Offset applied to one routing point of the plant's true model; the
/// injectable geometric model error. `point` may name any routing point,
/// interior via points being the usual target.
struct ViaPointPerturbation {
  int muscle = 0;
  int point = 0;
  Vec3 offset = Vec3::Zero();  // [m]
};

struct PointMass {
  int link = 0;
  Vec3 offset = Vec3::Zero();  // [m], link frame
  double mass = 0.0;           // [kg]
};

struct ThermalParams {
  double heat_onset = 30.0;   // [kgf] tension above which the wire heats
  double heat_rate = 0.02;    // [degC / (kgf s)]
  double cool_rate = 0.02;    // [1/s]
  double ambient = 25.0;      // [degC]
};

/// The simulated "actual robot": true geometry (perturbed relative to the
/// nominal model), first-order tension actuators, damped quasi-static joint
/// dynamics, wire stretch, and wire heating.
struct PlantConfig {
  MusculoskeletalModel true_model;
  double wire_compliance = 2e-4;        // [m/kgf] stretch per unit tension
  double actuator_time_constant = 0.05; // [s]
  VecX joint_damping;                   // [N m s/rad], per joint
  VecX joint_inertia;                   // [kg m^2], per joint
  Vec3 gravity = Vec3(0.0, 0.0, -9.80665);
  double tension_ceiling = 55.0;        // [kgf]
  ThermalParams thermal;
  std::vector<PointMass> masses;        // body masses for gravity torque
};

/// Validates ranges and applies the perturbations to a copy of the nominal
/// model.
PlantConfig make_plant_config(const MusculoskeletalModel& nominal,
                              const std::vector<ViaPointPerturbation>& perturbations,
                              PlantConfig base = {});

struct PlantState {
  VecX theta;        // [rad] ground truth
  VecX theta_dot;    // [rad/s]
  VecX tensions;     // [kgf] realized
  VecX temperatures; // [degC]
  double time = 0.0; // [s]
};

PlantState initial_plant_state(const PlantConfig& config, const VecX& theta0);

struct ExternalLoad {
  VecX joint_torque;                  // [N m] per joint; empty means zero
  std::optional<PointMass> held_mass; // e.g. a carried weight at the hand
};

/// Encoder-side paid-out wire length: true path length plus tension stretch.
VecX measured_lengths(const PlantConfig& config, const PlantState& state);

/// Gravity torque of the configured masses (plus a held mass, if any) at a
/// posture.
VecX gravity_torque(const PlantConfig& config, const VecX& theta, const ExternalLoad& load);

/// One semi-implicit Euler step, dt in (0, 10 ms]. Pure: state in, state out.
PlantState plant_step(const PlantConfig& config, const PlantState& state,
                      const VecX& tension_commands, const ExternalLoad& load, double dt);

// ---------------------------------------------------------------------------
// Antagonistic pair diagnostics. Per-muscle tension is binned into taut /
// loose / over; moving pairs map onto a 3x3 grid (ids 1-9) and settled pairs
// onto ids 10-13:
//   10 both taut, 11 first loose, 12 second loose, 13 both over-tension.
// Diagnostic only; nothing feeds back into control.

enum class TensionLevel { taut, loose, over };

struct PairStateThresholds {
  double loose_below = 1.0;     // [kgf]
  double over_above = 6.0;      // [kgf]
  double settled_speed = 0.05;  // [rad/s] max |joint velocity| to count settled
};

TensionLevel classify_tension_level(double tension_kgf, const PairStateThresholds& thresholds);

int classify_pair_state(TensionLevel first, TensionLevel second, bool settled);

/// Convenience: per registered pair of the plant's model.
std::vector<int> pair_states(const PlantConfig& config, const PlantState& state,
                             const PairStateThresholds& thresholds);

}  // namespace tendon
