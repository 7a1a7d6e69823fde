#pragma once

#include "tendon/scenario.hpp"
#include "tendon/trace.hpp"

#include <vector>

namespace tendon {

struct RunResult {
  ScenarioTrace trace;
  Metrics metrics;
  std::vector<ViaPointPerturbation> applied_perturbations;  // explicit + sampled
};

/// Closed loop: estimator predict/update from measured lengths, controller
/// step, then physics substeps; one trace row per control tick. Aborts with
/// a diagnostic dump of the last 100 rows if the state goes non-finite.
RunResult run_scenario(const Scenario& scenario);

/// Same, reusing polynomials fitted earlier for this robot.
RunResult run_scenario(const Scenario& scenario, const std::vector<LengthPolynomial>& polys);

/// Per-muscle via offsets with magnitude in [0, max_mm], sampled from seed.
/// The perturbed point is the middle routing point of each muscle.
std::vector<ViaPointPerturbation> sample_perturbations(const MusculoskeletalModel& model,
                                                       double max_mm, std::uint64_t seed);

struct ComparisonEntry {
  ControllerKind kind;
  Metrics metrics;
};

struct Comparison {
  std::vector<ComparisonEntry> entries;
  std::vector<ViaPointPerturbation> applied_perturbations;

  const Metrics& metrics_for(ControllerKind kind) const;
  /// max_tension(a) / max_tension(b)
  double max_tension_ratio(ControllerKind a, ControllerKind b) const;
};

/// Runs the same scenario (same plant, same sampled perturbations) under
/// each controller kind. Needs at least two kinds.
Comparison compare_controllers(const Scenario& scenario,
                               const std::vector<ControllerKind>& kinds);

/// Metrics from a finished trace; exposed for tests.
Metrics compute_metrics(const ScenarioTrace& trace, const Scenario& scenario);

}  // namespace tendon
