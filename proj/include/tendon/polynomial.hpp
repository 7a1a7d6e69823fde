#pragma once

#include "tendon/muscle.hpp"
#include "tendon/types.hpp"

#include <cstdint>
#include <vector>

namespace tendon {

/// Muscle length as a polynomial of the joint angles that actually move the
/// muscle. Differentiating it yields the muscle Jacobian row.
struct LengthPolynomial {
  int muscle = -1;
  std::vector<int> joints;                  // involved joints, ascending
  std::vector<std::vector<int>> exponents;  // per term, per involved joint
  VecX coefficients;                        // meters over radians
  int degree = 0;
  VecX domain_lower;                        // fit domain, per involved joint
  VecX domain_upper;
  double residual_rms = 0.0;                // [m], at the fit samples

  /// Length at a full joint posture. Involved angles are clamped into the
  /// fit domain; *extrapolated is set when clamping happened.
  double value(const VecX& theta, bool* extrapolated = nullptr) const;

  /// Analytic gradient w.r.t. the involved joints (same clamping rule).
  VecX gradient(const VecX& theta, bool* extrapolated = nullptr) const;
};

struct FitOptions {
  int degree = 4;
  int samples_per_joint = 15;
  double domain_shrink = 0.02;     // joint limits pulled inward by this fraction
  int max_total_samples = 20000;   // grid cap; samples per joint shrink to fit
  double probe_step = 0.05;        // [rad] involvement probing
  double probe_tolerance = 1e-7;   // [m]
  int probe_bases = 3;
};

/// Joints whose motion changes the muscle's length, found by perturbing each
/// joint by +-probe_step around random in-limit base postures. Deterministic:
/// the probe postures are seeded from the muscle index.
std::vector<int> detect_involved_joints(const MusculoskeletalModel& model, int muscle,
                                        double probe_step = 0.05,
                                        double tolerance = 1e-7,
                                        int bases = 3);

/// Least-squares fit of muscle_lengths over a regular grid of involved joint
/// angles. Throws ValidationError on a rank-deficient design (grid too small
/// for the requested degree).
LengthPolynomial fit_length_polynomial(const MusculoskeletalModel& model, int muscle,
                                       const FitOptions& options = {});

std::vector<LengthPolynomial> fit_all_muscles(const MusculoskeletalModel& model,
                                              const FitOptions& options = {});

/// Polynomial-predicted lengths at a posture; the EKF measurement model.
VecX polynomial_lengths(const std::vector<LengthPolynomial>& polys, const VecX& theta);

/// Muscle Jacobian assembled from the polynomial gradients. Entries for
/// non-involved joints are exactly zero. The result is flagged extrapolated
/// when theta had to be clamped into some fit domain.
MuscleJacobian jacobian_from_polynomials(const std::vector<LengthPolynomial>& polys,
                                         const VecX& theta, int joint_count);

}  // namespace tendon
