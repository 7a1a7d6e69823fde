#pragma once

#include "tendon/kinematics.hpp"
#include "tendon/polynomial.hpp"
#include "tendon/types.hpp"

#include <vector>

namespace tendon {

/// Extended Kalman Filter over joint angles. Process model is a random walk;
/// the measurement model is the fitted muscle-length polynomial and its
/// gradient (the muscle Jacobian). Values are immutable: predict/update
/// return new states.
struct EkfState {
  VecX theta_hat;          // [rad]
  MatX covariance;         // [rad^2], symmetric positive definite
  VecX process_noise;      // [rad^2/s] per joint
  VecX measurement_noise;  // [m^2] per muscle
  bool update_skipped = false;  // last update saw a non-finite innovation
};

/// Defaults: initial stddev 10 deg, process (1 deg/s)^2, measurement (0.5 mm)^2.
EkfState make_ekf(const VecX& theta0, int muscle_count,
                  double initial_stddev_deg = 10.0,
                  double process_stddev_deg_per_s = 1.0,
                  double measurement_stddev_mm = 0.5);

/// Validates sizes, SPD covariance (Cholesky must succeed), positive noise.
void validate_ekf(const EkfState& state);

EkfState ekf_predict(const EkfState& state, double dt);

/// Standard EKF measurement update in Joseph form, re-symmetrized; the
/// estimate is clamped to the joint limits afterwards. A non-finite
/// innovation skips the update and sets update_skipped.
EkfState ekf_update(const EkfState& state, const VecX& measured_lengths,
                    const std::vector<LengthPolynomial>& polys, const KinematicTree& tree);

}  // namespace tendon
