#include "tendon/ekf.hpp"

#include <Eigen/Cholesky>

namespace tendon {

EkfState make_ekf(const VecX& theta0, int muscle_count, double initial_stddev_deg,
                  double process_stddev_deg_per_s, double measurement_stddev_mm) {
  EkfState s;
  s.theta_hat = theta0;
  const int n = static_cast<int>(theta0.size());
  double p0 = deg_to_rad(initial_stddev_deg);
  s.covariance = MatX::Identity(n, n) * (p0 * p0);
  double q = deg_to_rad(process_stddev_deg_per_s);
  s.process_noise = VecX::Constant(n, q * q);
  double r = measurement_stddev_mm * 1e-3;
  s.measurement_noise = VecX::Constant(muscle_count, r * r);
  validate_ekf(s);
  return s;
}

void validate_ekf(const EkfState& state) {
  const int n = static_cast<int>(state.theta_hat.size());
  if (state.covariance.rows() != n || state.covariance.cols() != n)
    throw ValidationError("EKF covariance has wrong shape");
  if ((state.covariance - state.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("EKF covariance is not symmetric");
  Eigen::LLT<MatX> llt(state.covariance);
  if (llt.info() != Eigen::Success)
    throw ValidationError("EKF covariance is not positive definite");
  if ((state.process_noise.array() <= 0.0).any() ||
      (state.measurement_noise.array() <= 0.0).any())
    throw ValidationError("EKF noise parameters must be positive");
}

EkfState ekf_predict(const EkfState& state, double dt) {
  if (!(dt > 0.0)) throw ValidationError("EKF predict needs dt > 0");
  EkfState next = state;
  next.covariance += (dt * state.process_noise).asDiagonal();
  return next;
}

EkfState ekf_update(const EkfState& state, const VecX& measured_lengths,
                    const std::vector<LengthPolynomial>& polys, const KinematicTree& tree) {
  const int l = static_cast<int>(polys.size());
  const int n = static_cast<int>(state.theta_hat.size());
  if (measured_lengths.size() != l)
    throw ValidationError("EKF measurement size does not match muscle count");

  EkfState next = state;
  next.update_skipped = false;

  VecX predicted = polynomial_lengths(polys, state.theta_hat);
  VecX innovation = measured_lengths - predicted;
  if (!innovation.allFinite()) {
    next.update_skipped = true;
    return next;
  }

  MatX h = jacobian_from_polynomials(polys, state.theta_hat, n).g;
  MatX r = MatX(state.measurement_noise.asDiagonal());
  MatX s = h * state.covariance * h.transpose() + r;
  MatX gain = state.covariance * h.transpose() * s.ldlt().solve(MatX::Identity(l, l));

  next.theta_hat = state.theta_hat + gain * innovation;
  // Joseph form keeps the covariance positive definite over long runs.
  MatX ikh = MatX::Identity(n, n) - gain * h;
  next.covariance = ikh * state.covariance * ikh.transpose() + gain * r * gain.transpose();
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose());
  next.theta_hat = tree.clamp_to_limits(next.theta_hat);
  return next;
}

}  // namespace tendon
