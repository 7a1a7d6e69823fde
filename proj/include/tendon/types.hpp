#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <numbers>
#include <stdexcept>
#include <string>

namespace tendon {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Transform = Eigen::Isometry3d;

// Internal units are radians and meters. Files, CLI output, and trace
// columns use degrees and kgf.
inline constexpr double kKgfToNewton = 9.80665;

inline constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}

inline constexpr double rad_to_deg(double rad) {
  return rad * 180.0 / std::numbers::pi;
}

/// Bad model/scenario/config input. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tendon
