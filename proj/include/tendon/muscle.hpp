#pragma once

#include "tendon/kinematics.hpp"
#include "tendon/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tendon {

/// A routing point of a muscle wire: a fixed offset on one link.
struct MusclePoint {
  int link = 0;
  Vec3 offset = Vec3::Zero();   // [m], in the link frame
};

/// Straight-segment muscle route: origin, optional via points, insertion.
struct MuscleRoute {
  std::string name;
  std::vector<MusclePoint> points;
};

/// Muscle Jacobian G = dl/dtheta, an (muscles x joints) matrix in m/rad.
/// -G(i,j) is the moment arm of muscle i about joint j.
struct MuscleJacobian {
  MatX g;
  VecX theta;                   // posture it was evaluated at
  bool extrapolated = false;    // theta was clamped into the fit domain
};

/// Kinematic tree plus muscle routing; the controller-side geometric model.
/// Immutable after construction, so instances can be shared across threads.
class MusculoskeletalModel {
public:
  MusculoskeletalModel() = default;

  /// Validates every route: at least two points, no zero-length segment
  /// between identical points on one link, and at least one segment spanning
  /// two different links. `pairs` registers antagonistic pairs by muscle
  /// index for diagnostics.
  MusculoskeletalModel(KinematicTree tree, std::vector<MuscleRoute> muscles,
                       std::vector<std::pair<int, int>> pairs = {});

  const KinematicTree& tree() const { return tree_; }
  const std::vector<MuscleRoute>& muscles() const { return muscles_; }
  const MuscleRoute& muscle(int i) const { return muscles_.at(i); }
  int muscle_count() const { return static_cast<int>(muscles_.size()); }
  int joint_count() const { return tree_.joint_count(); }

  /// Index of the named muscle, or -1.
  int find_muscle(const std::string& name) const;

  const std::vector<std::pair<int, int>>& antagonist_pairs() const { return pairs_; }

  /// Path length of every muscle at the given posture: the sum of Euclidean
  /// distances between consecutive routing points in world frame.
  VecX muscle_lengths(const VecX& theta) const;
  VecX muscle_lengths(const std::vector<Transform>& world) const;
  double muscle_length(int muscle, const std::vector<Transform>& world) const;

  /// Central-difference muscle Jacobian; the reference oracle for the
  /// polynomial route.
  MuscleJacobian jacobian_finite_difference(const VecX& theta, double h = 1e-5) const;

  /// Exact Jacobian of the straight-segment routes, from the world joint
  /// axes. Used by the plant, which needs G of its true geometry every step.
  MuscleJacobian jacobian_geometric(const VecX& theta) const;

  /// Copy of the model with routing points displaced; used to build a plant
  /// whose true geometry differs from the nominal model.
  MusculoskeletalModel with_point_offset(int muscle, int point, const Vec3& offset) const;

private:
  KinematicTree tree_;
  std::vector<MuscleRoute> muscles_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace tendon
