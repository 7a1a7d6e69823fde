#pragma once

#include "tendon/types.hpp"

#include <string>
#include <vector>

namespace tendon {

/// One rigid link. Link 0 is the root; every other link hangs off its parent
/// through a single revolute joint. `to_parent` places the joint frame in the
/// parent frame, and the joint rotates the link about `axis` expressed in
/// that joint frame:
///
///   world(child) = world(parent) * to_parent * Rotation(axis, theta)
///
/// Joint j drives link j+1, so an n-joint tree has n+1 links.
struct Link {
  std::string name;
  int parent = -1;                     // -1 only for the root
  Transform to_parent = Transform::Identity();
  Vec3 axis = Vec3::UnitZ();           // unit, in the joint frame
  double lower_limit = 0.0;            // [rad]
  double upper_limit = 0.0;            // [rad]
};

class KinematicTree {
public:
  KinematicTree() = default;

  /// Validates the tree: parent indices strictly below the child's own index
  /// (rooted at link 0), unit joint axes, ordered limits, unique names.
  explicit KinematicTree(std::vector<Link> links);

  int link_count() const { return static_cast<int>(links_.size()); }
  int joint_count() const { return link_count() - 1; }
  const Link& link(int i) const { return links_.at(i); }
  const std::vector<Link>& links() const { return links_; }

  /// Index of the named link, or -1.
  int find_link(const std::string& name) const;

  /// Joint j is the joint of link j+1.
  const Link& joint_link(int joint) const { return links_.at(joint + 1); }

  VecX lower_limits() const;
  VecX upper_limits() const;
  VecX clamp_to_limits(const VecX& theta) const;
  bool within_limits(const VecX& theta, double tol = 0.0) const;

  /// True if `link` is `ancestor` or hangs somewhere below it.
  bool is_descendant_or_self(int link, int ancestor) const;

  /// World transform of every link. theta must have joint_count() finite
  /// entries; the root transform is the identity.
  std::vector<Transform> forward_kinematics(const VecX& theta) const;

private:
  std::vector<Link> links_;
};

}  // namespace tendon
