#include "tendon/kinematics.hpp"

#include <cmath>
#include <set>

namespace tendon {

KinematicTree::KinematicTree(std::vector<Link> links) : links_(std::move(links)) {
  if (links_.empty()) throw ValidationError("kinematic tree needs at least a root link");
  if (links_[0].parent != -1)
    throw ValidationError("link 0 must be the root (parent -1), got parent " +
                          std::to_string(links_[0].parent));
  std::set<std::string> names;
  for (int i = 0; i < link_count(); ++i) {
    const Link& l = links_[i];
    if (!names.insert(l.name).second)
      throw ValidationError("duplicate link name '" + l.name + "'");
    if (i == 0) continue;
    if (l.parent < 0 || l.parent >= i)
      throw ValidationError("link '" + l.name + "': parent index " +
                            std::to_string(l.parent) + " must be < own index " +
                            std::to_string(i));
    if (std::abs(l.axis.norm() - 1.0) > 1e-9)
      throw ValidationError("link '" + l.name + "': joint axis must be unit length");
    if (!(l.lower_limit <= l.upper_limit))
      throw ValidationError("link '" + l.name + "': lower joint limit exceeds upper");
    if (!l.to_parent.matrix().allFinite())
      throw ValidationError("link '" + l.name + "': non-finite fixed transform");
  }
}

int KinematicTree::find_link(const std::string& name) const {
  for (int i = 0; i < link_count(); ++i)
    if (links_[i].name == name) return i;
  return -1;
}

VecX KinematicTree::lower_limits() const {
  VecX lo(joint_count());
  for (int j = 0; j < joint_count(); ++j) lo[j] = joint_link(j).lower_limit;
  return lo;
}

VecX KinematicTree::upper_limits() const {
  VecX hi(joint_count());
  for (int j = 0; j < joint_count(); ++j) hi[j] = joint_link(j).upper_limit;
  return hi;
}

VecX KinematicTree::clamp_to_limits(const VecX& theta) const {
  VecX out = theta;
  for (int j = 0; j < joint_count(); ++j) {
    out[j] = std::min(std::max(out[j], joint_link(j).lower_limit), joint_link(j).upper_limit);
  }
  return out;
}

bool KinematicTree::within_limits(const VecX& theta, double tol) const {
  for (int j = 0; j < joint_count(); ++j) {
    if (theta[j] < joint_link(j).lower_limit - tol) return false;
    if (theta[j] > joint_link(j).upper_limit + tol) return false;
  }
  return true;
}

bool KinematicTree::is_descendant_or_self(int link, int ancestor) const {
  int cur = link;
  while (cur != -1) {
    if (cur == ancestor) return true;
    cur = links_[cur].parent;
  }
  return false;
}

std::vector<Transform> KinematicTree::forward_kinematics(const VecX& theta) const {
  if (theta.size() != joint_count())
    throw ValidationError("forward_kinematics: got " + std::to_string(theta.size()) +
                          " angles for " + std::to_string(joint_count()) + " joints");
  if (!theta.allFinite()) throw ValidationError("forward_kinematics: non-finite joint angles");

  std::vector<Transform> world(links_.size());
  world[0] = Transform::Identity();
  for (int i = 1; i < link_count(); ++i) {
    const Link& l = links_[i];
    world[i] = world[l.parent] * l.to_parent * Eigen::AngleAxisd(theta[i - 1], l.axis);
  }
  return world;
}

}  // namespace tendon
