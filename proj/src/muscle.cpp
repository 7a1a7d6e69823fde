#include "tendon/muscle.hpp"

#include "tendon/log.hpp"

namespace tendon {

MusculoskeletalModel::MusculoskeletalModel(KinematicTree tree,
                                           std::vector<MuscleRoute> muscles,
                                           std::vector<std::pair<int, int>> pairs)
    : tree_(std::move(tree)), muscles_(std::move(muscles)), pairs_(std::move(pairs)) {
  for (const MuscleRoute& m : muscles_) {
    if (m.points.size() < 2)
      throw ValidationError("muscle '" + m.name + "' needs at least two routing points");
    bool crosses_links = false;
    for (size_t p = 0; p < m.points.size(); ++p) {
      const MusclePoint& pt = m.points[p];
      if (pt.link < 0 || pt.link >= tree_.link_count())
        throw ValidationError("muscle '" + m.name + "': point " + std::to_string(p) +
                              " references link index " + std::to_string(pt.link));
      if (!pt.offset.allFinite())
        throw ValidationError("muscle '" + m.name + "': non-finite point offset");
      if (p == 0) continue;
      const MusclePoint& prev = m.points[p - 1];
      if (prev.link == pt.link && (prev.offset - pt.offset).norm() == 0.0)
        throw ValidationError("muscle '" + m.name + "': zero-length segment at point " +
                              std::to_string(p));
      if (prev.link != pt.link) crosses_links = true;
    }
    // Single-link routes cannot actuate anything but their length is still
    // well defined; the file loader rejects them, in-memory models only warn.
    if (!crosses_links)
      log::warn("muscle '" + m.name + "' is attached to a single link");
  }
  for (const auto& [a, b] : pairs_) {
    if (a < 0 || a >= muscle_count() || b < 0 || b >= muscle_count() || a == b)
      throw ValidationError("invalid antagonist pair (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
  }
}

int MusculoskeletalModel::find_muscle(const std::string& name) const {
  for (int i = 0; i < muscle_count(); ++i)
    if (muscles_[i].name == name) return i;
  return -1;
}

double MusculoskeletalModel::muscle_length(int muscle,
                                           const std::vector<Transform>& world) const {
  const MuscleRoute& route = muscles_.at(muscle);
  double length = 0.0;
  Vec3 prev = world[route.points[0].link] * route.points[0].offset;
  for (size_t p = 1; p < route.points.size(); ++p) {
    Vec3 cur = world[route.points[p].link] * route.points[p].offset;
    length += (cur - prev).norm();
    prev = cur;
  }
  return length;
}

VecX MusculoskeletalModel::muscle_lengths(const std::vector<Transform>& world) const {
  VecX lengths(muscle_count());
  for (int i = 0; i < muscle_count(); ++i) lengths[i] = muscle_length(i, world);
  return lengths;
}

VecX MusculoskeletalModel::muscle_lengths(const VecX& theta) const {
  return muscle_lengths(tree_.forward_kinematics(theta));
}

MuscleJacobian MusculoskeletalModel::jacobian_finite_difference(const VecX& theta,
                                                                double h) const {
  if (h <= 0.0) throw ValidationError("finite-difference step must be positive");
  MuscleJacobian jac;
  jac.theta = theta;
  jac.g.resize(muscle_count(), tree_.joint_count());
  VecX probe = theta;
  for (int j = 0; j < tree_.joint_count(); ++j) {
    probe[j] = theta[j] + h;
    VecX plus = muscle_lengths(probe);
    probe[j] = theta[j] - h;
    VecX minus = muscle_lengths(probe);
    probe[j] = theta[j];
    jac.g.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

MuscleJacobian MusculoskeletalModel::jacobian_geometric(const VecX& theta) const {
  std::vector<Transform> world = tree_.forward_kinematics(theta);

  // World axis and origin of every joint. Rotation(axis, theta) keeps the
  // axis fixed, so the child's world rotation maps it correctly.
  const int n = tree_.joint_count();
  std::vector<Vec3> axis_w(n), origin_w(n);
  for (int j = 0; j < n; ++j) {
    axis_w[j] = world[j + 1].rotation() * tree_.joint_link(j).axis;
    origin_w[j] = world[j + 1].translation();
  }

  MuscleJacobian jac;
  jac.theta = theta;
  jac.g = MatX::Zero(muscle_count(), n);
  for (int i = 0; i < muscle_count(); ++i) {
    const MuscleRoute& route = muscles_[i];
    for (size_t p = 1; p < route.points.size(); ++p) {
      const MusclePoint& a = route.points[p - 1];
      const MusclePoint& b = route.points[p];
      Vec3 pa = world[a.link] * a.offset;
      Vec3 pb = world[b.link] * b.offset;
      Vec3 diff = pb - pa;
      double len = diff.norm();
      if (len < 1e-12) continue;  // degenerate at this posture only
      Vec3 u = diff / len;
      for (int j = 0; j < n; ++j) {
        // d(point)/d(theta_j) = axis x (point - joint origin) when the point's
        // link is in joint j's subtree, zero otherwise.
        Vec3 da = tree_.is_descendant_or_self(a.link, j + 1)
                      ? axis_w[j].cross(pa - origin_w[j])
                      : Vec3::Zero();
        Vec3 db = tree_.is_descendant_or_self(b.link, j + 1)
                      ? axis_w[j].cross(pb - origin_w[j])
                      : Vec3::Zero();
        jac.g(i, j) += u.dot(db - da);
      }
    }
  }
  return jac;
}

MusculoskeletalModel MusculoskeletalModel::with_point_offset(int muscle, int point,
                                                             const Vec3& offset) const {
  if (muscle < 0 || muscle >= muscle_count())
    throw ValidationError("with_point_offset: no muscle index " + std::to_string(muscle));
  const auto& pts = muscles_[muscle].points;
  if (point < 0 || point >= static_cast<int>(pts.size()))
    throw ValidationError("with_point_offset: muscle '" + muscles_[muscle].name +
                          "' has no point index " + std::to_string(point));
  std::vector<MuscleRoute> routes = muscles_;
  routes[muscle].points[point].offset += offset;
  return MusculoskeletalModel(tree_, std::move(routes), pairs_);
}

}  // namespace tendon
