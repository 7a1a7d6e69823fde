#include "tendon/models.hpp"

#include "tendon/types.hpp"

namespace tendon::models {

namespace {

Transform translation(double x, double y, double z) {
  Transform t = Transform::Identity();
  t.translation() = Vec3(x, y, z);
  return t;
}

Link root(const std::string& name) {
  Link l;
  l.name = name;
  return l;
}

Link revolute(const std::string& name, int parent, const Transform& to_parent, const Vec3& axis,
              double lower_deg, double upper_deg) {
  Link l;
  l.name = name;
  l.parent = parent;
  l.to_parent = to_parent;
  l.axis = axis.normalized();
  l.lower_limit = deg_to_rad(lower_deg);
  l.upper_limit = deg_to_rad(upper_deg);
  return l;
}

MuscleRoute route(const std::string& name, std::vector<MusclePoint> points) {
  return MuscleRoute{name, std::move(points)};
}

}  // namespace

// Upper arm fixed above the elbow (+z up); the forearm hangs along -z at
// theta = 0 and flexes toward +x for negative theta, matching the
// 0 / -30 / -60 / -90 deg waypoint convention.
MusculoskeletalModel elbow3() {
  std::vector<Link> links;
  links.push_back(root("upperarm"));
  links.push_back(revolute("forearm", 0, Transform::Identity(), Vec3::UnitY(), -120.0, 15.0));

  std::vector<MuscleRoute> muscles;
  // Flexors wrap a guide point high on the front of the joint, the extensor
  // one behind and below; the guides sit outside the azimuth range the
  // insertions sweep, so no moment arm collapses inside the limits and the
  // length curves stay polynomial-friendly.
  muscles.push_back(route("brachialis", {{0, {0.010, 0.0, 0.12}},
                                         {0, {0.025, 0.0, 0.033}},
                                         {1, {0.012, 0.0, -0.09}}}));
  muscles.push_back(route("biceps", {{0, {0.008, 0.0, 0.17}},
                                     {0, {0.030, 0.0, 0.040}},
                                     {1, {0.013, 0.0, -0.115}}}));
  muscles.push_back(route("triceps", {{0, {-0.010, 0.0, 0.14}},
                                      {0, {-0.033, 0.0, -0.023}},
                                      {1, {-0.020, 0.0, -0.07}}}));

  return MusculoskeletalModel(KinematicTree(std::move(links)), std::move(muscles),
                              {{0, 2}, {1, 2}});
}

// Ball joint modeled as three stacked orthogonal revolutes sharing one
// center; the upper arm hangs along -z at zero. Abduction (+x axis) swings
// the arm toward +y.
MusculoskeletalModel shoulder6() {
  std::vector<Link> links;
  links.push_back(root("torso"));
  links.push_back(revolute("sh_abduct", 0, Transform::Identity(), Vec3::UnitX(), -15.0, 80.0));
  links.push_back(revolute("sh_flex", 1, Transform::Identity(), Vec3::UnitY(), -45.0, 45.0));
  links.push_back(revolute("upperarm", 2, Transform::Identity(), Vec3::UnitZ(), -45.0, 45.0));

  std::vector<MuscleRoute> muscles;
  muscles.push_back(route("abductor", {{0, {0.0, 0.10, 0.10}},
                                       {3, {0.0, 0.030, -0.09}}}));
  muscles.push_back(route("adductor", {{0, {0.0, -0.10, 0.10}},
                                       {3, {0.0, -0.030, -0.09}}}));
  muscles.push_back(route("flexor", {{0, {0.10, 0.0, 0.10}},
                                     {0, {0.045, 0.0, 0.016}},
                                     {3, {0.030, 0.0, -0.09}}}));
  muscles.push_back(route("extensor", {{0, {-0.10, 0.0, 0.10}},
                                       {0, {-0.045, 0.0, 0.016}},
                                       {3, {-0.030, 0.0, -0.09}}}));
  // The rotator pair crosses azimuthally to gain moment about the long axis.
  muscles.push_back(route("rotator_int", {{0, {0.09, -0.04, 0.03}},
                                          {3, {-0.010, 0.040, -0.055}}}));
  muscles.push_back(route("rotator_ext", {{0, {0.09, 0.04, 0.03}},
                                          {3, {-0.010, -0.040, -0.055}}}));

  return MusculoskeletalModel(KinematicTree(std::move(links)), std::move(muscles),
                              {{0, 1}, {2, 3}, {4, 5}});
}

// Two small-range joints; the scapula plate sits above the joint center and
// the four muscles pull its rim, giving each pair a solid lever on one axis.
MusculoskeletalModel scapula4() {
  std::vector<Link> links;
  links.push_back(root("torso"));
  links.push_back(revolute("sc_elev", 0, Transform::Identity(), Vec3::UnitX(), -22.0, 22.0));
  links.push_back(revolute("scapula", 1, Transform::Identity(), Vec3::UnitY(), -22.0, 22.0));

  std::vector<MuscleRoute> muscles;
  muscles.push_back(route("elevator", {{0, {0.0, 0.07, 0.10}},
                                       {2, {0.0, 0.055, 0.01}}}));
  muscles.push_back(route("depressor", {{0, {0.0, -0.07, 0.10}},
                                        {2, {0.0, -0.055, 0.01}}}));
  muscles.push_back(route("rot_up", {{0, {-0.07, 0.0, 0.10}},
                                     {2, {-0.055, 0.0, 0.01}}}));
  muscles.push_back(route("rot_down", {{0, {0.07, 0.0, 0.10}},
                                       {2, {0.055, 0.0, 0.01}}}));

  return MusculoskeletalModel(KinematicTree(std::move(links)), std::move(muscles),
                              {{0, 1}, {2, 3}});
}

// Scapula pair of joints carrying a 3-revolute shoulder mounted at the
// scapula rim; the deltoid analog starts on the torso and is biarticular
// across both joint groups.
MusculoskeletalModel arm_raise10() {
  std::vector<Link> links;
  links.push_back(root("torso"));
  links.push_back(revolute("sc_elev", 0, translation(0.0, 0.0, 0.05), Vec3::UnitX(), -18.0, 18.0));
  links.push_back(revolute("scapula", 1, Transform::Identity(), Vec3::UnitY(), -12.0, 45.0));
  links.push_back(revolute("sh_abduct", 2, translation(0.0, 0.06, -0.02), Vec3::UnitX(), -15.0, 95.0));
  links.push_back(revolute("sh_flex", 3, Transform::Identity(), Vec3::UnitY(), -45.0, 45.0));
  links.push_back(revolute("upperarm", 4, Transform::Identity(), Vec3::UnitZ(), -40.0, 40.0));

  std::vector<MuscleRoute> muscles;
  // Scapula group (torso -> scapula plate), as in scapula-4.
  muscles.push_back(route("sc_elevator", {{0, {0.0, 0.07, 0.15}},
                                          {2, {0.0, 0.055, 0.01}}}));
  muscles.push_back(route("sc_depressor", {{0, {0.0, -0.07, 0.15}},
                                           {2, {0.0, -0.055, 0.01}}}));
  muscles.push_back(route("sc_rot_up", {{0, {-0.07, 0.0, 0.15}},
                                        {2, {-0.055, 0.0, 0.01}}}));
  muscles.push_back(route("sc_rot_down", {{0, {0.07, 0.0, 0.15}},
                                          {2, {0.055, 0.0, 0.01}}}));
  // Shoulder group (scapula -> upperarm) mirrors shoulder-6 around the
  // shoulder center at (0, 0.06, -0.02) in the scapula frame. The deltoid
  // starts on the torso and pulls the abduction yoke: biarticular across the
  // scapula joints and the shoulder abduction axis.
  muscles.push_back(route("deltoid", {{0, {0.0, 0.12, 0.18}},
                                      {2, {0.0, 0.110, 0.021}},
                                      {3, {0.0, 0.030, -0.09}}}));
  muscles.push_back(route("pect", {{2, {0.0, -0.04, 0.08}},
                                   {2, {0.0, 0.010, 0.021}},
                                   {5, {0.0, -0.030, -0.09}}}));
  muscles.push_back(route("sh_flexor", {{2, {0.10, 0.06, 0.08}},
                                        {2, {0.055, 0.06, 0.0}},
                                        {5, {0.030, 0.0, -0.09}}}));
  muscles.push_back(route("sh_extensor", {{2, {-0.10, 0.06, 0.08}},
                                          {2, {-0.055, 0.06, 0.0}},
                                          {5, {-0.030, 0.0, -0.09}}}));
  muscles.push_back(route("sh_rot_int", {{2, {0.09, 0.02, 0.01}},
                                         {5, {-0.010, 0.040, -0.055}}}));
  muscles.push_back(route("sh_rot_ext", {{2, {0.09, 0.10, 0.01}},
                                         {5, {-0.010, -0.040, -0.055}}}));

  return MusculoskeletalModel(KinematicTree(std::move(links)), std::move(muscles),
                              {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}});
}

MusculoskeletalModel by_name(const std::string& name) {
  if (name == "elbow-3") return elbow3();
  if (name == "shoulder-6") return shoulder6();
  if (name == "scapula-4") return scapula4();
  if (name == "arm-raise-10") return arm_raise10();
  throw ValidationError("unknown bundled model '" + name +
                        "' (available: elbow-3, shoulder-6, scapula-4, arm-raise-10)");
}

std::vector<std::string> names() {
  return {"elbow-3", "shoulder-6", "scapula-4", "arm-raise-10"};
}

}  // namespace tendon::models
