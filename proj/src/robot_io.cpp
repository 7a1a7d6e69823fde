#include "tendon/robot_io.hpp"

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <sstream>

namespace tendon {

namespace {

[[noreturn]] void fail(const std::string& source, const YAML::Node& node,
                       const std::string& message) {
  std::string where = source;
  if (node.Mark().line >= 0) where += ":" + std::to_string(node.Mark().line + 1);
  throw ValidationError(where + ": " + message);
}

double number(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) fail(source, node, std::string(what) + " must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(source, node, std::string(what) + " is not a valid number");
  }
}

Vec3 vec3(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsSequence() || node.size() != 3)
    fail(source, node, std::string(what) + " must be a list of 3 numbers");
  return Vec3(number(source, node[0], what), number(source, node[1], what),
              number(source, node[2], what));
}

Transform fixed_transform(const Vec3& xyz, const Vec3& rpy_deg) {
  Transform t = Transform::Identity();
  t.translation() = xyz;
  t.linear() = (Eigen::AngleAxisd(deg_to_rad(rpy_deg[2]), Vec3::UnitZ()) *
                Eigen::AngleAxisd(deg_to_rad(rpy_deg[1]), Vec3::UnitY()) *
                Eigen::AngleAxisd(deg_to_rad(rpy_deg[0]), Vec3::UnitX()))
                   .toRotationMatrix();
  return t;
}

MusculoskeletalModel parse_robot(const YAML::Node& root, const std::string& source) {
  if (!root.IsMap()) fail(source, root, "robot description must be a YAML map");
  const YAML::Node links_node = root["links"];
  if (!links_node || !links_node.IsSequence() || links_node.size() == 0)
    fail(source, root, "robot description needs a non-empty 'links' list");

  std::vector<Link> links;
  std::map<std::string, int> link_index;
  for (size_t i = 0; i < links_node.size(); ++i) {
    const YAML::Node ln = links_node[i];
    if (!ln.IsMap()) fail(source, ln, "each link must be a map");
    Link link;
    if (!ln["name"]) fail(source, ln, "link is missing 'name'");
    link.name = ln["name"].as<std::string>();
    if (link_index.count(link.name)) fail(source, ln, "duplicate link name '" + link.name + "'");
    if (i == 0) {
      if (ln["parent"]) fail(source, ln["parent"], "the first link is the root and takes no parent");
      link.parent = -1;
    } else {
      if (!ln["parent"]) fail(source, ln, "link '" + link.name + "' is missing 'parent'");
      const std::string parent = ln["parent"].as<std::string>();
      auto it = link_index.find(parent);
      if (it == link_index.end())
        fail(source, ln["parent"],
             "link '" + link.name + "': parent '" + parent + "' is not declared above it");
      link.parent = it->second;
      Vec3 xyz = ln["xyz"] ? vec3(source, ln["xyz"], "xyz") : Vec3::Zero();
      Vec3 rpy = ln["rpy"] ? vec3(source, ln["rpy"], "rpy") : Vec3::Zero();
      link.to_parent = fixed_transform(xyz, rpy);
      if (!ln["axis"]) fail(source, ln, "link '" + link.name + "' is missing 'axis'");
      Vec3 axis = vec3(source, ln["axis"], "axis");
      if (axis.norm() < 1e-9) fail(source, ln["axis"], "joint axis must be non-zero");
      link.axis = axis.normalized();
      const YAML::Node lim = ln["limits"];
      if (!lim || !lim.IsSequence() || lim.size() != 2)
        fail(source, ln, "link '" + link.name + "' needs 'limits: [lower_deg, upper_deg]'");
      link.lower_limit = deg_to_rad(number(source, lim[0], "limit"));
      link.upper_limit = deg_to_rad(number(source, lim[1], "limit"));
      if (link.lower_limit > link.upper_limit)
        fail(source, lim, "link '" + link.name + "': lower limit exceeds upper limit");
    }
    link_index[link.name] = static_cast<int>(links.size());
    links.push_back(link);
  }

  const YAML::Node muscles_node = root["muscles"];
  if (!muscles_node || !muscles_node.IsSequence() || muscles_node.size() == 0)
    fail(source, root, "robot description needs a non-empty 'muscles' list");
  std::vector<MuscleRoute> muscles;
  std::map<std::string, int> muscle_index;
  for (size_t i = 0; i < muscles_node.size(); ++i) {
    const YAML::Node mn = muscles_node[i];
    if (!mn.IsMap()) fail(source, mn, "each muscle must be a map");
    MuscleRoute route;
    if (!mn["name"]) fail(source, mn, "muscle is missing 'name'");
    route.name = mn["name"].as<std::string>();
    if (muscle_index.count(route.name))
      fail(source, mn, "duplicate muscle name '" + route.name + "'");
    const YAML::Node pts = mn["points"];
    if (!pts || !pts.IsSequence() || pts.size() < 2)
      fail(source, mn, "muscle '" + route.name + "' needs at least 2 'points'");
    bool crosses = false;
    for (size_t p = 0; p < pts.size(); ++p) {
      const YAML::Node pn = pts[p];
      if (!pn.IsMap() || !pn["link"] || !pn["offset"])
        fail(source, pn, "each point needs 'link' and 'offset'");
      const std::string link_name = pn["link"].as<std::string>();
      auto it = link_index.find(link_name);
      if (it == link_index.end())
        fail(source, pn["link"], "muscle '" + route.name + "': unknown link '" + link_name + "'");
      MusclePoint point{it->second, vec3(source, pn["offset"], "offset")};
      if (!route.points.empty()) {
        const MusclePoint& prev = route.points.back();
        if (prev.link == point.link && (prev.offset - point.offset).norm() == 0.0)
          fail(source, pn, "muscle '" + route.name + "': zero-length segment at point " +
                               std::to_string(p));
        if (prev.link != point.link) crosses = true;
      }
      route.points.push_back(point);
    }
    if (!crosses)
      fail(source, mn, "muscle '" + route.name +
                           "' never leaves one link and cannot actuate anything");
    muscle_index[route.name] = static_cast<int>(muscles.size());
    muscles.push_back(std::move(route));
  }

  std::vector<std::pair<int, int>> pairs;
  if (const YAML::Node pn = root["pairs"]) {
    if (!pn.IsSequence()) fail(source, pn, "'pairs' must be a list of [muscle, muscle]");
    for (const auto& pr : pn) {
      if (!pr.IsSequence() || pr.size() != 2)
        fail(source, pr, "each pair must be [muscle_name, muscle_name]");
      int a = -1, b = -1;
      for (int side = 0; side < 2; ++side) {
        const std::string name = pr[side].as<std::string>();
        auto it = muscle_index.find(name);
        if (it == muscle_index.end()) fail(source, pr[side], "unknown muscle '" + name + "'");
        (side == 0 ? a : b) = it->second;
      }
      if (a == b) fail(source, pr, "a pair must name two different muscles");
      pairs.emplace_back(a, b);
    }
  }

  try {
    return MusculoskeletalModel(KinematicTree(std::move(links)), std::move(muscles),
                                std::move(pairs));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

}  // namespace

MusculoskeletalModel load_robot_file(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ValidationError(path.string() + ": cannot open robot description");
  } catch (const YAML::ParserException& e) {
    throw ValidationError(path.string() + ":" + std::to_string(e.mark.line + 1) + ": " +
                          e.msg);
  }
  return parse_robot(root, path.string());
}

MusculoskeletalModel parse_robot_yaml(const std::string& text, const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(source_name + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return parse_robot(root, source_name);
}

void write_robot_file(const MusculoskeletalModel& model, const std::string& name,
                      const std::filesystem::path& path) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << name;
  out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < model.tree().link_count(); ++i) {
    const Link& l = model.tree().link(i);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << l.name;
    if (i > 0) {
      out << YAML::Key << "parent" << YAML::Value << model.tree().link(l.parent).name;
      Vec3 xyz = l.to_parent.translation();
      Vec3 rpy = l.to_parent.rotation().eulerAngles(2, 1, 0);  // yaw pitch roll
      out << YAML::Key << "xyz" << YAML::Value << YAML::Flow << YAML::BeginSeq << xyz[0]
          << xyz[1] << xyz[2] << YAML::EndSeq;
      out << YAML::Key << "rpy" << YAML::Value << YAML::Flow << YAML::BeginSeq
          << rad_to_deg(rpy[2]) << rad_to_deg(rpy[1]) << rad_to_deg(rpy[0]) << YAML::EndSeq;
      out << YAML::Key << "axis" << YAML::Value << YAML::Flow << YAML::BeginSeq << l.axis[0]
          << l.axis[1] << l.axis[2] << YAML::EndSeq;
      out << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginSeq
          << rad_to_deg(l.lower_limit) << rad_to_deg(l.upper_limit) << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "muscles" << YAML::Value << YAML::BeginSeq;
  for (const MuscleRoute& m : model.muscles()) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << m.name;
    out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
    for (const MusclePoint& p : m.points) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "link" << YAML::Value << model.tree().link(p.link).name;
      out << YAML::Key << "offset" << YAML::Value << YAML::Flow << YAML::BeginSeq
          << p.offset[0] << p.offset[1] << p.offset[2] << YAML::EndSeq;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (!model.antagonist_pairs().empty()) {
    out << YAML::Key << "pairs" << YAML::Value << YAML::BeginSeq;
    for (const auto& [a, b] : model.antagonist_pairs()) {
      out << YAML::Flow << YAML::BeginSeq << model.muscle(a).name << model.muscle(b).name
          << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << out.c_str() << "\n";
}

void save_polynomials(const std::vector<LengthPolynomial>& polys, const std::string& robot_name,
                      const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["robot"] = robot_name;
  doc["muscles"] = nlohmann::json::array();
  for (const LengthPolynomial& p : polys) {
    nlohmann::json entry;
    entry["muscle"] = p.muscle;
    entry["joints"] = p.joints;
    entry["degree"] = p.degree;
    entry["exponents"] = p.exponents;
    entry["coefficients"] = std::vector<double>(p.coefficients.begin(), p.coefficients.end());
    entry["domain_lower"] = std::vector<double>(p.domain_lower.begin(), p.domain_lower.end());
    entry["domain_upper"] = std::vector<double>(p.domain_upper.begin(), p.domain_upper.end());
    entry["residual_rms"] = p.residual_rms;
    doc["muscles"].push_back(std::move(entry));
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << doc.dump(2) << "\n";
}

std::vector<LengthPolynomial> load_polynomials(const std::filesystem::path& path,
                                               std::string* robot_name) {
  std::ifstream file(path);
  if (!file) throw ValidationError(path.string() + ": cannot open polynomial cache");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    if (robot_name) *robot_name = doc.at("robot").get<std::string>();
    std::vector<LengthPolynomial> polys;
    for (const auto& entry : doc.at("muscles")) {
      LengthPolynomial p;
      p.muscle = entry.at("muscle").get<int>();
      p.joints = entry.at("joints").get<std::vector<int>>();
      p.degree = entry.at("degree").get<int>();
      p.exponents = entry.at("exponents").get<std::vector<std::vector<int>>>();
      auto coeffs = entry.at("coefficients").get<std::vector<double>>();
      p.coefficients = Eigen::Map<VecX>(coeffs.data(), static_cast<int>(coeffs.size()));
      auto lo = entry.at("domain_lower").get<std::vector<double>>();
      auto hi = entry.at("domain_upper").get<std::vector<double>>();
      p.domain_lower = Eigen::Map<VecX>(lo.data(), static_cast<int>(lo.size()));
      p.domain_upper = Eigen::Map<VecX>(hi.data(), static_cast<int>(hi.size()));
      p.residual_rms = entry.at("residual_rms").get<double>();
      polys.push_back(std::move(p));
    }
    return polys;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": malformed polynomial cache: " + e.what());
  }
}

}  // namespace tendon
