#pragma once

#include "tendon/muscle.hpp"
#include "tendon/polynomial.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tendon {

/// Robot description files are YAML; angles in degrees, offsets in meters.
/// See README for the schema. Validation failures raise ValidationError
/// with file and line.
MusculoskeletalModel load_robot_file(const std::filesystem::path& path);

/// Parse from a string (source_name only labels error messages).
MusculoskeletalModel parse_robot_yaml(const std::string& text, const std::string& source_name);

void write_robot_file(const MusculoskeletalModel& model, const std::string& name,
                      const std::filesystem::path& path);

/// Polynomial cache: JSON with coefficients at full precision.
void save_polynomials(const std::vector<LengthPolynomial>& polys, const std::string& robot_name,
                      const std::filesystem::path& path);
std::vector<LengthPolynomial> load_polynomials(const std::filesystem::path& path,
                                               std::string* robot_name = nullptr);

}  // namespace tendon
