#pragma once

#include "tendon/muscle.hpp"

#include <string>
#include <vector>

namespace tendon::models {

/// Bundled desk-scale models. These approximate the antagonistic structure
/// of an upper limb at tabletop size; they are not anybody's real routing.
///
///   elbow-3      1 joint, 3 muscles (brachialis, biceps, triceps)
///   shoulder-6   ball joint as 3 stacked revolutes, 6 muscles (3 pairs)
///   scapula-4    2 joints with small range, 4 muscles (2 pairs)
///   arm-raise-10 scapula + shoulder chain, 10 muscles, one biarticular
MusculoskeletalModel elbow3();
MusculoskeletalModel shoulder6();
MusculoskeletalModel scapula4();
MusculoskeletalModel arm_raise10();

/// Model by bundled name ("elbow-3", ...); throws ValidationError otherwise.
MusculoskeletalModel by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace tendon::models
