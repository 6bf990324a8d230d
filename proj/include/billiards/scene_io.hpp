#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

// Scene files are JSON documents:
//
//   {
//     "name": "single_ball",
//     "dimension": 2,
//     "bounding_ball": {"center": [0, 0], "radius": 2},
//     "bodies": [ {"type": "ball", "center": [0, 0], "radius": 0.5} ],
//     "min_separation": 2,                       (optional)
//     "strictly_convex_components": true,        (optional)
//     "perturbation": {"body": 0, "center": [0, 0],
//                      "direction": [1, 0], "width": 0.6}   (optional)
//   }
//
// Body types: ball {center, radius}; ellipsoid {center, semi_axes,
// rotation?}; smooth_union {children, blend?}; smooth_difference {base,
// cuts, blend?}; radial_bump {base, amplitude, bump {center, direction,
// width}}. Vectors carry exactly `dimension` entries; rotation carries one
// angle in 2-D and three in 3-D. Missing blends default to 0.05·R. Unknown
// keys are rejected.

// Throws SceneParseError for malformed documents and SceneValidationError
// for geometrically invalid scenes.
Scene parse_scene(std::string_view text);

// Canonical compact serialisation; parse_scene(serialize_scene(s)) == s.
std::string serialize_scene(const Scene& scene, int indent = -1);

// FNV-1a 64 of the canonical serialisation, as 16 hex digits.
std::string scene_hash(const Scene& scene);

std::vector<std::string> bundled_scene_names();
// Throws SceneParseError for unknown names.
Scene bundled_scene(std::string_view name);
// The JSON text a bundled scene is parsed from.
const char* bundled_scene_source(std::string_view name);

// A bundled scene name or a path to a scene file.
Scene load_scene(const std::string& name_or_path);

}  // namespace billiards
