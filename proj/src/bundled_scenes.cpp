#include <map>
#include <string>

#include "billiards/errors.hpp"
#include "billiards/scene_io.hpp"

namespace billiards {

namespace {

// Kept in sync with scenes/*.json (a unit test compares them).
const std::map<std::string, const char*, std::less<>>& catalogue() {
    static const std::map<std::string, const char*, std::less<>> scenes = {
        {"disk_empty", R"({
  "name": "disk_empty",
  "dimension": 2,
  "bounding_ball": {"center": [0, 0], "radius": 1},
  "bodies": []
})"},
        {"ball_empty_3d", R"({
  "name": "ball_empty_3d",
  "dimension": 3,
  "bounding_ball": {"center": [0, 0, 0], "radius": 1},
  "bodies": []
})"},
        {"single_ball", R"({
  "name": "single_ball",
  "dimension": 2,
  "bounding_ball": {"center": [0, 0], "radius": 2},
  "bodies": [{"type": "ball", "center": [0, 0], "radius": 0.5}],
  "strictly_convex_components": true,
  "perturbation": {"body": 0, "center": [0, 0], "direction": [1, 0], "width": 0.6}
})"},
        {"single_ball_3d", R"({
  "name": "single_ball_3d",
  "dimension": 3,
  "bounding_ball": {"center": [0, 0, 0], "radius": 2},
  "bodies": [{"type": "ball", "center": [0, 0, 0], "radius": 0.5}],
  "strictly_convex_components": true
})"},
        {"two_disks", R"({
  "name": "two_disks",
  "dimension": 2,
  "bounding_ball": {"center": [0, 0], "radius": 5},
  "bodies": [
    {"type": "ball", "center": [-2, 0], "radius": 1},
    {"type": "ball", "center": [2, 0], "radius": 1}
  ],
  "min_separation": 2,
  "strictly_convex_components": true
})"},
        {"five_balls", R"({
  "name": "five_balls",
  "dimension": 2,
  "bounding_ball": {"center": [0, 0], "radius": 2},
  "bodies": [
    {"type": "ball", "center": [0, 0], "radius": 0.3},
    {"type": "ball", "center": [1.0, 0.2], "radius": 0.3},
    {"type": "ball", "center": [-0.9, 0.4], "radius": 0.3},
    {"type": "ball", "center": [0.3, -1.0], "radius": 0.3},
    {"type": "ball", "center": [-0.5, -0.9], "radius": 0.3}
  ],
  "strictly_convex_components": true
})"},
        {"livshits_cavity", R"({
  "name": "livshits_cavity",
  "dimension": 2,
  "bounding_ball": {"center": [0, 0], "radius": 2},
  "bodies": [
    {
      "type": "smooth_difference",
      "blend": 0.01,
      "base": {"type": "ellipsoid", "center": [0, 0], "semi_axes": [1.2, 0.8], "rotation": [0]},
      "cuts": [
        {"type": "ellipsoid", "center": [0, 0], "semi_axes": [1.0, 0.6], "rotation": [0]},
        {"type": "ball", "center": [1.15, 0], "radius": 0.35}
      ]
    }
  ],
  "perturbation": {"body": 0, "center": [0, 0], "direction": [0, 1], "width": 1.4}
})"},
    };
    return scenes;
}

}  // namespace

std::vector<std::string> bundled_scene_names() {
    std::vector<std::string> names;
    for (const auto& [name, _] : catalogue()) names.push_back(name);
    return names;
}

Scene bundled_scene(std::string_view name) {
    const auto& scenes = catalogue();
    auto it = scenes.find(name);
    if (it == scenes.end()) throw SceneParseError("unknown bundled scene '" + std::string(name) + "'");
    return parse_scene(it->second);
}

const char* bundled_scene_source(std::string_view name) {
    const auto& scenes = catalogue();
    auto it = scenes.find(name);
    if (it == scenes.end()) throw SceneParseError("unknown bundled scene '" + std::string(name) + "'");
    return it->second;
}

}  // namespace billiards
