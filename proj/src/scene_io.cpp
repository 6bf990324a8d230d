#include "billiards/scene_io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "billiards/errors.hpp"

namespace billiards {

using nlohmann::json;

namespace {

struct Reader {
    int dimension;
    double default_blend;

    static void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
        if (!obj.is_object()) throw SceneParseError(where + ": expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, _] : obj.items()) {
            if (!ok.count(key)) throw SceneParseError(where + ": unknown key '" + key + "'");
        }
    }

    static const json& field(const json& obj, const char* key, const std::string& where) {
        auto it = obj.find(key);
        if (it == obj.end()) throw SceneParseError(where + ": missing '" + key + "'");
        return *it;
    }

    static double number(const json& j, const std::string& where) {
        if (!j.is_number()) throw SceneParseError(where + ": expected a number");
        return j.get<double>();
    }

    Vector vector(const json& j, const std::string& where, std::size_t length) const {
        if (!j.is_array() || j.size() != length) {
            throw SceneParseError(where + ": expected " + std::to_string(length) + " numbers");
        }
        Vector v;
        for (std::size_t i = 0; i < length; ++i) v[i] = number(j[i], where);
        return v;
    }

    Vector point(const json& j, const std::string& where) const {
        return vector(j, where, static_cast<std::size_t>(dimension));
    }

    BumpSpec bump(const json& j, const std::string& where) const {
        only_keys(j, {"center", "direction", "width", "body"}, where);
        BumpSpec b;
        b.center = point(field(j, "center", where), where + ".center");
        try {
            b.direction = UnitVector::normalize(point(field(j, "direction", where), where + ".direction"));
        } catch (const std::invalid_argument&) {
            throw SceneParseError(where + ".direction: must be nonzero");
        }
        b.width = number(field(j, "width", where), where + ".width");
        return b;
    }

    ImplicitBody body(const json& j, const std::string& where) const {
        if (!j.is_object()) throw SceneParseError(where + ": expected an object");
        const json& type_j = field(j, "type", where);
        if (!type_j.is_string()) throw SceneParseError(where + ".type: expected a string");
        const std::string type = type_j.get<std::string>();
        try {
            if (type == "ball") {
                only_keys(j, {"type", "center", "radius"}, where);
                return make_ball(point(field(j, "center", where), where + ".center"),
                                 number(field(j, "radius", where), where + ".radius"));
            }
            if (type == "ellipsoid") {
                only_keys(j, {"type", "center", "semi_axes", "rotation"}, where);
                Vector angles;
                if (j.contains("rotation")) {
                    angles = vector(j["rotation"], where + ".rotation", dimension == 2 ? 1 : 3);
                }
                return make_ellipsoid(dimension, point(field(j, "center", where), where + ".center"),
                                      point(field(j, "semi_axes", where), where + ".semi_axes"), angles);
            }
            if (type == "smooth_union") {
                only_keys(j, {"type", "children", "blend"}, where);
                const json& kids = field(j, "children", where);
                if (!kids.is_array()) throw SceneParseError(where + ".children: expected a list");
                std::vector<ImplicitBody> children;
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    children.push_back(body(kids[i], where + ".children[" + std::to_string(i) + "]"));
                }
                const double blend = j.contains("blend") ? number(j["blend"], where + ".blend") : default_blend;
                return make_smooth_union(children, blend);
            }
            if (type == "smooth_difference") {
                only_keys(j, {"type", "base", "cuts", "blend"}, where);
                const json& cuts_j = field(j, "cuts", where);
                if (!cuts_j.is_array()) throw SceneParseError(where + ".cuts: expected a list");
                std::vector<ImplicitBody> cuts;
                for (std::size_t i = 0; i < cuts_j.size(); ++i) {
                    cuts.push_back(body(cuts_j[i], where + ".cuts[" + std::to_string(i) + "]"));
                }
                const double blend = j.contains("blend") ? number(j["blend"], where + ".blend") : default_blend;
                return make_smooth_difference(body(field(j, "base", where), where + ".base"), cuts, blend);
            }
            if (type == "radial_bump") {
                only_keys(j, {"type", "base", "amplitude", "bump"}, where);
                return perturb(body(field(j, "base", where), where + ".base"),
                               number(field(j, "amplitude", where), where + ".amplitude"),
                               bump(field(j, "bump", where), where + ".bump"));
            }
        } catch (const std::invalid_argument& e) {
            throw SceneValidationError(where + ": " + e.what());
        }
        throw SceneParseError(where + ": unknown body type '" + type + "'");
    }
};

json to_json(const Vector& v, int n) {
    json a = json::array();
    for (int i = 0; i < n; ++i) a.push_back(v[static_cast<std::size_t>(i)]);
    return a;
}

json bump_json(const BumpSpec& b, int n) {
    return {{"center", to_json(b.center, n)}, {"direction", to_json(b.direction.vec(), n)}, {"width", b.width}};
}

json body_json(const ImplicitBody& body, int n) {
    return std::visit(
        [&](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return {{"type", "ball"}, {"center", to_json(s.center, n)}, {"radius", s.radius}};
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return {{"type", "ellipsoid"},
                        {"center", to_json(s.center, n)},
                        {"semi_axes", to_json(s.semi_axes, n)},
                        {"rotation", to_json(s.angles, n == 2 ? 1 : 3)}};
            } else if constexpr (std::is_same_v<T, SmoothUnion>) {
                json kids = json::array();
                for (const auto& c : s.children) kids.push_back(body_json(*c, n));
                return {{"type", "smooth_union"}, {"blend", s.blend}, {"children", kids}};
            } else if constexpr (std::is_same_v<T, SmoothDifference>) {
                json cuts = json::array();
                for (const auto& c : s.cuts) cuts.push_back(body_json(*c, n));
                return {{"type", "smooth_difference"}, {"blend", s.blend}, {"base", body_json(*s.base, n)},
                        {"cuts", cuts}};
            } else {
                return {{"type", "radial_bump"},
                        {"amplitude", s.amplitude},
                        {"base", body_json(*s.base, n)},
                        {"bump", bump_json(s.bump, n)}};
            }
        },
        body.shape());
}

}  // namespace

Scene parse_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SceneParseError(std::string("scene is not valid JSON: ") + e.what());
    }
    const std::string where = "scene";
    Reader::only_keys(doc, {"name", "dimension", "bounding_ball", "bodies", "min_separation",
                            "strictly_convex_components", "perturbation"},
                      where);
    Scene scene;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw SceneParseError("scene.name: expected a string");
        scene.name = doc["name"].get<std::string>();
    }
    const json& dim = Reader::field(doc, "dimension", where);
    if (!dim.is_number_integer()) throw SceneParseError("scene.dimension: expected an integer");
    scene.dimension = dim.get<int>();
    if (scene.dimension != 2 && scene.dimension != 3) throw SceneParseError("scene.dimension: must be 2 or 3");

    const json& ball = Reader::field(doc, "bounding_ball", where);
    Reader::only_keys(ball, {"center", "radius"}, "scene.bounding_ball");
    Reader reader{scene.dimension, 0.0};
    scene.bounding.center = reader.point(Reader::field(ball, "center", "scene.bounding_ball"),
                                         "scene.bounding_ball.center");
    scene.bounding.radius = Reader::number(Reader::field(ball, "radius", "scene.bounding_ball"),
                                           "scene.bounding_ball.radius");
    reader.default_blend = 0.05 * scene.bounding.radius;

    const json& bodies = Reader::field(doc, "bodies", where);
    if (!bodies.is_array()) throw SceneParseError("scene.bodies: expected a list");
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        scene.bodies.push_back(reader.body(bodies[i], "scene.bodies[" + std::to_string(i) + "]"));
    }
    if (doc.contains("min_separation")) {
        scene.min_separation = Reader::number(doc["min_separation"], "scene.min_separation");
    }
    if (doc.contains("strictly_convex_components")) {
        if (!doc["strictly_convex_components"].is_boolean()) {
            throw SceneParseError("scene.strictly_convex_components: expected a boolean");
        }
        scene.strictly_convex_components = doc["strictly_convex_components"].get<bool>();
    }
    if (doc.contains("perturbation")) {
        const json& p = doc["perturbation"];
        PerturbationFamily fam;
        fam.bump = reader.bump(p, "scene.perturbation");
        const json& idx = Reader::field(p, "body", "scene.perturbation");
        if (!idx.is_number_unsigned() && !(idx.is_number_integer() && idx.get<long>() >= 0)) {
            throw SceneParseError("scene.perturbation.body: expected a body index");
        }
        fam.body_index = idx.get<std::size_t>();
        scene.perturbation = fam;
    }
    validate_scene(scene);
    return scene;
}

std::string serialize_scene(const Scene& scene, int indent) {
    const int n = scene.dimension;
    json doc;
    doc["name"] = scene.name;
    doc["dimension"] = n;
    doc["bounding_ball"] = {{"center", to_json(scene.bounding.center, n)}, {"radius", scene.bounding.radius}};
    doc["bodies"] = json::array();
    for (const auto& b : scene.bodies) doc["bodies"].push_back(body_json(b, n));
    if (scene.min_separation) doc["min_separation"] = *scene.min_separation;
    if (scene.strictly_convex_components) doc["strictly_convex_components"] = true;
    if (scene.perturbation) {
        json p = bump_json(scene.perturbation->bump, n);
        p["body"] = scene.perturbation->body_index;
        doc["perturbation"] = p;
    }
    return doc.dump(indent);
}

std::string scene_hash(const Scene& scene) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_scene(scene)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Scene load_scene(const std::string& name_or_path) {
    for (const auto& name : bundled_scene_names()) {
        if (name == name_or_path) return bundled_scene(name);
    }
    std::ifstream in(name_or_path);
    if (!in) throw SceneParseError("no bundled scene or readable file named '" + name_or_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

}  // namespace billiards
