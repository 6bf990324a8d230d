#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/scene_io.hpp"

using namespace billiards;

namespace {

Vector central_difference(const ImplicitBody& body, const Vector& q, int dim) {
    const double h = 1e-6;
    Vector g;
    for (int i = 0; i < dim; ++i) {
        Vector a = q, b = q;
        a[static_cast<std::size_t>(i)] += h;
        b[static_cast<std::size_t>(i)] -= h;
        g[static_cast<std::size_t>(i)] = (body.value(a) - body.value(b)) / (2 * h);
    }
    return g;
}

std::vector<std::pair<const char*, ImplicitBody>> zoo2() {
    BumpSpec bump{{0, 0}, UnitVector::normalize({0, 1}), 0.7};
    const auto shell = make_smooth_difference(make_ellipsoid(2, {0, 0}, {1.2, 0.8}, Vector{0.3, 0}),
                                              {make_ellipsoid(2, {0, 0}, {1.0, 0.6}, Vector{0.3, 0})}, 0.02);
    return {
        {"ball", make_ball({0.1, -0.2}, 0.5)},
        {"ellipse", make_ellipsoid(2, {0.2, 0.1}, {1.0, 0.4}, Vector{0.7, 0})},
        {"union", make_smooth_union({make_ball({-0.4, 0}, 0.3), make_ball({0.4, 0}, 0.35)}, 0.1)},
        {"difference", shell},
        {"bump", perturb(make_ball({0, 0}, 0.5), 0.1, bump)},
    };
}

}  // namespace

TEST_CASE("ball field is the signed distance") {
    const auto b = make_ball({0, 0}, 1.0);
    CHECK(b.value({2, 0}) == doctest::Approx(1.0));
    CHECK(b.value({0, 0}) == doctest::Approx(-1.0));
    CHECK(b.value({0, 1}) == doctest::Approx(0.0));
    CHECK(inward_normal(b, {0, 1}).vec()[1] == doctest::Approx(1.0));
}

TEST_CASE("ellipse field vanishes on the ellipse and matches the ball in the round case") {
    const auto e = make_ellipsoid(2, {0, 0}, {2, 1});
    CHECK(e.value({2, 0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.value({0, 1}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.value({0, 2}) == doctest::Approx(1.0));
    CHECK(e.value({0, 0}) < 0.0);

    const auto round = make_ellipsoid(3, {1, 2, 3}, {0.7, 0.7, 0.7}, {0.3, 0.2, 0.1});
    const auto ball = make_ball({1, 2, 3}, 0.7);
    for (const Vector q : {Vector{0, 0, 0}, Vector{1, 2, 4}, Vector{1.5, 2.1, 2.9}}) {
        CHECK(round.value(q) == doctest::Approx(ball.value(q)).epsilon(1e-12));
    }
}

TEST_CASE("rotated ellipse puts its major axis along the yaw direction") {
    const auto e = make_ellipsoid(2, {0, 0}, {2, 1}, Vector{std::numbers::pi / 2, 0});
    CHECK(std::abs(e.value({0, 2})) < 1e-12);
    CHECK(std::abs(e.value({1, 0})) < 1e-12);
}

TEST_CASE("rotation matrices are orthonormal") {
    const Mat3 r = rotation_from_angles(0.4, -1.1, 2.3);
    for (const Vector v : {Vector{1, 0, 0}, Vector{0, 1, 0}, Vector{0.3, -0.2, 0.9}}) {
        CHECK(norm(r * v) == doctest::Approx(norm(v)).epsilon(1e-14));
        const Vector back = r.transpose_times(r * v);
        CHECK(distance(back, v) < 1e-14);
    }
}

TEST_CASE("unit vectors reject zero input") {
    CHECK_THROWS_AS(UnitVector::normalize({0, 0, 0}), std::invalid_argument);
    CHECK(norm(UnitVector::normalize({3, 4, 0}).vec()) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("analytic gradients agree with finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const auto& [name, body] : zoo2()) {
        CAPTURE(name);
        int checked = 0;
        double worst = 0.0;
        while (checked < 2000) {
            const Vector q{u(rng), u(rng)};
            const FieldSample s = body.sample(q);
            if (norm(s.gradient) < 1e-3) continue;
            CHECK(s.value == doctest::Approx(body.value(q)).epsilon(1e-14));
            const Vector fd = central_difference(body, q, 2);
            worst = std::max(worst, norm(fd - s.gradient) / norm(s.gradient));
            ++checked;
        }
        CHECK(worst <= 1e-5);
    }
    // 3-D ellipsoid with all three angles
    const auto e3 = make_ellipsoid(3, {0.1, 0, -0.1}, {1.0, 0.6, 0.4}, {0.3, 0.5, -0.2});
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const Vector q{u(rng), u(rng), u(rng)};
        const FieldSample s = e3.sample(q);
        if (norm(s.gradient) < 1e-3) continue;
        worst = std::max(worst, norm(central_difference(e3, q, 3) - s.gradient) / norm(s.gradient));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("smooth union lies between the min field and its blend offset") {
    const auto a = make_ball({-0.4, 0}, 0.3), b = make_ball({0.4, 0}, 0.35);
    const double kappa = 0.1;
    const auto u = make_smooth_union({a, b}, kappa);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const Vector q{d(rng), d(rng)};
        const double m = std::min(a.value(q), b.value(q));
        CHECK(u.value(q) <= m + 1e-12);
        CHECK(u.value(q) >= m - kappa * std::log(2.0) - 1e-12);
    }
}

TEST_CASE("bounding balls enclose the obstacle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-3, 3);
    for (const auto& [name, body] : zoo2()) {
        CAPTURE(name);
        const BoundingBall bb = body.bounds();
        for (int i = 0; i < 20000; ++i) {
            const Vector q{d(rng), d(rng)};
            if (body.value(q) <= 0.0) CHECK(distance(q, bb.center) <= bb.radius);
        }
    }
}

TEST_CASE("zero-amplitude perturbation reproduces the base field bit for bit") {
    const BumpSpec bump{{0, 0}, UnitVector::normalize({1, 0}), 0.6};
    const auto base = make_ellipsoid(2, {0, 0}, {1.2, 0.5}, Vector{0.2, 0});
    const auto flat = perturb(base, 0.0, bump);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const Vector q{d(rng), d(rng)};
        CHECK(flat.value(q) == base.value(q));
        CHECK(flat.sample(q).gradient == base.sample(q).gradient);
    }
}

TEST_CASE("perturbation pushes the boundary outward inside the bump only") {
    const BumpSpec bump{{0, 0}, UnitVector::normalize({1, 0}), 0.6};
    const auto base = make_ball({0, 0}, 0.5);
    const auto bumped = perturb(base, 0.1, bump);
    CHECK(bumped.value({0.5, 0}) == doctest::Approx(-0.1));  // bump peak is 1
    CHECK(bumped.value({-0.5, 0}) == 0.0);
    CHECK(bumped.value({0, 0.5}) == 0.0);  // 90° is outside the 0.6 rad support
}

TEST_CASE("closed-form volumes") {
    CHECK(*closed_form_volume(make_ball({0, 0}, 0.5), 2) == doctest::Approx(std::numbers::pi / 4));
    CHECK(*closed_form_volume(make_ball({0, 0, 0}, 0.5), 3) == doctest::Approx(4.0 / 3.0 * std::numbers::pi / 8));
    CHECK(*closed_form_volume(make_ellipsoid(2, {0, 0}, {2, 1}), 2) == doctest::Approx(2 * std::numbers::pi));
    CHECK(!closed_form_volume(make_smooth_union({make_ball({0, 0}, 1)}, 0.1), 2));
    CHECK(unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
    CHECK(unit_sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
}

TEST_CASE("scene validation") {
    Scene s;
    s.dimension = 2;
    s.bounding = {{0, 0}, 2.0};
    s.bodies = {make_ball({0, 0}, 0.5)};
    CHECK_NOTHROW(validate_scene(s));

    SUBCASE("obstacle poking out of the ball") {
        s.bodies = {make_ball({1.8, 0}, 0.5)};
        CHECK_THROWS_AS(validate_scene(s), SceneValidationError);
    }
    SUBCASE("declared separation violated") {
        s.bodies = {make_ball({-0.6, 0}, 0.5), make_ball({0.6, 0}, 0.5)};
        s.min_separation = 0.5;
        CHECK_THROWS_AS(validate_scene(s), SceneValidationError);
        s.min_separation = 0.15;
        CHECK_NOTHROW(validate_scene(s));
    }
    SUBCASE("dimension mismatch") {
        s.bodies = {make_ball({0, 0, 0.5}, 0.1)};
        CHECK_THROWS_AS(validate_scene(s), SceneValidationError);
    }
    SUBCASE("perturbation too large") {
        s.perturbation = PerturbationFamily{0, {{0, 0}, UnitVector::normalize({1, 0}), 0.6}};
        CHECK_NOTHROW(perturb_scene(s, 0.5));
        CHECK_THROWS_AS(perturb_scene(s, 2.0), PerturbationTooLarge);
    }
}

TEST_CASE("bundled scenes satisfy their declared separation") {
    const Scene s = bundled_scene("two_disks");
    REQUIRE(s.min_separation);
    // pairwise gap 2 and gap to the sphere 5 − 3 = 2
    CHECK(*s.min_separation <= 2.0);
    CHECK_NOTHROW(validate_scene(s));
}

TEST_CASE("surface samples lie on the boundary") {
    for (const auto& [name, body] : zoo2()) {
        CAPTURE(name);
        const auto pts = sample_surface(body, 2, 256);
        CHECK(pts.size() > 200);
        for (const auto& p : pts) CHECK(std::abs(body.value(p)) < 1e-9);
    }
}

TEST_CASE("normal examples") {
    CHECK(inward_normal(make_ball({0, 0}, 1.0), {1, 0}).vec() == Vector{1, 0});
    const auto n = inward_normal(make_ellipsoid(2, {0, 0}, {2, 1}), {2, 0});
    CHECK(distance(n.vec(), {1, 0}) < 1e-12);
    const auto u = make_smooth_union({make_ball({-2, 0}, 1.0), make_ball({2, 0}, 1.0)}, 0.1);
    CHECK(distance(inward_normal(u, {3, 0}).vec(), {1, 0}) < 1e-6);
}

TEST_CASE("bump peak moves the unit circle to radius 1 + ε") {
    const BumpSpec bump{{0, 0}, UnitVector::normalize({1, 0}), 0.5};
    const auto bumped = perturb(make_ball({0, 0}, 1.0), 0.1, bump);
    CHECK(std::abs(bumped.value({1.1, 0})) < 1e-9);
    // sup-norm distance to the base field is at most ε
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-2, 2);
    const auto base = make_ball({0, 0}, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const Vector q{d(rng), d(rng)};
        CHECK(std::abs(bumped.value(q) - base.value(q)) <= 0.1 + 1e-15);
    }
}

TEST_CASE("perturbing by the bounding radius leaves the ball") {
    CHECK_THROWS_AS(perturb_scene(bundled_scene("single_ball"), 2.0), PerturbationTooLarge);
}
