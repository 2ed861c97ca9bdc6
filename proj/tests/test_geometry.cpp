#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "ovseg/errors.hpp"
#include "ovseg/geometry.hpp"

using namespace ovseg;
using namespace testutil;

TEST_CASE("signed_area unit square") {
    std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(signed_area(sq) == doctest::Approx(1.0));
    std::reverse(sq.begin(), sq.end());
    CHECK(signed_area(sq) == doctest::Approx(-1.0));
}

TEST_CASE("signed_area rejects degenerate input") {
    CHECK_THROWS_AS(signed_area({{0, 0}, {1, 1}}), DegeneratePolygon);
}

TEST_CASE("signed_area matches Monte-Carlo raster area on a random 10-gon") {
    Rng rng(77);
    auto poly = random_star_polygon(rng, 10, 40.0, 120.0);
    double mc = mc_polygon_area(poly, 1234);
    double sa = std::abs(signed_area(poly));
    CHECK(std::abs(sa - mc) / mc < 0.01);
}

TEST_CASE("signed_area negates under reversal (random polygons)") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        auto poly = random_star_polygon(rng, 4 + trial % 9, 10.0, 90.0);
        auto rev = poly;
        std::reverse(rev.begin(), rev.end());
        CHECK(signed_area(rev) == doctest::Approx(-signed_area(poly)).epsilon(1e-12));
    }
}

TEST_CASE("convex_hull of a triangle is the triangle") {
    std::vector<Point2> tri{{0, 0}, {4, 0}, {1, 3}};
    auto hull = convex_hull(tri);
    CHECK(hull.size() == 3);
    CHECK(signed_area(hull) == doctest::Approx(std::abs(signed_area(tri))));
}

TEST_CASE("convex_hull drops interior points") {
    std::vector<Point2> pts{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}};
    auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    for (const auto& p : hull) CHECK((p.x == 0 || p.x == 2));
}

TEST_CASE("convex_hull rejects collinear input") {
    CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateInput);
}

TEST_CASE("convex_hull equals brute-force hull on random points") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point2> pts;
        for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
        auto hull = convex_hull(pts);
        auto brute = brute_force_hull(pts);
        REQUIRE(hull.size() == brute.size());
        // same vertex set (hulls may start at different vertices)
        for (const auto& h : hull) {
            bool found = false;
            for (const auto& b : brute)
                if (distance(h, b) < 1e-9) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("convex_hull is idempotent") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point2> pts;
        for (int i = 0; i < 30; ++i) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 50)});
        auto h1 = convex_hull(pts);
        auto h2 = convex_hull(h1);
        REQUIRE(h1.size() == h2.size());
        CHECK(std::abs(signed_area(h1) - signed_area(h2)) < 1e-9);
    }
}

TEST_CASE("hull area dominates polygon area for simple polygons") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto poly = random_star_polygon(rng, 5 + trial % 10, 20.0, 80.0);
        CHECK(signed_area(convex_hull(poly)) >= std::abs(signed_area(poly)) - 1e-9);
    }
}

TEST_CASE("rasterize_polygon fills an axis-aligned square exactly") {
    std::vector<Point2> sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    auto mask = rasterize_polygon(sq, 20, 20);
    CHECK(std::llabs(static_cast<long long>(mask.count()) - 100) <= 10);
}

TEST_CASE("rasterize_polygon clips polygons outside the canvas") {
    std::vector<Point2> sq{{100, 100}, {110, 100}, {110, 110}, {100, 110}};
    auto mask = rasterize_polygon(sq, 20, 20);
    CHECK(mask.count() == 0);
}

TEST_CASE("rasterize_polygon disc area within 2 percent") {
    auto disc = circle_points({40, 40}, 30.0, 720);
    auto mask = rasterize_polygon(disc, 80, 80);
    double expected = M_PI * 30.0 * 30.0;
    CHECK(std::abs(static_cast<double>(mask.count()) - expected) / expected < 0.02);
}

TEST_CASE("Contour::from_points normalizes orientation") {
    std::vector<Point2> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    auto c = Contour::from_points(cw);
    CHECK(c.area() > 0.0);
    CHECK_THROWS_AS(Contour::from_points({{0, 0}, {1, 0}}), DegeneratePolygon);
    CHECK_THROWS_AS(Contour::from_points({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), DegeneratePolygon);
}

TEST_CASE("ellipse distance matches dense sampling oracle") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        Ellipse e;
        e.center = {rng.uniform(-20, 20), rng.uniform(-20, 20)};
        e.semi_major = rng.uniform(8, 40);
        e.semi_minor = rng.uniform(3, e.semi_major);
        e.rotation = rng.uniform(0, M_PI);
        Point2 p{rng.uniform(-60, 60), rng.uniform(-60, 60)};
        double got = e.distance_to(p);
        double want = ellipse_distance_oracle(e, p);
        CHECK(got == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("ellipse contains/point_at agree") {
    Ellipse e;
    e.center = {10, 5};
    e.semi_major = 12;
    e.semi_minor = 7;
    e.rotation = 0.6;
    for (int i = 0; i < 64; ++i) {
        Point2 b = e.point_at(2 * M_PI * i / 64);
        Point2 inward = e.center + (b - e.center) * 0.95;
        Point2 outward = e.center + (b - e.center) * 1.05;
        CHECK(e.contains(inward));
        CHECK(!e.contains(outward));
    }
}
