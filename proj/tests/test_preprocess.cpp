#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ovseg/errors.hpp"
#include "ovseg/preprocess.hpp"

using namespace ovseg;
using namespace testutil;

namespace {

GrayImage from_histogram(const std::vector<std::pair<int, int>>& level_counts) {
    int total = 0;
    for (auto [l, c] : level_counts) total += c;
    GrayImage img(total, 1);
    int idx = 0;
    for (auto [l, c] : level_counts)
        for (int i = 0; i < c; ++i) img.pixels[idx++] = static_cast<std::uint8_t>(l);
    return img;
}

// Naive erosion/dilation oracle, fully independent of the library path.
BinaryMask naive_open(const BinaryMask& mask, int radius) {
    auto in_se = [&](int dx, int dy) { return dx * dx + dy * dy <= radius * radius; };
    BinaryMask eroded(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            bool ok = true;
            for (int dy = -radius; dy <= radius && ok; ++dy)
                for (int dx = -radius; dx <= radius && ok; ++dx)
                    if (in_se(dx, dy) && !mask.at_clamped(x + dx, y + dy)) ok = false;
            if (ok) eroded.set(x, y);
        }
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            bool any = false;
            for (int dy = -radius; dy <= radius && !any; ++dy)
                for (int dx = -radius; dx <= radius && !any; ++dx)
                    if (in_se(dx, dy) && eroded.at_clamped(x + dx, y + dy)) any = true;
            if (any) out.set(x, y);
        }
    return out;
}

} // namespace

TEST_CASE("otsu separates a bimodal extreme image") {
    GrayImage img(10, 10);
    for (int i = 0; i < 50; ++i) img.pixels[i] = 0;
    for (int i = 50; i < 100; ++i) img.pixels[i] = 255;
    int t = otsu_threshold(img);
    CHECK(t >= 0);
    CHECK(t < 255);
    auto mask = binarize(img, t);
    CHECK(mask.count() == 50);
}

TEST_CASE("otsu equals exhaustive between-class variance search") {
    GrayImage img = from_histogram({{50, 100}, {200, 300}});
    std::vector<std::uint64_t> hist(256, 0);
    for (auto px : img.pixels) hist[px]++;
    CHECK(otsu_threshold(img) == brute_force_otsu(hist));

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<int, int>> spec;
        int bins = rng.uniform_int(2, 6);
        for (int b = 0; b < bins; ++b)
            spec.emplace_back(rng.uniform_int(0, 255), rng.uniform_int(1, 200));
        GrayImage rimg = from_histogram(spec);
        std::vector<std::uint64_t> rhist(256, 0);
        for (auto px : rimg.pixels) rhist[px]++;
        int occupied = 0;
        for (auto h : rhist)
            if (h) ++occupied;
        if (occupied < 2) continue;
        CHECK(otsu_threshold(rimg) == brute_force_otsu(rhist));
    }
}

TEST_CASE("otsu rejects constant images") {
    GrayImage img(8, 8, 42);
    CHECK_THROWS_AS(otsu_threshold(img), NoSeparation);
}

TEST_CASE("binarize trivial levels") {
    GrayImage dark(5, 5, 0), bright(5, 5, 255);
    CHECK(binarize(dark, 128).count() == 25);
    CHECK(binarize(bright, 128).count() == 0);
}

TEST_CASE("binarize of a rendered scene matches the union raster area") {
    std::vector<std::pair<Point2, double>> discs{{{40, 40}, 20}, {{80, 50}, 15}, {{60, 90}, 18}};
    GrayImage img = render_discs(discs, 130, 130);
    auto mask = binarize(img, otsu_threshold(img));

    long expected = 0;
    for (int y = 0; y < 130; ++y)
        for (int x = 0; x < 130; ++x) {
            Point2 p{x + 0.5, y + 0.5};
            for (const auto& [c, r] : discs)
                if (distance(p, c) <= r) {
                    ++expected;
                    break;
                }
        }
    CHECK(std::abs(static_cast<double>(mask.count()) - expected) / expected < 0.02);
}

TEST_CASE("opening with radius 0 is the identity") {
    Rng rng(8);
    BinaryMask mask(30, 30);
    for (int i = 0; i < 200; ++i) mask.set(rng.uniform_int(0, 29), rng.uniform_int(0, 29));
    CHECK(morphological_open(mask, 0) == mask);
}

TEST_CASE("opening removes an isolated pixel") {
    BinaryMask mask(20, 20);
    mask.set(10, 10);
    CHECK(morphological_open(mask, 1).count() == 0);
}

TEST_CASE("opening a filled square matches the naive oracle and only touches corners") {
    BinaryMask mask(70, 70);
    for (int y = 10; y < 60; ++y)
        for (int x = 10; x < 60; ++x) mask.set(x, y);
    auto opened = morphological_open(mask, 2);
    CHECK(opened == naive_open(mask, 2));

    std::vector<Point2> corners{{10, 10}, {59, 10}, {10, 59}, {59, 59}};
    std::map<int, int> per_corner;
    for (int y = 0; y < 70; ++y)
        for (int x = 0; x < 70; ++x) {
            if (mask.at(x, y) == opened.at(x, y)) continue;
            double best = 1e9;
            int ci = 0;
            for (int k = 0; k < 4; ++k) {
                double d = distance({double(x), double(y)}, corners[k]);
                if (d < best) {
                    best = d;
                    ci = k;
                }
            }
            CHECK(best <= 3.0); // changes confined to the corners
            per_corner[ci]++;
        }
    for (auto [k, count] : per_corner) CHECK(count <= 4);
}

TEST_CASE("opening never adds pixels outside the dilation of the input") {
    Rng rng(12);
    BinaryMask mask(40, 40);
    for (int i = 0; i < 350; ++i) mask.set(rng.uniform_int(5, 34), rng.uniform_int(5, 34));
    auto opened = morphological_open(mask, 2);
    auto dilated = dilate(mask, 2);
    for (std::size_t i = 0; i < opened.bits.size(); ++i)
        if (opened.bits[i]) CHECK(dilated.bits[i]);
}

TEST_CASE("connected_components on an empty mask") {
    CHECK(connected_components(BinaryMask(10, 10), 1).empty());
}

TEST_CASE("connected_components finds two disjoint squares") {
    BinaryMask mask(100, 60);
    for (int y = 10; y < 30; ++y)
        for (int x = 10; x < 30; ++x) mask.set(x, y);
    for (int y = 20; y < 45; ++y)
        for (int x = 60; x < 85; ++x) mask.set(x, y);
    auto comps = connected_components(mask, 50);
    REQUIRE(comps.size() == 2);
    for (const auto& comp : comps) {
        // corner-dominated: hull of the contour has exactly 4 vertices
        auto hull = convex_hull(comp.contour.points);
        CHECK(hull.size() == 4);
    }
}

TEST_CASE("connected_components separates non-touching discs") {
    std::vector<std::pair<Point2, double>> discs{
        {{30, 30}, 16}, {{90, 30}, 14}, {{30, 95}, 18}, {{95, 95}, 15}};
    GrayImage img = render_discs(discs, 130, 130);
    auto comps = connected_components(binarize(img, 128), 100);
    CHECK(comps.size() == discs.size());
}

TEST_CASE("traced contours are closed, positive, and 4-boundary") {
    std::vector<std::pair<Point2, double>> discs{{{40, 40}, 20}, {{62, 46}, 16}};
    GrayImage img = render_discs(discs, 110, 90);
    auto comps = connected_components(binarize(img, 128), 100);
    REQUIRE(comps.size() == 1);
    const auto& comp = comps[0];
    CHECK(comp.contour.area() > 0.0);
    for (const auto& p : comp.contour.points) {
        int x = static_cast<int>(std::floor(p.x - comp.offset.x));
        int y = static_cast<int>(std::floor(p.y - comp.offset.y));
        REQUIRE(comp.mask.at_clamped(x, y));
        bool boundary = !comp.mask.at_clamped(x + 1, y) || !comp.mask.at_clamped(x - 1, y) ||
                        !comp.mask.at_clamped(x, y + 1) || !comp.mask.at_clamped(x, y - 1);
        CHECK(boundary);
    }
}
