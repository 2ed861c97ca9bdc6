#include "ovseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ovseg/errors.hpp"

namespace ovseg {

namespace {

// Uniform doubles built from the raw 64-bit stream so the generated data is
// identical across standard library implementations.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double a, double b) {
        double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }

private:
    std::mt19937_64 eng_;
};

std::uint64_t image_seed(std::uint64_t base, int image_index) {
    return base ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(image_index) + 1));
}

double quadratic_form(const Ellipse& e, Point2 p) {
    double c = std::cos(e.rotation), s = std::sin(e.rotation);
    double dx = p.x - e.center.x, dy = p.y - e.center.y;
    double u = (c * dx + s * dy) / e.semi_major;
    double v = (-s * dx + c * dy) / e.semi_minor;
    return u * u + v * v;
}

} // namespace

double overlap_ratio(const Ellipse& a, const Ellipse& b, int width, int height) {
    BinaryMask ma = rasterize_ellipse(a, width, height);
    BinaryMask mb = rasterize_ellipse(b, width, height);
    std::size_t inter = 0;
    for (std::size_t i = 0; i < ma.bits.size(); ++i) inter += ma.bits[i] && mb.bits[i];
    std::size_t denom = std::min(ma.count(), mb.count());
    if (denom == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(denom);
}

GrayImage render_objects(const std::vector<Ellipse>& objects, int width, int height) {
    GrayImage img(width, height, 255);
    for (const auto& e : objects) {
        double r = std::max(e.semi_major, e.semi_minor);
        int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - r - 1.0)));
        int x1 = std::min(width - 1, static_cast<int>(std::ceil(e.center.x + r + 1.0)));
        int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - r - 1.0)));
        int y1 = std::min(height - 1, static_cast<int>(std::ceil(e.center.y + r + 1.0)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (e.contains({x + 0.5, y + 0.5})) img.set(x, y, 0);
    }
    return img;
}

std::vector<Point2> ground_truth_concave_points(const std::vector<Ellipse>& objects, int width,
                                                int height) {
    // Boundary-boundary intersections found by sign changes of the other
    // ellipse's implicit form along a dense parametric walk, refined by
    // bisection. An intersection stays only if it lies on the union's outer
    // boundary: more than half a pixel inside no third object, and facing
    // background that connects to the image border (pockets enclosed by a
    // cluster are interior boundary, not outer).
    const int samples = 2048;
    std::vector<Point2> out;

    auto strictly_inside = [&](Point2 p, const Ellipse& e) {
        return e.contains(p) && e.distance_to(p) > 0.5;
    };

    // Background reachable from the border.
    BinaryMask uni(width, height);
    for (const auto& e : objects) {
        BinaryMask m = rasterize_ellipse(e, width, height);
        for (std::size_t i = 0; i < uni.bits.size(); ++i) uni.bits[i] |= m.bits[i];
    }
    BinaryMask outside(width, height);
    {
        std::vector<std::pair<int, int>> stack;
        auto push = [&](int x, int y) {
            if (uni.in_bounds(x, y) && !uni.at(x, y) && !outside.at(x, y)) {
                outside.set(x, y);
                stack.emplace_back(x, y);
            }
        };
        for (int x = 0; x < width; ++x) {
            push(x, 0);
            push(x, height - 1);
        }
        for (int y = 0; y < height; ++y) {
            push(0, y);
            push(width - 1, y);
        }
        while (!stack.empty()) {
            auto [x, y] = stack.back();
            stack.pop_back();
            push(x + 1, y);
            push(x - 1, y);
            push(x, y + 1);
            push(x, y - 1);
        }
    }
    auto on_outer_boundary = [&](Point2 p) {
        int cx = static_cast<int>(std::floor(p.x));
        int cy = static_cast<int>(std::floor(p.y));
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                if (outside.at_clamped(cx + dx, cy + dy)) return true;
        return false;
    };

    for (std::size_t i = 0; i < objects.size(); ++i) {
        for (std::size_t j = i + 1; j < objects.size(); ++j) {
            const Ellipse& a = objects[i];
            const Ellipse& b = objects[j];
            double sep = distance(a.center, b.center);
            if (sep > a.semi_major + b.semi_major + 1.0) continue;

            double prev_v = quadratic_form(b, a.point_at(0.0)) - 1.0;
            for (int k = 1; k <= samples; ++k) {
                double t1 = 2.0 * M_PI * k / samples;
                double v1 = quadratic_form(b, a.point_at(t1)) - 1.0;
                if ((prev_v < 0.0) != (v1 < 0.0)) {
                    double lo = 2.0 * M_PI * (k - 1) / samples, hi = t1;
                    double vlo = prev_v;
                    for (int it = 0; it < 40; ++it) {
                        double mid = 0.5 * (lo + hi);
                        double vm = quadratic_form(b, a.point_at(mid)) - 1.0;
                        if ((vm < 0.0) == (vlo < 0.0)) {
                            lo = mid;
                            vlo = vm;
                        } else {
                            hi = mid;
                        }
                    }
                    Point2 p = a.point_at(0.5 * (lo + hi));
                    bool covered = false;
                    for (std::size_t c = 0; c < objects.size() && !covered; ++c) {
                        if (c == i || c == j) continue;
                        covered = strictly_inside(p, objects[c]);
                    }
                    if (!covered && on_outer_boundary(p)) out.push_back(p);
                }
                prev_v = v1;
            }
        }
    }
    return out;
}

std::vector<std::pair<GrayImage, GroundTruthImage>> generate_subset(const SynthConfig& config) {
    if (config.max_overlap <= 0.0 || config.max_overlap >= 1.0)
        throw ConfigError("max_overlap must lie in (0, 1)");

    std::vector<std::pair<GrayImage, GroundTruthImage>> out;
    out.reserve(config.images_per_subset);

    const int tries_per_object = 4000;
    const int restarts_per_image = 5;

    struct PlacedRaster {
        std::vector<int> pixels; // sorted row-major indices
        int bx0, bx1, by0, by1;
    };
    auto raster_pixels = [&](const Ellipse& e, PlacedRaster& out) {
        double r = std::max(e.semi_major, e.semi_minor);
        out.bx0 = std::max(0, static_cast<int>(std::floor(e.center.x - r - 1.0)));
        out.bx1 = std::min(config.image_width - 1, static_cast<int>(std::ceil(e.center.x + r + 1.0)));
        out.by0 = std::max(0, static_cast<int>(std::floor(e.center.y - r - 1.0)));
        out.by1 = std::min(config.image_height - 1, static_cast<int>(std::ceil(e.center.y + r + 1.0)));
        out.pixels.clear();
        for (int y = out.by0; y <= out.by1; ++y)
            for (int x = out.bx0; x <= out.bx1; ++x)
                if (e.contains({x + 0.5, y + 0.5})) out.pixels.push_back(y * config.image_width + x);
    };
    auto intersection_count = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t i = 0, j = 0, acc = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) ++i;
            else if (a[i] > b[j]) ++j;
            else { ++acc; ++i; ++j; }
        }
        return acc;
    };

    for (int img_idx = 0; img_idx < config.images_per_subset; ++img_idx) {
        std::vector<Ellipse> placed;
        bool ok = false;
        for (int restart = 0; restart < restarts_per_image && !ok; ++restart) {
            PortableRng rng(image_seed(config.seed, img_idx) +
                            0x632be59bd9b4e019ULL * restart);
            placed.clear();
            std::vector<PlacedRaster> rasters;
            ok = true;

            PlacedRaster cand;
            for (int obj = 0; obj < config.objects_per_image && ok; ++obj) {
                bool accepted = false;
                for (int t = 0; t < tries_per_object && !accepted; ++t) {
                    double w = rng.uniform(config.axis_min, config.axis_max);
                    double l = rng.uniform(config.axis_min, config.axis_max);
                    Ellipse e;
                    e.semi_major = std::max(w, l) / 2.0;
                    e.semi_minor = std::min(w, l) / 2.0;
                    e.rotation = rng.uniform(0.0, M_PI);
                    double margin = e.semi_major + 1.0;
                    if (2.0 * margin >= config.image_width || 2.0 * margin >= config.image_height)
                        throw ConfigError("objects do not fit the canvas");
                    e.center = {rng.uniform(margin, config.image_width - margin),
                                rng.uniform(margin, config.image_height - margin)};

                    raster_pixels(e, cand);
                    bool fits = !cand.pixels.empty();
                    for (std::size_t k = 0; k < placed.size() && fits; ++k) {
                        const PlacedRaster& other = rasters[k];
                        if (cand.bx1 < other.bx0 || other.bx1 < cand.bx0 ||
                            cand.by1 < other.by0 || other.by1 < cand.by0)
                            continue;
                        std::size_t inter = intersection_count(cand.pixels, other.pixels);
                        double ratio = static_cast<double>(inter) /
                                       static_cast<double>(
                                           std::min(cand.pixels.size(), other.pixels.size()));
                        if (ratio > config.max_overlap) fits = false;
                    }
                    if (fits) {
                        placed.push_back(e);
                        rasters.push_back(cand);
                        accepted = true;
                    }
                }
                if (!accepted) ok = false;
            }
        }
        if (!ok)
            throw PlacementExhausted("could not place " + std::to_string(config.objects_per_image) +
                                     " objects in image " + std::to_string(img_idx));

        GroundTruthImage gt;
        for (int k = 0; k < static_cast<int>(placed.size()); ++k) {
            GroundTruthObject obj;
            obj.id = k;
            obj.ellipse = placed[k];
            obj.contour = Contour::from_points(placed[k].polyline(360));
            gt.objects.push_back(std::move(obj));
        }
        gt.concave_points = ground_truth_concave_points(placed, config.image_width, config.image_height);

        out.emplace_back(render_objects(placed, config.image_width, config.image_height),
                         std::move(gt));
    }
    return out;
}

} // namespace ovseg
