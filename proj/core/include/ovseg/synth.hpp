#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ovseg/geometry.hpp"
#include "ovseg/preprocess.hpp"

namespace ovseg {

/// Parameters of the synthetic overlapping-ellipse benchmark. axis_min and
/// axis_max bound the full axis lengths, so semi-axes are drawn uniformly
/// from [axis_min/2, axis_max/2].
struct SynthConfig {
    int image_width = 400;
    int image_height = 300;
    int objects_per_image = 40;
    int images_per_subset = 50;
    double axis_min = 30.0;
    double axis_max = 45.0;
    double max_overlap = 0.40;
    std::uint64_t seed = 1;
};

struct GroundTruthObject {
    int id = 0;
    Ellipse ellipse;
    Contour contour; // analytic boundary polyline
};

struct GroundTruthImage {
    std::vector<GroundTruthObject> objects;
    /// Boundary intersection points of overlapping object pairs that lie on
    /// the union's outer boundary.
    std::vector<Point2> concave_points;
};

/// Raster overlap |A & B| / min(|A|, |B|) within the canvas.
double overlap_ratio(const Ellipse& a, const Ellipse& b, int width, int height);

/// Renders dark objects (intensity 0) on a white background (255).
GrayImage render_objects(const std::vector<Ellipse>& objects, int width, int height);

/// Ground-truth concave points for a set of ellipses on the given canvas:
/// boundary-boundary intersection points that lie on the union's outer
/// boundary. Intersections covered by a third object or facing an enclosed
/// background pocket are excluded (exposed for tests).
std::vector<Point2> ground_truth_concave_points(const std::vector<Ellipse>& objects, int width,
                                                int height);

/// Deterministic benchmark subset: images_per_subset images each holding
/// exactly objects_per_image ellipses placed by rejection sampling so every
/// pairwise overlap ratio stays at or below max_overlap. Image generation
/// is independent per image; the per-image engine is mt19937_64 seeded with
/// seed ^ (0x9e3779b97f4a7c15 * (image_index + 1)), so any image can be
/// regenerated in isolation. Throws PlacementExhausted when rejection
/// sampling cannot place an object within the retry budget.
std::vector<std::pair<GrayImage, GroundTruthImage>> generate_subset(const SynthConfig& config);

} // namespace ovseg
