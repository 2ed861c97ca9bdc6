#pragma once

#include <map>
#include <string>
#include <vector>

#include "ovseg/geometry.hpp"
#include "ovseg/gp_contour.hpp"
#include "ovseg/grouping.hpp"
#include "ovseg/preprocess.hpp"

namespace ovseg {

/// Tunables of the whole pipeline, settable from the CLI config file.
struct PipelineConfig {
    int opening_radius = 2;
    int min_component_area = 100;
    double alpha = 0.1;
    double beta = 0.9;
    /// Symmetry-transform radial range as factors of the component's
    /// equivalent radius sqrt(area / pi).
    double radial_min_factor = 0.3;
    double radial_max_factor = 1.2;
    double group_penalty = 0.2;
    long bb_node_budget = 2000000;
    KernelSpec kernel;
    int n_samples = 360;
    double rho1 = 10.0;
    double jsc_threshold = 0.6;
};

/// One resolved object: the estimated full contour plus provenance.
struct SegmentedObject {
    int id = 0;
    Contour contour;
    CostBreakdown cost;
    KernelSpec kernel;
    int component_id = 0;
    int group_index = 0;
};

struct SegmentationResult {
    int width = 0;
    int height = 0;
    std::vector<SegmentedObject> objects;
    std::vector<Point2> concave_points;
    std::map<std::string, double> timings_ms;
};

/// Full pipeline: binarization, opening, component extraction, concave
/// point detection, segment grouping, and GP contour estimation. A blank
/// image (no intensity separation) yields an empty result.
SegmentationResult segment_image(const GrayImage& image, const PipelineConfig& config);

/// Detection-only pipeline: concave points of every component, in image
/// coordinates.
std::vector<Point2> detect_image_concave_points(const GrayImage& image,
                                                const PipelineConfig& config);

} // namespace ovseg
