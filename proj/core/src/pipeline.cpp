#include "ovseg/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "ovseg/concave_points.hpp"
#include "ovseg/errors.hpp"

namespace ovseg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Binarize, open, extract components. Returns empty on a flat image.
std::vector<Component> extract_components(const GrayImage& image, const PipelineConfig& config) {
    int level;
    try {
        level = otsu_threshold(image);
    } catch (const NoSeparation&) {
        return {};
    }
    BinaryMask mask = binarize(image, level);
    mask = morphological_open(mask, config.opening_radius);
    return connected_components(mask, config.min_component_area);
}

GroupingConfig grouping_config_for(const Component& comp, int segment_count,
                                   const PipelineConfig& config) {
    GroupingConfig gc;
    gc.alpha = config.alpha;
    gc.beta = config.beta;
    gc.group_penalty = config.group_penalty;
    gc.node_budget = config.bb_node_budget;
    // Radial voting range tracks the per-object scale, not the component
    // scale: a k-object cluster is roughly k object areas, and k is about
    // half the segment count (each overlap contributes two concave points).
    double objects_estimate = std::max(1.0, segment_count / 2.0);
    double equivalent_radius =
        std::sqrt(static_cast<double>(comp.mask.count()) / (M_PI * objects_estimate));
    gc.radial_min = std::max(1.0, config.radial_min_factor * equivalent_radius);
    gc.radial_max = std::max(gc.radial_min, config.radial_max_factor * equivalent_radius);
    return gc;
}

} // namespace

SegmentationResult segment_image(const GrayImage& image, const PipelineConfig& config) {
    SegmentationResult result;
    result.width = image.width;
    result.height = image.height;

    auto t_pre = Clock::now();
    std::vector<Component> components = extract_components(image, config);
    result.timings_ms["preprocess"] = elapsed_ms(t_pre);

    double detect_ms = 0.0, group_ms = 0.0, estimate_ms = 0.0;
    int next_object_id = 0;

    for (const Component& comp : components) {
        auto t_detect = Clock::now();
        ConcavePointSet concave = detect_concave_points(comp.contour);
        for (const Point2& p : concave.points) result.concave_points.push_back(p);
        detect_ms += elapsed_ms(t_detect);

        // Grouping runs in the component-local frame so symmetry votes land
        // on the local mask.
        auto t_group = Clock::now();
        Contour local = comp.contour;
        for (Point2& p : local.points) p = p - comp.offset;
        ConcavePointSet local_concave = concave;
        for (Point2& p : local_concave.points) p = p - comp.offset;

        std::vector<ContourSegment> segments = split_contour(local, local_concave, comp.id);
        const int segment_count = static_cast<int>(segments.size());
        GroupingProblem problem = GroupingProblem::build(
            std::move(segments), comp.mask, grouping_config_for(comp, segment_count, config));
        GroupingResult grouping = solve_branch_and_bound(problem);
        group_ms += elapsed_ms(t_group);

        auto t_estimate = Clock::now();
        const int group_count = grouping.grouping.group_count();
        for (int g = 1; g <= group_count; ++g) {
            std::vector<Point2> evidence;
            for (std::size_t s = 0; s < problem.segments.size(); ++s)
                if (grouping.grouping.membership[s] == g)
                    evidence.insert(evidence.end(), problem.segments[s].points.begin(),
                                    problem.segments[s].points.end());
            EstimatedContour estimated;
            try {
                estimated = estimate_contour_gp_pf(evidence, config.kernel, config.n_samples);
            } catch (const Error&) {
                continue; // group too degenerate to estimate
            }
            SegmentedObject obj;
            obj.id = next_object_id++;
            std::vector<Point2> pts = estimated.contour.points;
            for (Point2& p : pts) p = p + comp.offset;
            obj.contour = Contour::from_points(std::move(pts));
            obj.cost = grouping.group_costs[g - 1];
            obj.kernel = estimated.kernel;
            obj.component_id = comp.id;
            obj.group_index = g;
            result.objects.push_back(std::move(obj));
        }
        estimate_ms += elapsed_ms(t_estimate);
    }

    result.timings_ms["concave_detection"] = detect_ms;
    result.timings_ms["grouping"] = group_ms;
    result.timings_ms["contour_estimation"] = estimate_ms;
    return result;
}

std::vector<Point2> detect_image_concave_points(const GrayImage& image,
                                                const PipelineConfig& config) {
    std::vector<Point2> out;
    for (const Component& comp : extract_components(image, config)) {
        ConcavePointSet concave = detect_concave_points(comp.contour);
        out.insert(out.end(), concave.points.begin(), concave.points.end());
    }
    return out;
}

} // namespace ovseg
