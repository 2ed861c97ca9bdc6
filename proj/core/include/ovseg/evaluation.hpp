#pragma once

#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

struct MatchConfig {
    double dist_threshold_rho1 = 10.0;
    double jsc_threshold = 0.6;
};

/// Detection scores shared by the concave-point and segmentation
/// evaluations. Empty-denominator conventions: tpr with no truth = 1, ppv
/// with no detections = 1, acc with all counts zero = 1; ad and ajsc are 0
/// when there are no true positives.
struct DetectionScores {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double tpr = 1.0;
    double ppv = 1.0;
    double acc = 1.0;
    double ad = 0.0;   // mean matched distance (concave-point mode)
    double ajsc = 0.0; // mean JSC over true positives (segmentation mode)
};

struct PointMatching {
    std::vector<std::pair<int, int>> pairs; // (detected index, truth index)
    std::vector<double> distances;          // per matched pair
};

/// One-to-one greedy matching in increasing distance order; only pairs
/// within rho1 are matched.
PointMatching match_points(const std::vector<Point2>& detected,
                           const std::vector<Point2>& truth, double rho1);

/// TPR/PPV/ACC/AD for point detections against ground truth.
DetectionScores point_detection_scores(const std::vector<Point2>& detected,
                                       const std::vector<Point2>& truth, double rho1);

/// Jaccard similarity |a&b| / |a|b|; 1 when both masks are empty. Throws
/// DimensionMismatch on differing dimensions.
double jsc(const BinaryMask& a, const BinaryMask& b);

/// Greedy one-to-one matching by descending JSC; a pair is a true positive
/// when its JSC reaches cfg.jsc_threshold.
DetectionScores segmentation_scores(const std::vector<BinaryMask>& predicted,
                                    const std::vector<BinaryMask>& truth,
                                    const MatchConfig& cfg);

} // namespace ovseg
