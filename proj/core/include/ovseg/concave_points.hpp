#pragma once

#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

/// Indices of contour points retained by co-linear suppression.
struct DominantPointSet {
    std::vector<int> indices; // strictly increasing indices into the contour
};

/// Dominant points classified as concave.
struct ConcavePointSet {
    std::vector<int> indices;   // strictly increasing indices into the contour
    std::vector<Point2> points; // corresponding coordinates
};

/// Deviation budget d_th = S * |delta_phi| for the chord p_prev -> p_next,
/// where delta_phi is the angle between the chord and the line through its
/// integer-rounded endpoints. Exactly zero when both endpoints already lie
/// on the integer grid. Throws ZeroLengthLine when the endpoints coincide.
double digitization_threshold(Point2 p_prev, Point2 p_next);

/// Worst-case digitization deviation of the chord: S * atan((|sin phi| +
/// |cos phi|) / S), the maximum of digitization_threshold over all
/// half-pixel roundings of the endpoints. This is the budget the dominant
/// point suppression uses; the observed rounding of lattice-aligned contour
/// points is identically zero and would retain every staircase vertex.
double digitization_threshold_bound(Point2 p_prev, Point2 p_next);

/// Co-linear suppression at fixpoint: a point survives iff its perpendicular
/// distance to the chord of its currently retained neighbors exceeds the
/// chord's digitization bound. Sweeps repeat until a full pass removes
/// nothing.
DominantPointSet dominant_points(const Contour& contour);

/// Reflex test for a triple taken in traversal order from a contour stored
/// with positive shoelace area: true at concave (inward-bending) vertices,
/// false at convex ones.
bool zhang_is_concave(Point2 p_prev, Point2 p_cur, Point2 p_next);

/// Angle between the lines (p_cur, p_prev) and (p_cur, p_next):
/// |g1 - g2| when that is below pi, otherwise pi - |g1 - g2|.
double bai_concavity_angle(Point2 p_prev, Point2 p_cur, Point2 p_next);

/// Parameter-free detector: dominant points filtered by the reflex test on
/// consecutive dominant triples. Detections closer than merge_distance px
/// along the contour collapse onto the deeper one.
ConcavePointSet detect_concave_points(const Contour& contour, double merge_distance = 3.0);

/// Alternate classifier: dominant points whose concavity angle lies in
/// (angle_min, angle_max) and whose neighbor chord leaves the object mask.
/// mask_offset maps mask pixel (0,0) to the contour coordinate frame.
ConcavePointSet detect_concave_points_bai(const Contour& contour, const BinaryMask& mask,
                                          Point2 mask_offset,
                                          double angle_min = M_PI / 18.0,
                                          double angle_max = 8.0 * M_PI / 9.0);

/// Splits the contour at the concave points: k >= 1 concave points yield k
/// open segments whose endpoints are consecutive concave points (both
/// included); zero concave points yield one segment covering the whole
/// contour.
std::vector<ContourSegment> split_contour(const Contour& contour, const ConcavePointSet& concave,
                                          int parent_component = 0);

} // namespace ovseg
