#include "ovseg/concave_points.hpp"

#include <algorithm>
#include <cmath>

#include "ovseg/errors.hpp"

namespace ovseg {

static double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

double digitization_threshold(Point2 p_prev, Point2 p_next) {
    Point2 d = p_next - p_prev;
    double s = norm(d);
    if (s == 0.0) throw ZeroLengthLine("chord endpoints coincide");
    Point2 dp{std::round(p_prev.x), std::round(p_prev.y)};
    Point2 dn{std::round(p_next.x), std::round(p_next.y)};
    Point2 dd = dn - dp;
    if (norm(dd) == 0.0) {
        // Digital line collapses to a point; the whole chord length is the
        // deviation budget.
        return s * M_PI_2;
    }
    double phi = std::atan2(d.y, d.x);
    double phi_digital = std::atan2(dd.y, dd.x);
    return s * std::abs(wrap_angle(phi - phi_digital));
}

double digitization_threshold_bound(Point2 p_prev, Point2 p_next) {
    Point2 d = p_next - p_prev;
    double s = norm(d);
    if (s == 0.0) throw ZeroLengthLine("chord endpoints coincide");
    double phi = std::atan2(d.y, d.x);
    double t_max = (std::abs(std::sin(phi)) + std::abs(std::cos(phi))) / s;
    return s * std::atan(t_max);
}

namespace {

double chord_budget(Point2 a, Point2 b) {
    double s = distance(a, b);
    if (s < 1e-9) return 1.0; // coincident chord ends (pinched neck)
    return digitization_threshold_bound(a, b);
}

// Recursive max-deviation splitting of the cyclic arc (a..b): interior
// points are droppable only when the whole arc stays within the chord's
// digitization budget. Purely local removal would also erase broad shallow
// features whose every point is locally within budget; splitting at the
// global maximum keeps them.
void split_arc(const std::vector<Point2>& pts, int a, int b, std::vector<char>& keep) {
    const int n = static_cast<int>(pts.size());
    int len = ((b - a) % n + n) % n;
    if (len < 2) return;
    double budget = chord_budget(pts[a], pts[b]);
    double worst = -1.0;
    int worst_idx = -1;
    bool degenerate_chord = distance(pts[a], pts[b]) < 1e-9;
    for (int k = 1; k < len; ++k) {
        int i = (a + k) % n;
        double d = degenerate_chord ? distance(pts[i], pts[a])
                                    : point_line_distance(pts[i], pts[a], pts[b]);
        if (d > worst) {
            worst = d;
            worst_idx = i;
        }
    }
    if (worst > budget) {
        keep[worst_idx] = 1;
        split_arc(pts, a, worst_idx, keep);
        split_arc(pts, worst_idx, b, keep);
    }
}

} // namespace

DominantPointSet dominant_points(const Contour& contour) {
    const auto& pts = contour.points;
    const int n = static_cast<int>(pts.size());

    // Seed anchors: point 0 and the point farthest from it.
    int far_idx = 1;
    double far_d = -1.0;
    for (int i = 1; i < n; ++i) {
        double d = distance(pts[0], pts[i]);
        if (d > far_d) {
            far_d = d;
            far_idx = i;
        }
    }
    std::vector<char> keep(n, 0);
    keep[0] = keep[far_idx] = 1;
    split_arc(pts, 0, far_idx, keep);
    split_arc(pts, far_idx, 0, keep);

    // Co-linearity polish at fixpoint: every retained point must exceed the
    // budget of its retained neighbors' chord (removes redundant seeds).
    std::vector<int> retained;
    for (int i = 0; i < n; ++i)
        if (keep[i]) retained.push_back(i);

    bool removed_any = true;
    while (removed_any && retained.size() > 3) {
        removed_any = false;
        for (std::size_t k = 0; k < retained.size() && retained.size() > 3;) {
            int ip = retained[(k + retained.size() - 1) % retained.size()];
            int ic = retained[k];
            int in = retained[(k + 1) % retained.size()];
            const Point2& a = pts[ip];
            const Point2& b = pts[in];
            bool degenerate = distance(a, b) < 1e-9;
            double d = degenerate ? distance(pts[ic], a) : point_line_distance(pts[ic], a, b);
            if (d <= chord_budget(a, b)) {
                retained.erase(retained.begin() + static_cast<long>(k));
                removed_any = true;
            } else {
                ++k;
            }
        }
    }

    DominantPointSet out;
    out.indices = std::move(retained);
    return out;
}

bool zhang_is_concave(Point2 p_prev, Point2 p_cur, Point2 p_next) {
    // Contours are stored with positive shoelace area, where convex corners
    // turn with positive cross product; reflex corners are the negative ones.
    return cross(p_cur - p_prev, p_next - p_cur) < 0.0;
}

double bai_concavity_angle(Point2 p_prev, Point2 p_cur, Point2 p_next) {
    double g1 = std::atan2(p_prev.y - p_cur.y, p_prev.x - p_cur.x);
    double g2 = std::atan2(p_next.y - p_cur.y, p_next.x - p_cur.x);
    double d = std::abs(g1 - g2);
    return d < M_PI ? d : M_PI - d;
}

// Cumulative arc length positions of contour points, for the merge rule.
static std::vector<double> arc_positions(const std::vector<Point2>& pts) {
    std::vector<double> pos(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        pos[i] = pos[i - 1] + distance(pts[i - 1], pts[i]);
    return pos;
}

ConcavePointSet detect_concave_points(const Contour& contour, double merge_distance) {
    DominantPointSet dom = dominant_points(contour);
    const auto& pts = contour.points;
    const int m = static_cast<int>(dom.indices.size());

    ConcavePointSet out;
    if (m < 3) return out;

    struct Candidate {
        int index;
        double depth; // chord distance at the dominant triple
    };
    std::vector<Candidate> cands;
    for (int k = 0; k < m; ++k) {
        int ip = dom.indices[(k + m - 1) % m];
        int ic = dom.indices[k];
        int in = dom.indices[(k + 1) % m];
        if (zhang_is_concave(pts[ip], pts[ic], pts[in]))
            cands.push_back({ic, point_line_distance(pts[ic], pts[ip], pts[in])});
    }
    if (cands.empty()) return out;

    // Rasterization can split one neck into two nearby detections; keep the
    // deeper of any pair closer than merge_distance along the contour.
    std::vector<double> pos = arc_positions(pts);
    double total_len = pos.back() + distance(pts.back(), pts.front());
    std::vector<char> keep(cands.size(), 1);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        std::size_t j = (i + 1) % cands.size();
        if (i == j) break;
        double gap = std::abs(pos[cands[j].index] - pos[cands[i].index]);
        gap = std::min(gap, total_len - gap);
        if (gap < merge_distance) {
            if (cands[i].depth >= cands[j].depth)
                keep[j] = 0;
            else
                keep[i] = 0;
        }
    }

    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!keep[i]) continue;
        out.indices.push_back(cands[i].index);
        out.points.push_back(pts[cands[i].index]);
    }
    return out;
}

ConcavePointSet detect_concave_points_bai(const Contour& contour, const BinaryMask& mask,
                                          Point2 mask_offset, double angle_min,
                                          double angle_max) {
    DominantPointSet dom = dominant_points(contour);
    const auto& pts = contour.points;
    const int m = static_cast<int>(dom.indices.size());

    ConcavePointSet out;
    if (m < 3) return out;

    auto inside = [&](Point2 p) {
        int x = static_cast<int>(std::floor(p.x - mask_offset.x));
        int y = static_cast<int>(std::floor(p.y - mask_offset.y));
        return mask.at_clamped(x, y);
    };

    for (int k = 0; k < m; ++k) {
        int ip = dom.indices[(k + m - 1) % m];
        int ic = dom.indices[k];
        int in = dom.indices[(k + 1) % m];
        double angle = bai_concavity_angle(pts[ip], pts[ic], pts[in]);
        if (angle <= angle_min || angle >= angle_max) continue;
        // Chord between the neighbors must leave the object.
        bool leaves = false;
        for (double t : {0.25, 0.5, 0.75}) {
            Point2 q = pts[ip] + (pts[in] - pts[ip]) * t;
            if (!inside(q)) {
                leaves = true;
                break;
            }
        }
        if (leaves) {
            out.indices.push_back(ic);
            out.points.push_back(pts[ic]);
        }
    }
    return out;
}

std::vector<ContourSegment> split_contour(const Contour& contour, const ConcavePointSet& concave,
                                          int parent_component) {
    const auto& pts = contour.points;
    const int n = static_cast<int>(pts.size());
    std::vector<ContourSegment> segments;

    if (concave.indices.empty()) {
        ContourSegment s;
        s.points = pts;
        s.parent_component = parent_component;
        s.start_index = 0;
        s.end_index = n - 1;
        segments.push_back(std::move(s));
        return segments;
    }

    const int k = static_cast<int>(concave.indices.size());
    for (int c = 0; c < k; ++c) {
        int from = concave.indices[c];
        int to = concave.indices[(c + 1) % k];
        int steps = ((to - from) % n + n) % n;
        if (steps == 0) steps = n; // single concave point: wrap the full loop
        ContourSegment s;
        s.parent_component = parent_component;
        s.start_index = from;
        s.end_index = to;
        s.points.reserve(static_cast<std::size_t>(steps) + 1);
        for (int j = 0; j <= steps; ++j) s.points.push_back(pts[(from + j) % n]);
        segments.push_back(std::move(s));
    }
    return segments;
}

} // namespace ovseg
