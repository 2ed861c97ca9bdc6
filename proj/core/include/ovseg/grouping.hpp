#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

/// Weights and search parameters for segment grouping.
struct GroupingConfig {
    double alpha = 0.1;
    double beta = 0.9;
    /// Radial voting range of the symmetry transform, in pixels.
    double radial_min = 1.0;
    double radial_max = 30.0;
    /// Instance size limit for the exhaustive reference solver.
    int max_exact_segments = 10;
    /// Branch-and-bound node budget before falling back to greedy.
    long node_budget = 2000000;
    /// Constant charged per group in the objective. Keeps over-splitting
    /// from being free: all cost terms are nonnegative and vanish on
    /// well-formed singleton arcs, so without this charge the all-singleton
    /// partition is almost always optimal.
    double group_penalty = 0.2;
};

/// Per-group cost terms. total = concavity + alpha*ellipticity +
/// beta*symmetry (the group penalty is accounted in the objective, not
/// here). For groups of two or more segments the concavity and symmetry
/// terms accumulate over unordered pairs, so they are not bounded by 1.
struct CostBreakdown {
    double concavity = 0.0;
    double ellipticity = 0.0;
    double symmetry = 0.0;
    double total = 0.0;
};

/// Membership vector in canonical form: membership[0] == 1 and every later
/// label is at most 1 + max of the earlier labels.
struct Grouping {
    std::vector<int> membership;
    int group_count() const;
    bool is_canonical() const;
};

/// Symmetric pairwise flag matrix.
struct PairFlags {
    int n = 0;
    std::vector<std::uint8_t> flags;

    PairFlags() = default;
    explicit PairFlags(int size) : n(size), flags(static_cast<std::size_t>(size) * size, 0) {}
    bool at(int i, int j) const { return flags[static_cast<std::size_t>(i) * n + j] != 0; }
    void set(int i, int j, bool v = true) {
        flags[static_cast<std::size_t>(i) * n + j] = v ? 1 : 0;
        flags[static_cast<std::size_t>(j) * n + i] = v ? 1 : 0;
    }
};

/// One grouping instance: the segments of a connected component, the
/// component mask in the same coordinate frame as the segment points, the
/// concave-adjacency flags, and the component diameter used to normalize
/// the symmetry cost.
struct GroupingProblem {
    std::vector<ContourSegment> segments;
    BinaryMask mask;
    GroupingConfig config;
    PairFlags adjacency;
    double diameter = 1.0;

    /// Builds adjacency flags (consecutive segments on the parent contour
    /// are concave-adjacent) and the diameter from the segment points.
    static GroupingProblem build(std::vector<ContourSegment> segments, BinaryMask mask,
                                 GroupingConfig config);
};

struct GroupingResult {
    Grouping grouping;
    double cost = 0.0;
    std::vector<CostBreakdown> group_costs; // indexed by group label - 1
    long nodes_expanded = 0;
    bool budget_fallback = false;
};

/// Concavity cost of a group of segments referenced by index. Pairs flagged
/// concave-adjacent cost 1; other pairs cost 1 - A/A_ch for the region
/// bounded by the two segments and their connecting chords; singletons use
/// their own closing chord; groups of three or more take the maximum over
/// pairs. Throws DegenerateSegment when a singleton has fewer than 3
/// points.
double concavity_cost(const std::vector<ContourSegment>& segments, const std::vector<int>& group,
                      const PairFlags& concave_adjacency);

/// Mean distance of the group's points to one jointly fitted ellipse,
/// normalized by the fitted semi-major axis. Returns +infinity when the fit
/// is degenerate.
double ellipticity_cost(const std::vector<ContourSegment>& segments,
                        const std::vector<int>& group);

/// Radial-symmetry center of one segment by the normal symmetry transform:
/// every segment point votes along its inward normal at each radius in the
/// configured range; vote maps are clamped, normalized, and averaged; the
/// center is the vote-weighted centroid of the near-maximal region. Throws
/// EmptyVoteMap when no vote lands inside the mask frame.
Point2 nst_symmetry_center(const ContourSegment& segment, const BinaryMask& mask,
                           const GroupingConfig& config);

/// Distance between the two segments' symmetry centers, normalized by the
/// component diameter and clamped to [0, 1]. A segment without a usable
/// vote map scores the maximum penalty 1.
double symmetry_cost(const ContourSegment& a, const ContourSegment& b, const BinaryMask& mask,
                     const GroupingConfig& config, double component_diameter);

/// Objective of a full grouping: sum over groups of the cost breakdown
/// totals plus group_penalty per group. Optionally reports the per-group
/// breakdowns.
double total_cost(const GroupingProblem& problem, const Grouping& grouping,
                  std::vector<CostBreakdown>* breakdowns = nullptr);

/// Reference solver: enumerates every canonical partition (Bell-number
/// many) and returns the cheapest, breaking ties toward the
/// lexicographically smallest membership vector. Throws TooManySegments
/// above config.max_exact_segments.
GroupingResult solve_exhaustive(const GroupingProblem& problem);

/// Depth-first branch and bound over canonical membership vectors with a
/// greedy incumbent and an admissible lower bound (committed pairwise
/// concavity and symmetry sums plus opened group penalties). Falls back to
/// the best incumbent when the node budget is exhausted.
GroupingResult solve_branch_and_bound(const GroupingProblem& problem);

} // namespace ovseg
