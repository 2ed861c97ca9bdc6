#include "ovseg/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ovseg/ellipse_fit.hpp"
#include "ovseg/errors.hpp"

namespace ovseg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Point2> collect_points(const std::vector<ContourSegment>& segments,
                                   const std::vector<int>& group) {
    std::vector<Point2> pts;
    for (int idx : group)
        pts.insert(pts.end(), segments[idx].points.begin(), segments[idx].points.end());
    return pts;
}

double region_convexity_deficit(const std::vector<Point2>& pts) {
    double area = std::abs(signed_area(pts));
    double hull_area;
    try {
        hull_area = signed_area(convex_hull(pts));
    } catch (const DegenerateInput&) {
        return 0.0; // collinear points bound no area
    }
    if (hull_area < 1e-9) return 0.0;
    return std::clamp(1.0 - area / hull_area, 0.0, 1.0);
}

// Pair region: both segments traversed in parent-contour order, closed by
// the two connecting chords.
double pair_concavity(const ContourSegment& a, const ContourSegment& b) {
    const ContourSegment* first = &a;
    const ContourSegment* second = &b;
    if (b.start_index < a.start_index) std::swap(first, second);
    std::vector<Point2> pts;
    pts.reserve(first->points.size() + second->points.size());
    pts.insert(pts.end(), first->points.begin(), first->points.end());
    pts.insert(pts.end(), second->points.begin(), second->points.end());
    return region_convexity_deficit(pts);
}

} // namespace

int Grouping::group_count() const {
    int m = 0;
    for (int g : membership) m = std::max(m, g);
    return m;
}

bool Grouping::is_canonical() const {
    int max_seen = 0;
    for (int g : membership) {
        if (g < 1 || g > max_seen + 1) return false;
        max_seen = std::max(max_seen, g);
    }
    return !membership.empty();
}

GroupingProblem GroupingProblem::build(std::vector<ContourSegment> segments, BinaryMask mask,
                                       GroupingConfig config) {
    GroupingProblem p;
    p.segments = std::move(segments);
    p.mask = std::move(mask);
    p.config = config;

    const int n = static_cast<int>(p.segments.size());
    p.adjacency = PairFlags(n);
    if (n >= 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (p.segments[i].end_index == p.segments[j].start_index ||
                    p.segments[j].end_index == p.segments[i].start_index)
                    p.adjacency.set(i, j);
            }
        }
    }

    std::vector<Point2> all;
    for (const auto& s : p.segments) all.insert(all.end(), s.points.begin(), s.points.end());
    double best = 1.0;
    std::vector<Point2> hull;
    try {
        hull = convex_hull(all);
    } catch (const DegenerateInput&) {
        hull = all;
    }
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, distance(hull[i], hull[j]));
    p.diameter = best;
    return p;
}

double concavity_cost(const std::vector<ContourSegment>& segments, const std::vector<int>& group,
                      const PairFlags& concave_adjacency) {
    if (group.empty()) throw DegenerateSegment("empty group");
    if (group.size() == 1) {
        const auto& seg = segments[group[0]];
        if (seg.points.size() < 3)
            throw DegenerateSegment("segment too short for area computation");
        return region_convexity_deficit(seg.points);
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a + 1; b < group.size(); ++b) {
            double c = concave_adjacency.at(group[a], group[b])
                           ? 1.0
                           : pair_concavity(segments[group[a]], segments[group[b]]);
            worst = std::max(worst, c);
        }
    }
    return worst;
}

double ellipticity_cost(const std::vector<ContourSegment>& segments,
                        const std::vector<int>& group) {
    std::vector<Point2> pts = collect_points(segments, group);
    Ellipse e;
    try {
        e = fit_ellipse_lesf(pts);
    } catch (const FitFailure&) {
        return kInf;
    }
    double acc = 0.0;
    for (const auto& p : pts) acc += e.distance_to(p);
    return acc / (static_cast<double>(pts.size()) * e.semi_major);
}

Point2 nst_symmetry_center(const ContourSegment& segment, const BinaryMask& mask,
                           const GroupingConfig& config) {
    const auto& pts = segment.points;
    const int n = static_cast<int>(pts.size());
    if (n < 5) throw EmptyVoteMap("segment too short for symmetry voting");

    auto inside = [&](double x, double y) {
        return mask.at_clamped(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)));
    };

    // Tangents by central differences over +-2 points, normals oriented
    // into the mask (per point where unambiguous, else by segment majority).
    std::vector<Point2> raw(n);
    std::vector<int> orient(n, 0);
    int majority = 0;
    const double probe = 2.0;
    for (int i = 0; i < n; ++i) {
        Point2 t = pts[std::min(i + 2, n - 1)] - pts[std::max(i - 2, 0)];
        double len = norm(t);
        if (len < 1e-12) {
            t = {1.0, 0.0};
            len = 1.0;
        }
        raw[i] = {-t.y / len, t.x / len};
        bool in_pos = inside(pts[i].x + raw[i].x * probe, pts[i].y + raw[i].y * probe);
        bool in_neg = inside(pts[i].x - raw[i].x * probe, pts[i].y - raw[i].y * probe);
        if (in_pos && !in_neg) orient[i] = 1;
        else if (in_neg && !in_pos) orient[i] = -1;
        majority += orient[i];
    }
    const int fallback = majority >= 0 ? 1 : -1;

    const int rmin = std::max(1, static_cast<int>(std::ceil(config.radial_min)));
    const int rmax = std::max(rmin, static_cast<int>(std::floor(config.radial_max)));
    const int n_radii = rmax - rmin + 1;

    std::unordered_map<int, double> s_acc;
    std::unordered_map<int, double> votes;
    std::vector<double> vals;
    bool any_vote = false;

    for (int radius = rmin; radius <= rmax; ++radius) {
        votes.clear();
        for (int i = 0; i < n; ++i) {
            int s = orient[i] != 0 ? orient[i] : fallback;
            double qx = pts[i].x + raw[i].x * s * radius;
            double qy = pts[i].y + raw[i].y * s * radius;
            int ix = static_cast<int>(std::floor(qx));
            int iy = static_cast<int>(std::floor(qy));
            if (!mask.in_bounds(ix, iy)) continue;
            votes[iy * mask.width + ix] += 1.0;
        }
        if (votes.empty()) continue;
        any_vote = true;

        vals.clear();
        for (const auto& [idx, v] : votes) vals.push_back(v);
        std::sort(vals.begin(), vals.end());
        double k_n = std::max(1.0, vals[static_cast<std::size_t>(
                                       std::floor(0.99 * (vals.size() - 1)))]);
        for (const auto& [idx, v] : votes) s_acc[idx] += std::min(v, k_n) / k_n;
    }
    if (!any_vote) throw EmptyVoteMap("all symmetry votes fell outside the mask frame");

    double max_s = 0.0;
    for (const auto& [idx, v] : s_acc) max_s = std::max(max_s, v / n_radii);
    const double threshold = 0.8 * max_s;

    double wsum = 0.0, cx = 0.0, cy = 0.0;
    for (const auto& [idx, v] : s_acc) {
        double s = v / n_radii;
        if (s < threshold) continue;
        int ix = idx % mask.width;
        int iy = idx / mask.width;
        wsum += s;
        cx += s * (ix + 0.5);
        cy += s * (iy + 0.5);
    }
    if (wsum <= 0.0) throw EmptyVoteMap("degenerate symmetry map");
    return {cx / wsum, cy / wsum};
}

double symmetry_cost(const ContourSegment& a, const ContourSegment& b, const BinaryMask& mask,
                     const GroupingConfig& config, double component_diameter) {
    Point2 oa, ob;
    try {
        oa = nst_symmetry_center(a, mask, config);
        ob = nst_symmetry_center(b, mask, config);
    } catch (const EmptyVoteMap&) {
        return 1.0;
    }
    double d = distance(oa, ob) / std::max(component_diameter, 1e-9);
    return std::clamp(d, 0.0, 1.0);
}

namespace {

// Shared cost evaluation for the solvers: per-segment symmetry centers,
// pairwise term matrices, and per-group-bitmask breakdowns are computed
// once per problem.
class Evaluator {
public:
    explicit Evaluator(const GroupingProblem& p) : p_(p), n_(static_cast<int>(p.segments.size())) {
        centers_.resize(n_);
        centers_valid_.assign(n_, 0);
        centers_ok_.assign(n_, 0);
        pair_conc_.assign(static_cast<std::size_t>(n_) * n_, -1.0);
        pair_sym_.assign(static_cast<std::size_t>(n_) * n_, -1.0);
    }

    double pair_concavity_term(int i, int j) {
        double& slot = pair_conc_[static_cast<std::size_t>(i) * n_ + j];
        if (slot < 0.0) {
            slot = p_.adjacency.at(i, j) ? 1.0
                                         : pair_concavity(p_.segments[i], p_.segments[j]);
            pair_conc_[static_cast<std::size_t>(j) * n_ + i] = slot;
        }
        return slot;
    }

    double pair_symmetry_term(int i, int j) {
        double& slot = pair_sym_[static_cast<std::size_t>(i) * n_ + j];
        if (slot < 0.0) {
            const auto* ci = center(i);
            const auto* cj = center(j);
            if (!ci || !cj)
                slot = 1.0;
            else
                slot = std::clamp(distance(*ci, *cj) / std::max(p_.diameter, 1e-9), 0.0, 1.0);
            pair_sym_[static_cast<std::size_t>(j) * n_ + i] = slot;
        }
        return slot;
    }

    const CostBreakdown& group_cost(std::uint64_t bits) {
        auto it = cache_.find(bits);
        if (it != cache_.end()) return it->second;

        std::vector<int> group;
        for (int i = 0; i < n_; ++i)
            if (bits & (std::uint64_t{1} << i)) group.push_back(i);

        // Group terms accumulate over pairs rather than taking the pair
        // maximum: pair maxima saturate near 1 + beta, so for large
        // components one mega-group would undercut the per-group charges of
        // the correct partition. Sums grow with every bad pair and stay
        // monotone under group growth, which the search bound relies on.
        CostBreakdown cb;
        if (group.size() == 1) {
            const auto& seg = p_.segments[group[0]];
            cb.concavity =
                seg.points.size() < 3 ? 1.0 : region_convexity_deficit(seg.points);
            cb.symmetry = 0.0;
        } else {
            for (std::size_t a = 0; a < group.size(); ++a) {
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    cb.concavity += pair_concavity_term(group[a], group[b]);
                    cb.symmetry += pair_symmetry_term(group[a], group[b]);
                }
            }
        }
        cb.ellipticity = ellipticity_cost(p_.segments, group);
        cb.total = cb.concavity + p_.config.alpha * cb.ellipticity + p_.config.beta * cb.symmetry;
        return cache_.emplace(bits, cb).first->second;
    }

    int size() const { return n_; }

private:
    const Point2* center(int i) {
        if (!centers_valid_[i]) {
            centers_valid_[i] = 1;
            try {
                centers_[i] = nst_symmetry_center(p_.segments[i], p_.mask, p_.config);
                centers_ok_[i] = 1;
            } catch (const EmptyVoteMap&) {
            }
        }
        return centers_ok_[i] ? &centers_[i] : nullptr;
    }

    const GroupingProblem& p_;
    int n_;
    std::vector<Point2> centers_;
    std::vector<std::uint8_t> centers_valid_;
    std::vector<std::uint8_t> centers_ok_;
    std::unordered_map<std::uint64_t, CostBreakdown> cache_;
    std::vector<double> pair_conc_, pair_sym_;
};

double assignment_cost(Evaluator& ev, const std::vector<int>& labels, int upto,
                       double group_penalty, std::vector<CostBreakdown>* breakdowns = nullptr) {
    int m = 0;
    for (int i = 0; i < upto; ++i) m = std::max(m, labels[i]);
    std::vector<std::uint64_t> bits(m, 0);
    for (int i = 0; i < upto; ++i) bits[labels[i] - 1] |= std::uint64_t{1} << i;

    if (breakdowns) breakdowns->clear();
    double acc = 0.0;
    for (int g = 0; g < m; ++g) {
        const CostBreakdown& cb = ev.group_cost(bits[g]);
        if (breakdowns) breakdowns->push_back(cb);
        acc += cb.total;
    }
    return acc + group_penalty * m;
}

Grouping greedy_grouping(Evaluator& ev, const GroupingConfig& config) {
    const int n = ev.size();
    std::vector<int> labels(n, 0);
    labels[0] = 1;
    for (int i = 1; i < n; ++i) {
        int max_label = 0;
        for (int j = 0; j < i; ++j) max_label = std::max(max_label, labels[j]);
        double best = kInf;
        int best_label = max_label + 1;
        for (int lab = 1; lab <= max_label + 1; ++lab) {
            labels[i] = lab;
            double c = assignment_cost(ev, labels, i + 1, config.group_penalty);
            if (c < best) {
                best = c;
                best_label = lab;
            }
        }
        labels[i] = best_label;
    }
    return Grouping{labels};
}

} // namespace

double total_cost(const GroupingProblem& problem, const Grouping& grouping,
                  std::vector<CostBreakdown>* breakdowns) {
    const int n = static_cast<int>(problem.segments.size());
    if (static_cast<int>(grouping.membership.size()) != n)
        throw DimensionMismatch("membership size does not match segment count");
    if (!grouping.is_canonical()) throw DegenerateInput("grouping is not canonical");
    Evaluator ev(problem);
    return assignment_cost(ev, grouping.membership, n, problem.config.group_penalty, breakdowns);
}

GroupingResult solve_exhaustive(const GroupingProblem& problem) {
    const int n = static_cast<int>(problem.segments.size());
    if (n < 1) throw DegenerateInput("no segments to group");
    if (n > problem.config.max_exact_segments)
        throw TooManySegments("exhaustive solver limited to " +
                              std::to_string(problem.config.max_exact_segments) + " segments");

    Evaluator ev(problem);
    std::vector<int> labels(n, 0);
    std::vector<int> best_labels;
    double best_cost = kInf;
    long leaves = 0;

    auto recurse = [&](auto&& self, int i, int max_label) -> void {
        if (i == n) {
            ++leaves;
            double c = assignment_cost(ev, labels, n, problem.config.group_penalty);
            if (c < best_cost || best_labels.empty()) {
                best_cost = c;
                best_labels = labels;
            }
            return;
        }
        for (int lab = 1; lab <= max_label + 1; ++lab) {
            labels[i] = lab;
            self(self, i + 1, std::max(max_label, lab));
        }
    };
    recurse(recurse, 0, 0);

    GroupingResult res;
    res.grouping = Grouping{best_labels};
    res.cost = assignment_cost(ev, best_labels, n, problem.config.group_penalty, &res.group_costs);
    res.nodes_expanded = leaves;
    return res;
}

GroupingResult solve_branch_and_bound(const GroupingProblem& problem) {
    const int n = static_cast<int>(problem.segments.size());
    if (n < 1) throw DegenerateInput("no segments to group");

    Evaluator ev(problem);
    GroupingResult res;

    if (n > 64) { // bitmask capacity; instances this large always exceed any budget
        res.grouping = greedy_grouping(ev, problem.config);
        res.cost = assignment_cost(ev, res.grouping.membership, n, problem.config.group_penalty,
                                   &res.group_costs);
        res.budget_fallback = true;
        return res;
    }

    Grouping incumbent = greedy_grouping(ev, problem.config);
    double incumbent_cost =
        assignment_cost(ev, incumbent.membership, n, problem.config.group_penalty);

    const double beta = problem.config.beta;
    std::vector<int> labels(n, 0);
    // Per open group: committed sums of the pairwise concavity and symmetry
    // terms. Group terms are pair sums, so the committed part never
    // decreases as the group grows and the bound stays admissible.
    std::vector<double> committed_conc(n + 1, 0.0);
    std::vector<double> committed_sym(n + 1, 0.0);
    long nodes = 0;
    bool aborted = false;

    auto dfs = [&](auto&& self, int i, int opened, double bound) -> void {
        if (aborted) return;
        if (i == n) {
            double c = assignment_cost(ev, labels, n, problem.config.group_penalty);
            if (c < incumbent_cost) {
                incumbent_cost = c;
                incumbent.membership = labels;
            }
            return;
        }
        for (int lab = 1; lab <= opened + 1 && !aborted; ++lab) {
            double child_bound;
            double saved_conc = committed_conc[lab];
            double saved_sym = committed_sym[lab];
            if (lab == opened + 1) {
                child_bound = bound + problem.config.group_penalty;
            } else {
                double new_conc = saved_conc;
                double new_sym = saved_sym;
                for (int j = 0; j < i; ++j) {
                    if (labels[j] != lab) continue;
                    new_conc += ev.pair_concavity_term(i, j);
                    new_sym += ev.pair_symmetry_term(i, j);
                }
                child_bound = bound - (saved_conc + beta * saved_sym) + new_conc + beta * new_sym;
                committed_conc[lab] = new_conc;
                committed_sym[lab] = new_sym;
            }
            // The slack keeps ulp-level rounding in the incremental bound
            // from pruning a path whose true cost ties the incumbent.
            if (child_bound < incumbent_cost + 1e-12) {
                if (++nodes > problem.config.node_budget) {
                    aborted = true;
                } else {
                    labels[i] = lab;
                    self(self, i + 1, std::max(opened, lab), child_bound);
                }
            }
            committed_conc[lab] = saved_conc;
            committed_sym[lab] = saved_sym;
        }
    };
    dfs(dfs, 0, 0, 0.0);

    res.grouping = incumbent;
    res.cost = assignment_cost(ev, incumbent.membership, n, problem.config.group_penalty,
                               &res.group_costs);
    res.nodes_expanded = nodes;
    res.budget_fallback = aborted;
    return res;
}

} // namespace ovseg
