#include "ovseg/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "ovseg/errors.hpp"

namespace ovseg {

PointMatching match_points(const std::vector<Point2>& detected,
                           const std::vector<Point2>& truth, double rho1) {
    struct Cand {
        double d;
        int di, ti;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < static_cast<int>(detected.size()); ++i)
        for (int j = 0; j < static_cast<int>(truth.size()); ++j) {
            double d = distance(detected[i], truth[j]);
            if (d <= rho1) cands.push_back({d, i, j});
        }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.d < b.d; });

    std::vector<char> used_d(detected.size(), 0), used_t(truth.size(), 0);
    PointMatching m;
    for (const auto& c : cands) {
        if (used_d[c.di] || used_t[c.ti]) continue;
        used_d[c.di] = used_t[c.ti] = 1;
        m.pairs.emplace_back(c.di, c.ti);
        m.distances.push_back(c.d);
    }
    return m;
}

static void fill_rates(DetectionScores& s) {
    s.tpr = (s.tp + s.fn) == 0 ? 1.0 : static_cast<double>(s.tp) / (s.tp + s.fn);
    s.ppv = (s.tp + s.fp) == 0 ? 1.0 : static_cast<double>(s.tp) / (s.tp + s.fp);
    s.acc = (s.tp + s.fp + s.fn) == 0 ? 1.0 : static_cast<double>(s.tp) / (s.tp + s.fp + s.fn);
}

DetectionScores point_detection_scores(const std::vector<Point2>& detected,
                                       const std::vector<Point2>& truth, double rho1) {
    PointMatching m = match_points(detected, truth, rho1);
    DetectionScores s;
    s.tp = static_cast<long>(m.pairs.size());
    s.fp = static_cast<long>(detected.size()) - s.tp;
    s.fn = static_cast<long>(truth.size()) - s.tp;
    fill_rates(s);
    if (!m.distances.empty()) {
        double acc = 0.0;
        for (double d : m.distances) acc += d;
        s.ad = acc / static_cast<double>(m.distances.size());
    }
    return s;
}

double jsc(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("mask dimensions differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        bool av = a.bits[i] != 0, bv = b.bits[i] != 0;
        inter += av && bv;
        uni += av || bv;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

DetectionScores segmentation_scores(const std::vector<BinaryMask>& predicted,
                                    const std::vector<BinaryMask>& truth,
                                    const MatchConfig& cfg) {
    struct Cand {
        double j;
        int pi, ti;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < static_cast<int>(predicted.size()); ++i)
        for (int j = 0; j < static_cast<int>(truth.size()); ++j) {
            double v = jsc(predicted[i], truth[j]);
            if (v >= cfg.jsc_threshold) cands.push_back({v, i, j});
        }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.j > b.j; });

    std::vector<char> used_p(predicted.size(), 0), used_t(truth.size(), 0);
    DetectionScores s;
    double jsc_sum = 0.0;
    for (const auto& c : cands) {
        if (used_p[c.pi] || used_t[c.ti]) continue;
        used_p[c.pi] = used_t[c.ti] = 1;
        ++s.tp;
        jsc_sum += c.j;
    }
    s.fp = static_cast<long>(predicted.size()) - s.tp;
    s.fn = static_cast<long>(truth.size()) - s.tp;
    fill_rates(s);
    if (s.tp > 0) s.ajsc = jsc_sum / static_cast<double>(s.tp);
    return s;
}

} // namespace ovseg
