#pragma once

// Shared builders and independent oracles for the test suites. Oracles here
// must stay independent of the library code paths they check: brute-force
// enumeration, dense sampling, direct formula evaluation.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ovseg/geometry.hpp"
#include "ovseg/preprocess.hpp"

namespace testutil {

using ovseg::BinaryMask;
using ovseg::Contour;
using ovseg::Ellipse;
using ovseg::GrayImage;
using ovseg::Point2;

// ---------------------------------------------------------------- rng

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double a, double b) {
        return a + (b - a) * ((eng_() >> 11) * 0x1.0p-53);
    }
    int uniform_int(int a, int b) { // inclusive
        return a + static_cast<int>(eng_() % static_cast<std::uint64_t>(b - a + 1));
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------- shapes

inline std::vector<Point2> circle_points(Point2 c, double r, int n, double t0 = 0.0,
                                         double span = 2.0 * M_PI) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        double t = t0 + span * i / n;
        pts.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return pts;
}

inline GrayImage render_discs(const std::vector<std::pair<Point2, double>>& discs, int w, int h) {
    GrayImage img(w, h, 255);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            Point2 p{x + 0.5, y + 0.5};
            for (const auto& [c, r] : discs)
                if (ovseg::distance(p, c) <= r) {
                    img.set(x, y, 0);
                    break;
                }
        }
    return img;
}

// Traced outer contour of a rendered shape (threshold at 128, no opening).
inline Contour traced_contour(const GrayImage& img) {
    BinaryMask mask = ovseg::binarize(img, 128);
    auto comps = ovseg::connected_components(mask, 1);
    return comps.at(0).contour;
}

// Random simple (star-shaped) polygon around a center.
inline std::vector<Point2> random_star_polygon(Rng& rng, int n, double rmin, double rmax) {
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, 2.0 * M_PI));
    std::sort(angles.begin(), angles.end());
    std::vector<Point2> pts;
    for (double a : angles) {
        double r = rng.uniform(rmin, rmax);
        pts.push_back({200.0 + r * std::cos(a), 150.0 + r * std::sin(a)});
    }
    return pts;
}

// ---------------------------------------------------------------- oracles

// Monte-Carlo polygon area with a test-local even-odd ray cast.
inline double mc_polygon_area(const std::vector<Point2>& poly, std::uint64_t seed,
                              int samples = 400000) {
    double minx = 1e18, maxx = -1e18, miny = 1e18, maxy = -1e18;
    for (const auto& p : poly) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    auto inside = [&](Point2 q) {
        bool in = false;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Point2 a = poly[i], b = poly[(i + 1) % poly.size()];
            if ((a.y <= q.y && b.y > q.y) || (b.y <= q.y && a.y > q.y)) {
                double t = (q.y - a.y) / (b.y - a.y);
                if (q.x < a.x + t * (b.x - a.x)) in = !in;
            }
        }
        return in;
    };
    Rng rng(seed);
    long hits = 0;
    for (int i = 0; i < samples; ++i)
        if (inside({rng.uniform(minx, maxx), rng.uniform(miny, maxy)})) ++hits;
    return (maxx - minx) * (maxy - miny) * hits / samples;
}

// O(n^3) hull: a directed pair (i, j) is a hull edge iff every other point
// lies strictly left of it.
inline std::vector<Point2> brute_force_hull(const std::vector<Point2>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool edge = true;
            for (int k = 0; k < n && edge; ++k) {
                if (k == i || k == j) continue;
                double c = ovseg::cross(pts[j] - pts[i], pts[k] - pts[i]);
                if (c <= 0.0) edge = false;
            }
            if (edge) edges.emplace_back(i, j);
        }
    if (edges.empty()) return {};
    std::vector<Point2> hull;
    int start = edges.front().first;
    int cur = start;
    for (std::size_t step = 0; step < edges.size(); ++step) {
        hull.push_back(pts[cur]);
        for (auto [a, b] : edges)
            if (a == cur) {
                cur = b;
                break;
            }
        if (cur == start) break;
    }
    return hull;
}

// Direct between-class variance for the Otsu oracle.
inline int brute_force_otsu(const std::vector<std::uint64_t>& hist) {
    double total = 0, sum_all = 0;
    for (int i = 0; i < 256; ++i) {
        total += static_cast<double>(hist[i]);
        sum_all += static_cast<double>(i) * hist[i];
    }
    double best = -1;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        double w0 = 0, s0 = 0;
        for (int i = 0; i <= t; ++i) {
            w0 += static_cast<double>(hist[i]);
            s0 += static_cast<double>(i) * hist[i];
        }
        double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        double mu0 = s0 / w0, mu1 = (sum_all - s0) / w1;
        double v = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

// Modified Bessel function of the second kind via the integral
// representation K_v(x) = int_0^inf exp(-x cosh t) cosh(v t) dt (Simpson).
inline double bessel_k_numeric(double v, double x) {
    double t_max = std::acosh(750.0 / x + 1.0) + 5.0;
    const int n = 200001; // odd
    double h = t_max / (n - 1);
    auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(v * t); };
    double acc = f(0.0) + f(t_max);
    for (int i = 1; i < n - 1; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Matern covariance in the Bessel form of the general definition.
inline double matern_bessel(double nu, double d, double l) {
    if (d == 0.0) return 1.0;
    double u = std::sqrt(2.0 * nu) * d / l;
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(u, nu) * bessel_k_numeric(nu, u);
}

// Dense linear solve by Gaussian elimination with partial pivoting.
inline std::vector<double> gaussian_solve(std::vector<std::vector<double>> a,
                                          std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

// Point-to-ellipse distance by dense parametric sampling plus golden
// section refinement.
inline double ellipse_distance_oracle(const Ellipse& e, Point2 p) {
    const int coarse = 4096;
    double best_t = 0, best_d = 1e18;
    for (int i = 0; i < coarse; ++i) {
        double t = 2.0 * M_PI * i / coarse;
        double d = ovseg::distance(e.point_at(t), p);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    double lo = best_t - 2.0 * M_PI / coarse, hi = best_t + 2.0 * M_PI / coarse;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d2 = lo + phi * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        if (ovseg::distance(e.point_at(c), p) < ovseg::distance(e.point_at(d2), p)) {
            hi = d2;
        } else {
            lo = c;
        }
        c = hi - phi * (hi - lo);
        d2 = lo + phi * (hi - lo);
    }
    return ovseg::distance(e.point_at(0.5 * (lo + hi)), p);
}

// Area of the intersection lens of two circles with equal radius r at
// center distance d.
inline double circle_lens_area(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
}

} // namespace testutil
