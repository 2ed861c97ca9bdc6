#include "ovseg/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "ovseg/errors.hpp"

namespace ovseg {

double point_line_distance(Point2 p, Point2 a, Point2 b) {
    Point2 d = b - a;
    double len = norm(d);
    if (len == 0.0) return distance(p, a);
    return std::abs(cross(d, p - a)) / len;
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::accumulate(bits.begin(), bits.end(), std::size_t{0}));
}

Contour Contour::from_points(std::vector<Point2> pts) {
    if (pts.size() < 3) throw DegeneratePolygon("contour needs at least 3 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % pts.size()];
        if (a.x == b.x && a.y == b.y)
            throw DegeneratePolygon("contour has consecutive duplicate points");
    }
    double a = signed_area(pts);
    if (a == 0.0) throw DegeneratePolygon("contour has zero area");
    if (a < 0.0) std::reverse(pts.begin(), pts.end());
    Contour c;
    c.points = std::move(pts);
    return c;
}

double Contour::area() const { return signed_area(points); }

double Contour::diameter() const {
    // Quadratic scan over hull vertices; contours here are small.
    std::vector<Point2> hull;
    try {
        hull = convex_hull(points);
    } catch (const DegenerateInput&) {
        hull = points;
    }
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, distance(hull[i], hull[j]));
    return best;
}

Point2 Ellipse::point_at(double t) const {
    double c = std::cos(rotation), s = std::sin(rotation);
    double px = semi_major * std::cos(t);
    double py = semi_minor * std::sin(t);
    return {center.x + c * px - s * py, center.y + s * px + c * py};
}

bool Ellipse::contains(Point2 p) const {
    double c = std::cos(rotation), s = std::sin(rotation);
    double dx = p.x - center.x, dy = p.y - center.y;
    double u = (c * dx + s * dy) / semi_major;
    double v = (-s * dx + c * dy) / semi_minor;
    return u * u + v * v <= 1.0;
}

std::vector<Point2> Ellipse::polyline(int n) const {
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back(point_at(2.0 * M_PI * i / n));
    return pts;
}

// Robust point-to-ellipse distance on the first-quadrant canonical frame,
// bisecting F(t) = (a*px/(t+a^2))^2 + (b*py/(t+b^2))^2 - 1 over its
// monotone range.
static double canonical_ellipse_distance(double a, double b, double px, double py) {
    const double eps = 1e-12;
    if (py < eps) {
        double ax = a * a - b * b;
        if (a * px < ax) {
            double x0 = a * a * px / ax;
            double y0 = b * std::sqrt(std::max(0.0, 1.0 - (x0 / a) * (x0 / a)));
            return std::hypot(x0 - px, y0);
        }
        return std::abs(px - a);
    }
    if (px < eps) return std::abs(py - b);

    double t0 = -b * b + b * py;
    double t1 = -b * b + std::hypot(a * px, b * py);
    auto f = [&](double t) {
        double u = a * px / (t + a * a);
        double v = b * py / (t + b * b);
        return u * u + v * v - 1.0;
    };
    for (int i = 0; i < 200; ++i) {
        double tm = 0.5 * (t0 + t1);
        if (tm == t0 || tm == t1) break;
        (f(tm) > 0.0 ? t0 : t1) = tm;
    }
    double t = 0.5 * (t0 + t1);
    double x0 = a * a * px / (t + a * a);
    double y0 = b * b * py / (t + b * b);
    return std::hypot(x0 - px, y0 - py);
}

double Ellipse::distance_to(Point2 p) const {
    double c = std::cos(rotation), s = std::sin(rotation);
    double dx = p.x - center.x, dy = p.y - center.y;
    double u = c * dx + s * dy;
    double v = -s * dx + c * dy;
    return canonical_ellipse_distance(semi_major, semi_minor, std::abs(u), std::abs(v));
}

double signed_area(const std::vector<Point2>& polygon) {
    if (polygon.size() < 3) throw DegeneratePolygon("polygon needs at least 3 points");
    double acc = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % polygon.size()];
        acc += cross(a, b);
    }
    return 0.5 * acc;
}

std::vector<Point2> convex_hull(std::vector<Point2> points) {
    if (points.size() < 3) throw DegenerateInput("hull needs at least 3 points");
    std::sort(points.begin(), points.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
                 points.end());

    std::size_t n = points.size();
    if (n < 3) throw DegenerateInput("hull needs at least 3 distinct points");

    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateInput("all points collinear");
    return hull;
}

BinaryMask rasterize_polygon(const std::vector<Point2>& polygon, int width, int height) {
    if (polygon.size() < 3) throw DegeneratePolygon("polygon needs at least 3 points");
    if (width <= 0 || height <= 0) throw DegeneratePolygon("canvas dimensions must be positive");

    BinaryMask mask(width, height);
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        double cy = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < polygon.size(); ++i) {
            Point2 a = polygon[i];
            Point2 b = polygon[(i + 1) % polygon.size()];
            // Half-open edge rule in y: [min, max) so shared vertices count once.
            if ((a.y <= cy && b.y > cy) || (b.y <= cy && a.y > cy)) {
                double t = (cy - a.y) / (b.y - a.y);
                xs.push_back(a.x + t * (b.x - a.x));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            int x0 = static_cast<int>(std::ceil(xs[i] - 0.5));
            int x1 = static_cast<int>(std::ceil(xs[i + 1] - 0.5)); // exclusive
            x0 = std::max(x0, 0);
            x1 = std::min(x1, width);
            for (int x = x0; x < x1; ++x) mask.set(x, y);
        }
    }
    return mask;
}

BinaryMask rasterize_ellipse(const Ellipse& e, int width, int height) {
    BinaryMask mask(width, height);
    double r = std::max(e.semi_major, e.semi_minor);
    int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - r - 1.0)));
    int x1 = std::min(width - 1, static_cast<int>(std::ceil(e.center.x + r + 1.0)));
    int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - r - 1.0)));
    int y1 = std::min(height - 1, static_cast<int>(std::ceil(e.center.y + r + 1.0)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (e.contains({x + 0.5, y + 0.5})) mask.set(x, y);
    return mask;
}

bool point_in_polygon(Point2 p, const std::vector<Point2>& polygon) {
    bool inside = false;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        Point2 a = polygon[i];
        Point2 b = polygon[(i + 1) % polygon.size()];
        if ((a.y <= p.y && b.y > p.y) || (b.y <= p.y && a.y > p.y)) {
            double t = (p.y - a.y) / (b.y - a.y);
            if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
        }
    }
    return inside;
}

} // namespace ovseg
