#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ovseg {

/// 2-D point in pixel units.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline Point2 operator*(double s, Point2 a) { return a * s; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Perpendicular distance from p to the infinite line through a and b.
double point_line_distance(Point2 p, Point2 a, Point2 b);

/// Row-major boolean pixel grid. Pixel (x, y) covers the unit square
/// [x, x+1) x [y, y+1); its center is (x + 0.5, y + 0.5).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    /// Out-of-bounds coordinates read as background.
    bool at_clamped(int x, int y) const { return in_bounds(x, y) && at(x, y); }
    std::size_t count() const;

    bool operator==(const BinaryMask& other) const = default;
};

/// Closed boundary point sequence stored with positive shoelace area
/// (counter-clockwise under the shoelace sign convention). The last point
/// implicitly connects back to the first.
struct Contour {
    std::vector<Point2> points;

    /// Validates and normalizes orientation; reverses the sequence when the
    /// signed area is negative. Throws DegeneratePolygon on fewer than
    /// 3 points or consecutive duplicates.
    static Contour from_points(std::vector<Point2> pts);

    std::size_t size() const { return points.size(); }
    const Point2& operator[](std::size_t i) const { return points[i]; }
    /// Cyclic access.
    const Point2& at_wrapped(long i) const {
        long n = static_cast<long>(points.size());
        long m = ((i % n) + n) % n;
        return points[static_cast<std::size_t>(m)];
    }
    double area() const;
    /// Farthest point pair distance.
    double diameter() const;
};

/// Open, contiguous slice of a parent contour in traversal order.
struct ContourSegment {
    std::vector<Point2> points;
    int parent_component = 0;
    /// Index of the first point in the parent contour.
    int start_index = 0;
    /// Index of the last point in the parent contour (inclusive, wrapped).
    int end_index = 0;
};

/// Ellipse in geometric form. rotation is the angle of the major axis,
/// normalized to [0, pi).
struct Ellipse {
    Point2 center;
    double semi_major = 1.0;
    double semi_minor = 1.0;
    double rotation = 0.0;

    double area() const { return M_PI * semi_major * semi_minor; }
    /// Parametric boundary point at angle t in the ellipse frame.
    Point2 point_at(double t) const;
    bool contains(Point2 p) const;
    /// Shortest Euclidean distance from p to the ellipse boundary.
    double distance_to(Point2 p) const;
    /// Closed boundary polyline with n parametric samples.
    std::vector<Point2> polyline(int n) const;
};

/// Shoelace signed area of a closed polygon; positive for counter-clockwise
/// vertex order. Throws DegeneratePolygon for fewer than 3 points.
double signed_area(const std::vector<Point2>& polygon);

/// Convex hull (Andrew monotone chain), counter-clockwise, collinear
/// vertices dropped. Throws DegenerateInput when all points are collinear
/// or fewer than 3 points are given.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Scanline polygon fill over pixel centers: a pixel is set when its center
/// (x + 0.5, y + 0.5) is inside the polygon; centers exactly on an edge
/// follow the half-open scanline rule so ties resolve deterministically.
BinaryMask rasterize_polygon(const std::vector<Point2>& polygon, int width, int height);

/// Pixel-center raster of an ellipse interior (boundary inclusive).
BinaryMask rasterize_ellipse(const Ellipse& e, int width, int height);

/// Even-odd point-in-polygon test.
bool point_in_polygon(Point2 p, const std::vector<Point2>& polygon);

} // namespace ovseg
