#pragma once

#include <cstdint>
#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }
};

/// One 4-connected foreground region with its local mask and traced outer
/// boundary. The mask lives in a tight bounding box; offset maps local pixel
/// (0,0) to global pixel coordinates. The contour is stored in global
/// pixel-center coordinates.
struct Component {
    int id = 0;
    BinaryMask mask;
    Point2 offset;
    Contour contour;
};

/// Threshold level in [0, 255] maximizing between-class variance of the
/// intensity histogram; ties break toward the lower level. Throws
/// NoSeparation when the histogram occupies a single bin.
int otsu_threshold(const GrayImage& image);

/// Foreground = pixels with intensity <= level (dark objects on light
/// background).
BinaryMask binarize(const GrayImage& image, int level);

/// Erosion followed by dilation with a disc structuring element
/// {(dx,dy) : dx^2+dy^2 <= radius^2}. radius 0 is the identity.
BinaryMask morphological_open(const BinaryMask& mask, int radius);

/// Disc dilation only (exposed for tests).
BinaryMask dilate(const BinaryMask& mask, int radius);

/// 4-connected components with traced outer boundaries. Components smaller
/// than min_area pixels (or whose boundary degenerates below 3 points) are
/// discarded.
std::vector<Component> connected_components(const BinaryMask& mask, int min_area = 100);

/// Outer boundary of the single 4-connected region in mask, as an ordered
/// closed sequence of boundary pixel centers. Every returned point is the
/// center of a foreground pixel that has a 4-neighbor outside the region.
std::vector<Point2> trace_boundary(const BinaryMask& mask);

} // namespace ovseg
