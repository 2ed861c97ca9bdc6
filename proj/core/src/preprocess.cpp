#include "ovseg/preprocess.hpp"

#include <array>
#include <deque>

#include "ovseg/errors.hpp"

namespace ovseg {

int otsu_threshold(const GrayImage& image) {
    if (image.width <= 0 || image.height <= 0) throw NoSeparation("empty image");

    std::array<std::uint64_t, 256> hist{};
    for (std::uint8_t v : image.pixels) hist[v]++;

    int occupied = 0;
    for (auto h : hist)
        if (h > 0) ++occupied;
    if (occupied <= 1) throw NoSeparation("histogram has a single occupied bin");

    const double total = static_cast<double>(image.pixels.size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

    double w0 = 0.0, sum0 = 0.0;
    double best_var = -1.0;
    int best_level = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += static_cast<double>(hist[t]);
        sum0 += static_cast<double>(t) * hist[t];
        double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        double mu0 = sum0 / w0;
        double mu1 = (sum_all - sum0) / w1;
        double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_level = t;
        }
    }
    return best_level;
}

BinaryMask binarize(const GrayImage& image, int level) {
    BinaryMask mask(image.width, image.height);
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        mask.bits[i] = image.pixels[i] <= level ? 1 : 0;
    return mask;
}

static std::vector<std::pair<int, int>> disc_offsets(int radius) {
    std::vector<std::pair<int, int>> offs;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offs.emplace_back(dx, dy);
    return offs;
}

static BinaryMask erode(const BinaryMask& mask, const std::vector<std::pair<int, int>>& se) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            bool all = true;
            for (auto [dx, dy] : se) {
                if (!mask.at_clamped(x + dx, y + dy)) {
                    all = false;
                    break;
                }
            }
            if (all) out.set(x, y);
        }
    return out;
}

static BinaryMask dilate_se(const BinaryMask& mask, const std::vector<std::pair<int, int>>& se) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (auto [dx, dy] : se) {
                int nx = x + dx, ny = y + dy;
                if (mask.in_bounds(nx, ny)) out.set(nx, ny);
            }
        }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    return dilate_se(mask, disc_offsets(radius));
}

BinaryMask morphological_open(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    auto se = disc_offsets(radius);
    return dilate_se(erode(mask, se), se);
}

std::vector<Point2> trace_boundary(const BinaryMask& mask) {
    // Crack following along the pixel edges between foreground and
    // background, keeping foreground on the inside of the walk. Each emitted
    // point is a foreground pixel center whose crossed edge faces a
    // 4-neighbor outside the region.
    int sx = -1, sy = -1;
    for (int y = 0; y < mask.height && sx < 0; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                sx = x;
                sy = y;
                break;
            }
    if (sx < 0) return {};

    enum Dir { R = 0, D = 1, L = 2, U = 3 };
    int px = sx, py = sy;
    Dir dir = R; // top edge of the start pixel is a boundary crack
    std::vector<Point2> out;

    auto fg = [&](int x, int y) { return mask.at_clamped(x, y); };
    auto emit = [&](int x, int y) {
        Point2 p{x + 0.5, y + 0.5};
        if (out.empty() || out.back().x != p.x || out.back().y != p.y) out.push_back(p);
    };

    const int start_px = px, start_py = py;
    const Dir start_dir = dir;
    do {
        emit(px, py);
        switch (dir) {
            case R: // along top edge of (px,py)
                if (fg(px + 1, py - 1)) {
                    px += 1; py -= 1; dir = U;
                } else if (fg(px + 1, py)) {
                    px += 1;
                } else {
                    dir = D;
                }
                break;
            case D: // along right edge of (px,py)
                if (fg(px + 1, py + 1)) {
                    px += 1; py += 1; dir = R;
                } else if (fg(px, py + 1)) {
                    py += 1;
                } else {
                    dir = L;
                }
                break;
            case L: // along bottom edge of (px,py)
                if (fg(px - 1, py + 1)) {
                    px -= 1; py += 1; dir = D;
                } else if (fg(px - 1, py)) {
                    px -= 1;
                } else {
                    dir = U;
                }
                break;
            case U: // along left edge of (px,py)
                if (fg(px - 1, py - 1)) {
                    px -= 1; py -= 1; dir = L;
                } else if (fg(px, py - 1)) {
                    py -= 1;
                } else {
                    dir = R;
                }
                break;
        }
    } while (!(px == start_px && py == start_py && dir == start_dir));

    if (out.size() > 1 && out.front().x == out.back().x && out.front().y == out.back().y)
        out.pop_back();
    return out;
}

std::vector<Component> connected_components(const BinaryMask& mask, int min_area) {
    std::vector<int> label(mask.bits.size(), 0);
    std::vector<Component> components;
    int next_id = 0;

    for (int y0 = 0; y0 < mask.height; ++y0) {
        for (int x0 = 0; x0 < mask.width; ++x0) {
            std::size_t idx0 = static_cast<std::size_t>(y0) * mask.width + x0;
            if (!mask.bits[idx0] || label[idx0]) continue;

            ++next_id;
            std::deque<std::pair<int, int>> queue{{x0, y0}};
            label[idx0] = next_id;
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
            std::vector<std::pair<int, int>> pixels;

            while (!queue.empty()) {
                auto [x, y] = queue.front();
                queue.pop_front();
                pixels.emplace_back(x, y);
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                static constexpr int nbr[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (auto [dx, dy] : nbr) {
                    int nx = x + dx, ny = y + dy;
                    if (!mask.in_bounds(nx, ny)) continue;
                    std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
                    if (mask.bits[nidx] && !label[nidx]) {
                        label[nidx] = next_id;
                        queue.emplace_back(nx, ny);
                    }
                }
            }

            if (static_cast<int>(pixels.size()) < min_area) continue;

            Component comp;
            comp.id = static_cast<int>(components.size());
            comp.offset = {static_cast<double>(min_x), static_cast<double>(min_y)};
            comp.mask = BinaryMask(max_x - min_x + 1, max_y - min_y + 1);
            for (auto [x, y] : pixels) comp.mask.set(x - min_x, y - min_y);

            std::vector<Point2> boundary = trace_boundary(comp.mask);
            if (boundary.size() < 3) continue;
            for (Point2& p : boundary) p = p + comp.offset;
            try {
                comp.contour = Contour::from_points(std::move(boundary));
            } catch (const DegeneratePolygon&) {
                continue; // 1-px-thin region, no usable boundary
            }
            components.push_back(std::move(comp));
        }
    }
    return components;
}

} // namespace ovseg
