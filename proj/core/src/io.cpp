#include "ovseg/io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ovseg/errors.hpp"

namespace ovseg {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GrayImage read_png(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str()))
        throw IoError("cannot read PNG " + path + ": " + img.message);
    img.format = PNG_FORMAT_GRAY;
    GrayImage out(static_cast<int>(img.width), static_cast<int>(img.height));
    if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
        png_image_free(&img);
        throw IoError("cannot decode PNG " + path + ": " + img.message);
    }
    return out;
}

void skip_pgm_whitespace(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") throw IoError("not a PGM file: " + path);
    skip_pgm_whitespace(in);
    int width = 0, height = 0, maxval = 0;
    in >> width;
    skip_pgm_whitespace(in);
    in >> height;
    skip_pgm_whitespace(in);
    in >> maxval;
    if (!in || width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
        throw IoError("unsupported PGM header in " + path);

    GrayImage out(width, height);
    if (magic == "P5") {
        in.get(); // single whitespace after maxval
        in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(out.pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(out.pixels.size()))
            throw IoError("truncated PGM data in " + path);
    } else {
        for (auto& px : out.pixels) {
            int v;
            in >> v;
            if (!in) throw IoError("truncated PGM data in " + path);
            px = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

json contour_to_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({round3(p.x), round3(p.y)});
    return arr;
}

std::vector<Point2> contour_from_json(const json& arr) {
    std::vector<Point2> pts;
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2) throw IoError("malformed point in contour");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

ImageDocument parse_one_document(const json& doc) {
    ImageDocument out;
    if (!doc.is_object() || !doc.contains("objects") || !doc.contains("concave_points"))
        throw IoError("document missing required fields");
    out.image = doc.value("image", "");
    out.width = doc.value("width", 0);
    out.height = doc.value("height", 0);
    for (const auto& obj : doc.at("objects"))
        out.object_contours.push_back(contour_from_json(obj.at("contour")));
    out.concave_points = contour_from_json(doc.at("concave_points"));
    return out;
}

} // namespace

GrayImage read_gray_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path);
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2')) return read_pgm(path);
    return read_png(path);
}

void write_gray_png(const std::string& path, const GrayImage& image) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width);
    img.height = static_cast<png_uint_32>(image.height);
    img.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels.data(), 0, nullptr))
        throw IoError("cannot write PNG " + path + ": " + img.message);
}

void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(width);
    img.height = static_cast<png_uint_32>(height);
    img.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&img, path.c_str(), 0, rgb.data(), 0, nullptr))
        throw IoError("cannot write PNG " + path + ": " + img.message);
}

PipelineConfig parse_pipeline_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
            if (blank) continue;
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

        try {
            if (key == "opening_radius") cfg.opening_radius = std::stoi(value);
            else if (key == "min_component_area") cfg.min_component_area = std::stoi(value);
            else if (key == "alpha") cfg.alpha = std::stod(value);
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "radial_min_factor") cfg.radial_min_factor = std::stod(value);
            else if (key == "radial_max_factor") cfg.radial_max_factor = std::stod(value);
            else if (key == "group_penalty") cfg.group_penalty = std::stod(value);
            else if (key == "bb_node_budget") cfg.bb_node_budget = std::stol(value);
            else if (key == "kernel") cfg.kernel.family = kernel_family_from_string(value);
            else if (key == "length_scale")
                cfg.kernel.length_scale = value == "auto" ? 0.0 : std::stod(value);
            else if (key == "noise_variance")
                cfg.kernel.noise_variance = value == "auto" ? -1.0 : std::stod(value);
            else if (key == "rq_alpha") cfg.kernel.rq_alpha = std::stod(value);
            else if (key == "n_samples") cfg.n_samples = std::stoi(value);
            else if (key == "rho1") cfg.rho1 = std::stod(value);
            else if (key == "jsc_threshold") cfg.jsc_threshold = std::stod(value);
            else throw ConfigError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("line " + std::to_string(line_no) + ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw ConfigError("line " + std::to_string(line_no) + ": value out of range for " + key);
        }
    }
    if (cfg.opening_radius < 0 || cfg.min_component_area < 0 || cfg.alpha < 0 || cfg.beta < 0 ||
        cfg.n_samples < 16 || cfg.rho1 <= 0 || cfg.jsc_threshold <= 0 || cfg.jsc_threshold > 1)
        throw ConfigError("config values out of range");
    return cfg;
}

PipelineConfig read_pipeline_config(const std::string& path) {
    return parse_pipeline_config_text(read_file(path));
}

std::string result_document_json(const std::string& image_name, const SegmentationResult& result,
                                 bool include_timings) {
    json doc;
    doc["image"] = image_name;
    doc["width"] = result.width;
    doc["height"] = result.height;
    json objs = json::array();
    for (const auto& obj : result.objects) {
        json o;
        o["id"] = obj.id;
        o["contour"] = contour_to_json(obj.contour.points);
        o["cost"] = {{"concavity", round3(obj.cost.concavity)},
                     {"ellipticity", round3(obj.cost.ellipticity)},
                     {"symmetry", round3(obj.cost.symmetry)},
                     {"total", round3(obj.cost.total)}};
        o["kernel"] = to_string(obj.kernel.family);
        o["length_scale"] = round3(obj.kernel.length_scale);
        objs.push_back(std::move(o));
    }
    doc["objects"] = std::move(objs);
    doc["concave_points"] = contour_to_json(result.concave_points);
    if (include_timings) {
        json t;
        for (const auto& [k, v] : result.timings_ms) t[k] = v;
        doc["timings_ms"] = std::move(t);
    }
    return doc.dump(2) + "\n";
}

static json ground_truth_document(const std::string& image_name, int width, int height,
                                  const GroundTruthImage& gt) {
    json doc;
    doc["image"] = image_name;
    doc["width"] = width;
    doc["height"] = height;
    json objs = json::array();
    for (const auto& obj : gt.objects) {
        json o;
        o["id"] = obj.id;
        o["contour"] = contour_to_json(obj.contour.points);
        o["ellipse"] = {{"cx", round3(obj.ellipse.center.x)},
                        {"cy", round3(obj.ellipse.center.y)},
                        {"semi_major", round3(obj.ellipse.semi_major)},
                        {"semi_minor", round3(obj.ellipse.semi_minor)},
                        {"rotation", round3(obj.ellipse.rotation)}};
        objs.push_back(std::move(o));
    }
    doc["objects"] = std::move(objs);
    doc["concave_points"] = contour_to_json(gt.concave_points);
    return doc;
}

std::string ground_truth_document_json(const std::string& image_name, int width, int height,
                                       const GroundTruthImage& gt) {
    return ground_truth_document(image_name, width, height, gt).dump(2) + "\n";
}

std::string subset_document_json(const SynthConfig& config,
                                 const std::vector<std::string>& image_names,
                                 const std::vector<GroundTruthImage>& gts) {
    json doc;
    doc["seed"] = config.seed;
    doc["max_overlap"] = config.max_overlap;
    doc["width"] = config.image_width;
    doc["height"] = config.image_height;
    json images = json::array();
    for (std::size_t i = 0; i < gts.size(); ++i)
        images.push_back(ground_truth_document(image_names[i], config.image_width,
                                               config.image_height, gts[i]));
    doc["images"] = std::move(images);
    return doc.dump(2) + "\n";
}

std::vector<ImageDocument> parse_image_documents(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
    std::vector<ImageDocument> out;
    try {
        if (doc.contains("images")) {
            for (const auto& img : doc.at("images")) out.push_back(parse_one_document(img));
        } else {
            out.push_back(parse_one_document(doc));
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("schema mismatch: ") + e.what());
    }
    return out;
}

std::vector<ImageDocument> read_image_documents(const std::string& path) {
    return parse_image_documents(read_file(path));
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

namespace {

void draw_line(std::vector<std::uint8_t>& rgb, int width, int height, Point2 a, Point2 b,
               std::uint8_t r, std::uint8_t g, std::uint8_t bl) {
    int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
    int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (x0 >= 0 && x0 < width && y0 >= 0 && y0 < height) {
            std::size_t idx = (static_cast<std::size_t>(y0) * width + x0) * 3;
            rgb[idx] = r;
            rgb[idx + 1] = g;
            rgb[idx + 2] = bl;
        }
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

constexpr std::uint8_t kPalette[][3] = {
    {230, 57, 70},  {29, 131, 72},   {33, 97, 199},  {211, 132, 0},
    {126, 48, 170}, {0, 150, 160},   {170, 51, 106}, {92, 109, 0},
    {200, 90, 160}, {60, 80, 220},
};

} // namespace

std::vector<std::uint8_t> render_overlay(const GrayImage& image, const SegmentationResult& result) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(image.width) * image.height * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        rgb[3 * i] = image.pixels[i];
        rgb[3 * i + 1] = image.pixels[i];
        rgb[3 * i + 2] = image.pixels[i];
    }
    for (std::size_t k = 0; k < result.objects.size(); ++k) {
        const auto& pal = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& pts = result.objects[k].contour.points;
        for (std::size_t i = 0; i < pts.size(); ++i)
            draw_line(rgb, image.width, image.height, pts[i], pts[(i + 1) % pts.size()], pal[0],
                      pal[1], pal[2]);
    }
    for (const Point2& p : result.concave_points) {
        draw_line(rgb, image.width, image.height, {p.x - 2, p.y}, {p.x + 2, p.y}, 255, 0, 0);
        draw_line(rgb, image.width, image.height, {p.x, p.y - 2}, {p.x, p.y + 2}, 255, 0, 0);
    }
    return rgb;
}

} // namespace ovseg
