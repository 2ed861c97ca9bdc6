#pragma once

#include <string>
#include <vector>

#include "ovseg/pipeline.hpp"
#include "ovseg/preprocess.hpp"
#include "ovseg/synth.hpp"

namespace ovseg {

/// Reads an 8-bit grayscale PNG or PGM (P2/P5), dispatching on the magic
/// bytes. Throws IoError on unreadable or malformed files.
GrayImage read_gray_image(const std::string& path);

void write_gray_png(const std::string& path, const GrayImage& image);

/// rgb is packed row-major RGB, 3 bytes per pixel.
void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

/// Parses the flat key = value pipeline config format. Unknown keys or
/// unparsable values raise ConfigError. Lines starting with '#' and blank
/// lines are ignored.
PipelineConfig parse_pipeline_config_text(const std::string& text);
PipelineConfig read_pipeline_config(const std::string& path);

/// One image's objects and concave points, the unit both ground truth and
/// predictions share.
struct ImageDocument {
    std::string image;
    int width = 0;
    int height = 0;
    std::vector<std::vector<Point2>> object_contours;
    std::vector<Point2> concave_points;
};

/// Serializes a segmentation result (contours, cost breakdowns, kernels,
/// concave points) with coordinates rounded to 3 decimals. Timings are
/// included only on request so repeated runs stay byte-identical.
std::string result_document_json(const std::string& image_name, const SegmentationResult& result,
                                 bool include_timings = false);

/// Serializes one ground-truth image (objects with ellipse parameters and
/// analytic contours, plus concave points).
std::string ground_truth_document_json(const std::string& image_name, int width, int height,
                                       const GroundTruthImage& gt);

/// Wraps per-image ground-truth documents into one subset document.
std::string subset_document_json(const SynthConfig& config,
                                 const std::vector<std::string>& image_names,
                                 const std::vector<GroundTruthImage>& gts);

/// Parses a JSON file holding either a single image document or a subset
/// document with an "images" array. Throws IoError on malformed JSON or a
/// schema mismatch.
std::vector<ImageDocument> parse_image_documents(const std::string& json_text);
std::vector<ImageDocument> read_image_documents(const std::string& path);

/// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Input image converted to RGB with estimated contours and concave points
/// drawn on top.
std::vector<std::uint8_t> render_overlay(const GrayImage& image, const SegmentationResult& result);

} // namespace ovseg
