// ovseg command line: segment, concave, gen-synth, eval.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ovseg/errors.hpp"
#include "ovseg/evaluation.hpp"
#include "ovseg/io.hpp"
#include "ovseg/pipeline.hpp"
#include "ovseg/synth.hpp"

namespace fs = std::filesystem;
using namespace ovseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    return read_pipeline_config(path);
}

int cmd_segment(const std::string& input, const std::string& out_json,
                const std::string& overlay, const std::string& config_path, bool timings) {
    PipelineConfig config;
    try {
        config = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    GrayImage image;
    try {
        image = read_gray_image(input);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        SegmentationResult result = segment_image(image, config);
        std::string name = fs::path(input).filename().string();
        write_file_atomic(out_json, result_document_json(name, result, timings));
        if (!overlay.empty())
            write_rgb_png(overlay, image.width, image.height, render_overlay(image, result));
    } catch (const Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

int cmd_concave(const std::string& input, const std::string& out_json,
                const std::string& config_path) {
    PipelineConfig config;
    try {
        config = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    GrayImage image;
    try {
        image = read_gray_image(input);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        SegmentationResult result;
        result.width = image.width;
        result.height = image.height;
        result.concave_points = detect_image_concave_points(image, config);
        std::string name = fs::path(input).filename().string();
        write_file_atomic(out_json, result_document_json(name, result, false));
    } catch (const Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

int cmd_gen_synth(const std::string& out_dir, double overlap, int images, int objects,
                  std::uint64_t seed, bool unsafe) {
    const double allowed[] = {0.40, 0.50, 0.60};
    bool supported = false;
    for (double a : allowed) supported = supported || std::abs(overlap - a) < 1e-9;
    if (!supported && !unsafe) {
        std::cerr << "validation error: overlap must be one of 0.40, 0.50, 0.60 "
                     "(pass --unsafe to override)\n";
        return kExitConfig;
    }
    if (images <= 0 || objects <= 0) {
        std::cerr << "validation error: images and objects must be positive\n";
        return kExitConfig;
    }

    SynthConfig config;
    config.max_overlap = overlap;
    config.images_per_subset = images;
    config.objects_per_image = objects;
    config.seed = seed;

    try {
        fs::create_directories(out_dir);
        auto subset = generate_subset(config);
        std::vector<std::string> names;
        std::vector<GroundTruthImage> gts;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "img_%03zu.png", i);
            names.emplace_back(buf);
            write_gray_png((fs::path(out_dir) / buf).string(), subset[i].first);
            gts.push_back(std::move(subset[i].second));
        }
        write_file_atomic((fs::path(out_dir) / "ground_truth.json").string(),
                          subset_document_json(config, names, gts));
    } catch (const Error& e) {
        std::cerr << "generation error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

std::vector<ImageDocument> load_documents(const std::string& path) {
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.path().extension() == ".json") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        std::vector<ImageDocument> docs;
        for (const auto& f : files) {
            auto d = read_image_documents(f);
            docs.insert(docs.end(), d.begin(), d.end());
        }
        return docs;
    }
    return read_image_documents(path);
}

struct PooledScores {
    long tp = 0, fp = 0, fn = 0;
    double sum = 0.0; // distances (points) or JSC (objects)
    long matched = 0;

    void add(const DetectionScores& s, double mean_metric) {
        tp += s.tp;
        fp += s.fp;
        fn += s.fn;
        sum += mean_metric * s.tp;
        matched += s.tp;
    }
    double tpr() const { return tp + fn == 0 ? 1.0 : double(tp) / (tp + fn); }
    double ppv() const { return tp + fp == 0 ? 1.0 : double(tp) / (tp + fp); }
    double acc() const { return tp + fp + fn == 0 ? 1.0 : double(tp) / (tp + fp + fn); }
    double mean() const { return matched == 0 ? 0.0 : sum / matched; }
};

int cmd_eval(const std::string& pred_path, const std::string& gt_path, double dist_threshold,
             double jsc_threshold, const std::string& out_json, bool sweep) {
    std::vector<ImageDocument> pred, gt;
    try {
        pred = load_documents(pred_path);
        gt = load_documents(gt_path);
    } catch (const IoError& e) {
        std::cerr << "eval error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::map<std::string, const ImageDocument*> gt_by_name;
    for (const auto& d : gt) gt_by_name[fs::path(d.image).filename().string()] = &d;

    std::vector<std::pair<const ImageDocument*, const ImageDocument*>> pairs;
    if (pred.size() == 1 && gt.size() == 1) {
        pairs.emplace_back(&pred[0], &gt[0]);
    } else {
        for (const auto& d : pred) {
            auto it = gt_by_name.find(fs::path(d.image).filename().string());
            if (it == gt_by_name.end()) {
                std::cerr << "eval error: no ground truth for image " << d.image << "\n";
                return kExitConfig;
            }
            pairs.emplace_back(&d, it->second);
        }
    }

    MatchConfig cfg;
    cfg.dist_threshold_rho1 = dist_threshold;
    cfg.jsc_threshold = jsc_threshold;

    PooledScores points, objects;
    try {
        for (auto [p, g] : pairs) {
            DetectionScores ps = point_detection_scores(p->concave_points, g->concave_points,
                                                        cfg.dist_threshold_rho1);
            points.add(ps, ps.ad);

            int w = p->width > 0 ? p->width : g->width;
            int h = p->height > 0 ? p->height : g->height;
            if (w <= 0 || h <= 0) {
                std::cerr << "eval error: documents carry no canvas dimensions\n";
                return kExitConfig;
            }
            std::vector<BinaryMask> pm, gm;
            for (const auto& c : p->object_contours) pm.push_back(rasterize_polygon(c, w, h));
            for (const auto& c : g->object_contours) gm.push_back(rasterize_polygon(c, w, h));
            DetectionScores os = segmentation_scores(pm, gm, cfg);
            objects.add(os, os.ajsc);
        }
    } catch (const Error& e) {
        std::cerr << "eval error: " << e.what() << "\n";
        return kExitInternal;
    }

    std::printf("measure            TPR     PPV     ACC     AD/AJSC\n");
    std::printf("concave_points  %6.3f  %6.3f  %6.3f  %9.3f\n", points.tpr(), points.ppv(),
                points.acc(), points.mean());
    std::printf("segmentation    %6.3f  %6.3f  %6.3f  %9.3f\n", objects.tpr(), objects.ppv(),
                objects.acc(), objects.mean());

    if (sweep) {
        std::printf("\njsc_threshold sweep (segmentation TP count)\n");
        for (double t = 0.30; t <= 0.951; t += 0.05) {
            MatchConfig sc = cfg;
            sc.jsc_threshold = t;
            long tp = 0;
            for (auto [p, g] : pairs) {
                int w = p->width > 0 ? p->width : g->width;
                int h = p->height > 0 ? p->height : g->height;
                std::vector<BinaryMask> pm, gm;
                for (const auto& c : p->object_contours) pm.push_back(rasterize_polygon(c, w, h));
                for (const auto& c : g->object_contours) gm.push_back(rasterize_polygon(c, w, h));
                tp += segmentation_scores(pm, gm, sc).tp;
            }
            std::printf("  %.2f  %ld\n", t, tp);
        }
    }

    if (!out_json.empty()) {
        char buf[1024];
        std::snprintf(buf, sizeof(buf),
                      "{\n"
                      "  \"concave_points\": {\"tp\": %ld, \"fp\": %ld, \"fn\": %ld, "
                      "\"tpr\": %.6f, \"ppv\": %.6f, \"acc\": %.6f, \"ad\": %.6f},\n"
                      "  \"segmentation\": {\"tp\": %ld, \"fp\": %ld, \"fn\": %ld, "
                      "\"tpr\": %.6f, \"ppv\": %.6f, \"acc\": %.6f, \"ajsc\": %.6f}\n"
                      "}\n",
                      points.tp, points.fp, points.fn, points.tpr(), points.ppv(), points.acc(),
                      points.mean(), objects.tp, objects.fp, objects.fn, objects.tpr(),
                      objects.ppv(), objects.acc(), objects.mean());
        try {
            write_file_atomic(out_json, buf);
        } catch (const Error& e) {
            std::cerr << "eval error: " << e.what() << "\n";
            return kExitInternal;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segmentation of partially overlapping convex objects in silhouette images"};
    app.require_subcommand(1);

    // segment
    auto* segment = app.add_subcommand("segment", "Segment one image and write a result document");
    std::string seg_input, seg_out, seg_overlay, seg_config;
    bool seg_timings = false;
    segment->add_option("--input", seg_input, "Grayscale PNG or PGM")->required();
    segment->add_option("--out-json", seg_out, "Result JSON path")->required();
    segment->add_option("--overlay", seg_overlay, "Optional overlay PNG path");
    segment->add_option("--config", seg_config, "Pipeline config file");
    segment->add_flag("--timings", seg_timings, "Include stage timings in the JSON");

    // concave
    auto* concave = app.add_subcommand("concave", "Detect concave points only");
    std::string con_input, con_out, con_config;
    concave->add_option("--input", con_input, "Grayscale PNG or PGM")->required();
    concave->add_option("--out-json", con_out, "Output JSON path")->required();
    concave->add_option("--config", con_config, "Pipeline config file");

    // gen-synth
    auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic benchmark subset");
    std::string gen_dir;
    double gen_overlap = 0.40;
    int gen_images = 50, gen_objects = 40;
    std::uint64_t gen_seed = 1;
    bool gen_unsafe = false;
    gen->add_option("--out-dir", gen_dir, "Output directory")->required();
    gen->add_option("--overlap", gen_overlap, "Maximum pairwise overlap (0.40, 0.50 or 0.60)");
    gen->add_option("--images", gen_images, "Images per subset");
    gen->add_option("--objects", gen_objects, "Objects per image");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_flag("--unsafe", gen_unsafe, "Allow overlap values outside the supported set");

    // eval
    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    std::string eval_pred, eval_gt, eval_out;
    double eval_dist = 10.0, eval_jsc = 0.6;
    bool eval_sweep = false;
    eval->add_option("--pred", eval_pred, "Prediction JSON file or directory")->required();
    eval->add_option("--gt", eval_gt, "Ground truth JSON file or directory")->required();
    eval->add_option("--dist-threshold", eval_dist, "Concave point match distance (px)");
    eval->add_option("--jsc-threshold", eval_jsc, "JSC threshold for object matches");
    eval->add_option("--out-json", eval_out, "Machine readable metrics path");
    eval->add_flag("--sweep", eval_sweep, "Print a JSC threshold sweep");

    CLI11_PARSE(app, argc, argv);

    if (segment->parsed())
        return cmd_segment(seg_input, seg_out, seg_overlay, seg_config, seg_timings);
    if (concave->parsed()) return cmd_concave(con_input, con_out, con_config);
    if (gen->parsed())
        return cmd_gen_synth(gen_dir, gen_overlap, gen_images, gen_objects, gen_seed, gen_unsafe);
    if (eval->parsed())
        return cmd_eval(eval_pred, eval_gt, eval_dist, eval_jsc, eval_out, eval_sweep);
    return kExitConfig;
}
