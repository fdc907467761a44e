#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sidkit/attention.hpp"
#include "sidkit/canny.hpp"
#include "sidkit/eval.hpp"
#include "sidkit/fmap.hpp"
#include "sidkit/pipeline.hpp"
#include "sidkit/pts.hpp"
#include "sidkit/synth.hpp"
#include "sidkit/toy_trainer.hpp"

namespace fs = std::filesystem;
using namespace sidkit;

namespace {

// Exit taxonomy: 2 bad input, 3 shape mismatch, 4 empty centroids.
constexpr int kExitBadInput = 2;
constexpr int kExitShapeMismatch = 3;
constexpr int kExitEmptyCentroids = 4;

GrayImage gray_from_fmap(const DenseMap& map) {
    if (map.channels() == 3)
        return to_gray(map);
    if (map.channels() == 1) {
        GrayImage img(map.height(), map.width());
        for (int y = 0; y < map.height(); ++y)
            for (int x = 0; x < map.width(); ++x) {
                const float v = map.at(y, x);
                if (!(v >= 0.0f && v <= 1.0f))
                    throw ValueError("single-channel image values must lie in [0,1]");
                img.at(y, x) = static_cast<std::uint8_t>(std::lround(255.0f * v));
            }
        return img;
    }
    throw ValueError("expected a 1- or 3-channel image map");
}

std::vector<ShapeSpec> parse_shapes(const std::vector<std::string>& disks,
                                    const std::vector<std::string>& rects) {
    auto split = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(std::stod(item));
        return out;
    };
    std::vector<ShapeSpec> shapes;
    for (const std::string& d : disks) {
        const std::vector<double> v = split(d);
        if (v.size() != 4)
            throw ValueError("--disk wants cy,cx,radius,intensity");
        shapes.push_back({ShapeKind::Disk, static_cast<int>(v[0]), static_cast<int>(v[1]),
                          static_cast<int>(v[2]), 0, v[3]});
    }
    for (const std::string& r : rects) {
        const std::vector<double> v = split(r);
        if (v.size() != 5)
            throw ValueError("--rect wants cy,cx,height,width,intensity");
        shapes.push_back({ShapeKind::Rectangle, static_cast<int>(v[0]), static_cast<int>(v[1]),
                          static_cast<int>(v[2]), static_cast<int>(v[3]), v[4]});
    }
    return shapes;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << text;
}

DenseMap avgpool2(const DenseMap& in) {
    const int oh = std::max(1, in.height() / 2);
    const int ow = std::max(1, in.width() / 2);
    DenseMap out(oh, ow, in.channels());
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x)
            for (int c = 0; c < in.channels(); ++c) {
                double acc = 0.0;
                int cnt = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const int sy = 2 * y + dy, sx = 2 * x + dx;
                        if (sy < in.height() && sx < in.width()) {
                            acc += in.at(sy, sx, c);
                            ++cnt;
                        }
                    }
                out.at(y, x, c) = static_cast<float>(acc / cnt);
            }
    return out;
}

// Smoke-test pyramid: five downsampled copies of the image pushed through
// seeded 1x1 convs to widening channel counts.
FeaturePyramid pyramid_from_image(const DenseMap& image, std::uint64_t seed) {
    const std::array<int, 5> channels = {8, 16, 32, 64, 128};
    std::array<DenseMap, 5> levels;
    DenseMap current = image;
    for (int k = 0; k < 5; ++k) {
        const Conv2d proj = Conv2d::seeded(seed * 77 + static_cast<std::uint64_t>(k), 3,
                                           channels[static_cast<std::size_t>(k)], 1, 1);
        levels[static_cast<std::size_t>(k)] = proj.apply(current);
        if (k < 4)
            current = avgpool2(current);
    }
    return make_pyramid(std::move(levels));
}

struct SynthArgs {
    std::string out_dir;
    std::uint64_t seed = 0;
    int height = 48, width = 48;
    int min_shapes = 1, max_shapes = 4;
    double texture = 0.0;
    std::vector<std::string> disks, rects;
};

int run_synth(const SynthArgs& a) {
    SceneSpec spec;
    const std::vector<ShapeSpec> explicit_shapes = parse_shapes(a.disks, a.rects);
    if (!explicit_shapes.empty()) {
        spec.height = a.height;
        spec.width = a.width;
        spec.seed = a.seed;
        spec.texture = a.texture;
        spec.shapes = explicit_shapes;
    } else {
        spec = random_scene(a.seed, a.height, a.width, a.min_shapes, a.max_shapes, a.texture);
    }
    const SceneBundle bundle = generate(spec);

    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    save_map(bundle.image, dir / "image.fmap");
    save_map(bundle.saliency, dir / "saliency.fmap");
    save_map(bundle.boundary, dir / "boundary.fmap");
    save_offsets(bundle.offsets, dir / "offsets.fmap");
    save_labels(bundle.labels, dir / "labels.fmap");

    std::ostringstream manifest;
    manifest << "height " << spec.height << "\n";
    manifest << "width " << spec.width << "\n";
    manifest << "seed " << spec.seed << "\n";
    manifest << "texture " << spec.texture << "\n";
    manifest << "count " << bundle.count << "\n";
    for (std::size_t k = 0; k < spec.shapes.size(); ++k) {
        const ShapeSpec& s = spec.shapes[k];
        manifest << "shape " << (k + 1) << " "
                 << (s.kind == ShapeKind::Disk ? "disk " : "rect ") << s.center_y << " "
                 << s.center_x << " " << s.size_a << " " << s.size_b << " " << s.intensity
                 << "\n";
    }
    for (const char* f : {"image", "saliency", "boundary", "offsets", "labels"})
        manifest << "file " << f << " " << f << ".fmap\n";
    write_text(dir / "manifest.txt", manifest.str());

    std::cout << "wrote scene with " << bundle.count << " shapes to " << dir.string() << "\n";
    return 0;
}

struct CannyArgs {
    std::string in, out;
    double low = -1.0, high = -1.0, sigma = 1.4;
};

int run_canny(const CannyArgs& a) {
    const DenseMap input = load_map(a.in);
    const GrayImage gray = gray_from_fmap(input);
    CannyConfig cfg;
    if (a.low >= 0.0 || a.high >= 0.0) {
        if (a.low < 0.0 || a.high < 0.0)
            throw ValueError("manual thresholds need both --low and --high");
        cfg = CannyConfig::manual(a.low, a.high, a.sigma);
    } else {
        cfg = CannyConfig::automatic(a.sigma);
    }
    const auto [lo, hi] = canny_thresholds(gray, cfg);
    const DenseMap edges = canny(gray, cfg);
    save_map(edges, a.out);
    long long count = 0;
    for (float v : edges.data())
        count += v > 0.5f;
    std::cout << "thresholds " << lo << " " << hi << "\n";
    std::cout << "edge_pixels " << count << "\n";
    return 0;
}

struct ForwardArgs {
    std::string unit, in, prefix = "forward_";
    std::uint64_t seed = 0;
};

int run_forward(const ForwardArgs& a) {
    const DenseMap image = load_map(a.in);
    if (image.channels() != 3)
        throw ValueError("forward wants a 3-channel image map");

    auto write = [&](const std::string& name, const DenseMap& m) {
        const fs::path p = a.prefix + name + ".fmap";
        save_map(m, p);
        std::cout << name << " " << m.height() << "x" << m.width() << "x" << m.channels()
                  << " -> " << p.string() << "\n";
    };

    if (a.unit == "cfm" || a.unit == "ma" || a.unit == "boundary") {
        const FeaturePyramid pyr = pyramid_from_image(image, a.seed);
        std::array<int, 5> chans{};
        for (int k = 0; k < 5; ++k)
            chans[static_cast<std::size_t>(k)] = pyr.levels[static_cast<std::size_t>(k)].channels();
        const CfmWeights cw = CfmWeights::seeded(a.seed + 1, chans);
        const FeaturePyramid mixed = cfm_forward(pyr, cw);
        if (a.unit == "cfm") {
            for (int k = 0; k < 5; ++k)
                write("cfm_l" + std::to_string(k + 1), mixed.levels[static_cast<std::size_t>(k)]);
            return 0;
        }
        std::array<DenseMap, 5> refined;
        for (int k = 0; k < 5; ++k) {
            const MaWeights mw = MaWeights::seeded(a.seed + 10 + static_cast<std::uint64_t>(k), 256);
            refined[static_cast<std::size_t>(k)] =
                ma_forward(mixed.levels[static_cast<std::size_t>(k)], mw);
        }
        if (a.unit == "ma") {
            for (int k = 0; k < 5; ++k)
                write("ma_l" + std::to_string(k + 1), refined[static_cast<std::size_t>(k)]);
            return 0;
        }
        const DenseMap edges = canny(to_gray(image), CannyConfig::automatic());
        const BeWeights bw = BeWeights::seeded(a.seed + 2);
        const auto [fb1, fb2] = be_forward(image, edges, bw);
        const Conv2d head =
            Conv2d::seeded(a.seed + 3, 5 * 256 + fb1.channels() + fb2.channels(), 1, 1, 1);
        write("boundary", boundary_map_forward(FeaturePyramid{std::move(refined)}, fb1, fb2, head));
        return 0;
    }
    if (a.unit == "be") {
        const DenseMap edges = canny(to_gray(image), CannyConfig::automatic());
        const BeWeights bw = BeWeights::seeded(a.seed + 2);
        const auto [fb1, fb2] = be_forward(image, edges, bw);
        write("be_fb1", fb1);
        write("be_fb2", fb2);
        return 0;
    }
    throw ValueError("unknown forward unit: " + a.unit);
}

struct AssembleArgs {
    std::string saliency, boundary, offsets, out;
    std::string summary, scores, config;
    PipelineConfig cfg;
};

int run_assemble(const AssembleArgs& a, const CLI::App* cmd) {
    PipelineConfig cfg;
    if (!a.config.empty())
        cfg = PipelineConfig::load(a.config);
    // Explicit flags override the file.
    if (cmd->count("--theta"))
        cfg.theta = a.cfg.theta;
    if (cmd->count("--eps"))
        cfg.eps = a.cfg.eps;
    if (cmd->count("--max-iters"))
        cfg.max_iters = a.cfg.max_iters;
    if (cmd->count("--radius"))
        cfg.radius = a.cfg.radius;
    if (cmd->count("--chi"))
        cfg.chi = a.cfg.chi;
    if (cmd->count("--steps"))
        cfg.steps = a.cfg.steps;
    cfg.validate();

    const DenseMap saliency = load_map(a.saliency);
    const DenseMap boundary = load_map(a.boundary);
    const OffsetField offsets = load_offsets(a.offsets);

    const AssembleResult result = assemble(saliency, boundary, offsets, cfg);
    save_labels(result.labels, a.out);

    std::ostringstream summary;
    summary << "count " << result.count << "\n";
    for (int i = 0; i < result.count; ++i)
        summary << "instance " << (i + 1) << " area " << result.areas[static_cast<std::size_t>(i)]
                << " score " << result.scores[static_cast<std::size_t>(i)] << "\n";
    std::cout << summary.str();
    if (!a.summary.empty())
        write_text(a.summary, summary.str());
    if (!a.scores.empty()) {
        std::ostringstream scores;
        for (int i = 0; i < result.count; ++i)
            scores << (i + 1) << " " << result.scores[static_cast<std::size_t>(i)] << "\n";
        write_text(a.scores, scores.str());
    }
    return 0;
}

struct CrfArgs {
    std::string prob, image, out;
    CrfConfig cfg;
};

int run_crf(const CrfArgs& a) {
    const DenseMap prob_in = load_map(a.prob);
    const DenseMap prob = prob_in.channels() == 1 ? unary_from_saliency(prob_in) : prob_in;
    const DenseMap image = load_map(a.image);

    DenseMap refined = image.channels() == 3 ? crf_refine(prob, image, a.cfg)
                                             : crf_refine(prob, gray_from_fmap(image), a.cfg);
    save_map(refined, a.out);
    std::cout << "refined " << refined.height() << "x" << refined.width() << "x2 -> " << a.out
              << "\n";
    return 0;
}

struct PtsArgs {
    std::uint64_t seed = 0;
    int iterations = 6;
    int epochs = 8;
    std::string out;
};

int run_pts_cmd(const PtsArgs& a) {
    const ToyPtsScene scene = make_toy_pts_scene(a.seed);
    ToyTrainer trainer(scene.images);

    PtsConfig cfg;
    cfg.iterations = a.iterations;
    cfg.epochs = a.epochs;

    std::ostringstream records;
    records << "# iteration alpha loss accuracy\n";
    const PtsObserver observer = [&](const PtsObservation& obs) {
        double loss = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < obs.predictions->size(); ++i) {
            const DenseMap& p = (*obs.predictions)[i];
            const DenseMap& t = (*obs.trained_labels)[i];
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double d = static_cast<double>(p.data()[k]) - t.data()[k];
                loss += d * d;
                ++n;
            }
        }
        loss /= static_cast<double>(n);
        const double acc = pixel_accuracy(*obs.predictions, scene.clean);
        records << obs.r << " " << obs.alpha << " " << loss << " " << acc << "\n";
    };

    run_pts(scene.noisy, ToyTrainer::initial_params(), trainer, scene.images, scene.crf, cfg,
            observer);
    std::cout << records.str();
    if (!a.out.empty())
        write_text(a.out, records.str());
    return 0;
}

struct EvalArgs {
    std::vector<std::string> preds, gts, scores, saliencies;
    std::vector<double> taus;
    std::string mode = "pooled";
    std::string out;
};

std::vector<double> read_scores(const fs::path& path, int count) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scores " + path.string());
    std::vector<double> scores(static_cast<std::size_t>(count), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(count), false);
    int id = 0;
    double score = 0.0;
    while (in >> id >> score) {
        if (id < 1 || id > count)
            throw ValueError("scores: id " + std::to_string(id) + " out of range");
        scores[static_cast<std::size_t>(id) - 1] = score;
        seen[static_cast<std::size_t>(id) - 1] = true;
    }
    for (int i = 0; i < count; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw ValueError("scores: missing entry for instance " + std::to_string(i + 1));
    return scores;
}

int run_eval(const EvalArgs& a) {
    if (a.preds.size() != a.gts.size() || a.preds.empty())
        throw ValueError("eval: need matching --pred/--gt lists");
    const bool use_scores = !a.scores.empty();
    const bool use_saliency = !a.saliencies.empty();
    if (use_scores == use_saliency)
        throw ValueError("eval: give exactly one of --scores or --saliency per image");
    if ((use_scores && a.scores.size() != a.preds.size()) ||
        (use_saliency && a.saliencies.size() != a.preds.size()))
        throw ValueError("eval: sidecar count must match --pred count");

    std::vector<ImageDetections> images;
    for (std::size_t i = 0; i < a.preds.size(); ++i) {
        ImageDetections det;
        const InstanceLabelMap pred = load_labels(a.preds[i]);
        const InstanceLabelMap gt = load_labels(a.gts[i]);
        if (pred.height() != gt.height() || pred.width() != gt.width())
            throw ShapeError("eval: pred/gt grids disagree for image " + std::to_string(i));
        det.gts = masks_from_labels(gt);
        std::vector<PixelMask> pred_masks = masks_from_labels(pred);
        std::vector<double> scores;
        if (use_scores) {
            scores = read_scores(a.scores[i], pred.count());
        } else {
            const DenseMap sal = load_map(a.saliencies[i]);
            for (const PixelMask& m : pred_masks)
                scores.push_back(mean_saliency_score(m, sal));
        }
        for (std::size_t k = 0; k < pred_masks.size(); ++k)
            det.preds.push_back({std::move(pred_masks[k]), scores[k]});
        images.push_back(std::move(det));
    }

    const EvalMode mode = a.mode == "per-image" ? EvalMode::PerImage : EvalMode::Pooled;
    std::vector<double> taus = a.taus;
    if (taus.empty())
        taus = {0.5, 0.7};
    const EvalReport report = evaluate(images, taus, mode);

    std::ostringstream text;
    text << "mode " << (mode == EvalMode::Pooled ? "pooled" : "per-image") << "\n";
    text << "images " << images.size() << "\n";
    for (const auto& [tau, value] : report.map_at)
        text << "map tau " << tau << " " << value << "\n";
    for (const auto& [tau, aps] : report.ap_per_image)
        for (std::size_t i = 0; i < aps.size(); ++i)
            text << "ap image " << i << " tau " << tau << " " << aps[i] << "\n";
    std::cout << text.str();
    if (!a.out.empty())
        write_text(a.out, text.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Salient-instance detection toolkit: offset-field clustering, "
                 "boundary random walk, CRF refinement, attention forwards, a "
                 "progressive-training harness and mask mAP evaluation over FMAP files"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic ground-truth scene");
    synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_args.seed, "Scene seed")->capture_default_str();
    synth_cmd->add_option("--height", synth_args.height, "Scene height")->capture_default_str();
    synth_cmd->add_option("--width", synth_args.width, "Scene width")->capture_default_str();
    synth_cmd->add_option("--min-shapes", synth_args.min_shapes, "Minimum shape count")
        ->capture_default_str();
    synth_cmd->add_option("--max-shapes", synth_args.max_shapes, "Maximum shape count")
        ->capture_default_str();
    synth_cmd->add_option("--texture", synth_args.texture, "Image jitter amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--disk", synth_args.disks, "Explicit disk cy,cx,radius,intensity");
    synth_cmd->add_option("--rect", synth_args.rects,
                          "Explicit rectangle cy,cx,height,width,intensity");

    CannyArgs canny_args;
    CLI::App* canny_cmd =
        app.add_subcommand("canny", "Edge detection with auto or manual thresholds");
    canny_cmd->add_option("--in", canny_args.in, "Input image FMAP (1 or 3 channels)")->required();
    canny_cmd->add_option("--out", canny_args.out, "Output edge FMAP")->required();
    canny_cmd->add_option("--low", canny_args.low, "Manual low threshold (0..255)");
    canny_cmd->add_option("--high", canny_args.high, "Manual high threshold (0..255)");
    canny_cmd->add_option("--sigma", canny_args.sigma, "Gaussian sigma")->capture_default_str();

    ForwardArgs forward_args;
    CLI::App* forward_cmd = app.add_subcommand("forward", "Seeded module forward passes");
    forward_cmd->add_option("--unit", forward_args.unit, "One of cfm, ma, be, boundary")
        ->required()
        ->check(CLI::IsMember({"cfm", "ma", "be", "boundary"}));
    forward_cmd->add_option("--in", forward_args.in, "Input 3-channel image FMAP")->required();
    forward_cmd->add_option("--out-prefix", forward_args.prefix, "Output file prefix")
        ->capture_default_str();
    forward_cmd->add_option("--seed", forward_args.seed, "Weight seed")->capture_default_str();

    AssembleArgs assemble_args;
    CLI::App* assemble_cmd =
        app.add_subcommand("assemble", "Saliency + boundary + offsets -> instance labels");
    assemble_cmd->add_option("--saliency", assemble_args.saliency, "Saliency FMAP")->required();
    assemble_cmd->add_option("--boundary", assemble_args.boundary, "Boundary FMAP")->required();
    assemble_cmd->add_option("--offsets", assemble_args.offsets, "Offset field FMAP (2 channels)")
        ->required();
    assemble_cmd->add_option("--out", assemble_args.out, "Output label FMAP")->required();
    assemble_cmd->add_option("--summary", assemble_args.summary, "Write a text summary here");
    assemble_cmd->add_option("--scores", assemble_args.scores, "Write an `id score` sidecar here");
    assemble_cmd->add_option("--config", assemble_args.config, "key=value config file");
    assemble_cmd->add_option("--theta", assemble_args.cfg.theta, "Salient-overlap threshold")
        ->capture_default_str();
    assemble_cmd->add_option("--eps", assemble_args.cfg.eps, "Fixed-point tolerance (px)")
        ->capture_default_str();
    assemble_cmd->add_option("--max-iters", assemble_args.cfg.max_iters, "Chase iteration cap")
        ->capture_default_str();
    assemble_cmd->add_option("--radius", assemble_args.cfg.radius, "Affinity radius (px)")
        ->capture_default_str();
    assemble_cmd->add_option("--chi", assemble_args.cfg.chi, "Affinity power")
        ->capture_default_str();
    assemble_cmd->add_option("--steps", assemble_args.cfg.steps, "Random-walk steps")
        ->capture_default_str();

    CrfArgs crf_args;
    CLI::App* crf_cmd = app.add_subcommand("crf", "Mean-field CRF refinement");
    crf_cmd->add_option("--prob", crf_args.prob, "Probability FMAP (1 or 2 channels)")->required();
    crf_cmd->add_option("--image", crf_args.image, "Image FMAP (1 or 3 channels)")->required();
    crf_cmd->add_option("--out", crf_args.out, "Output 2-channel FMAP")->required();
    crf_cmd->add_option("--w1", crf_args.cfg.w1, "Appearance kernel weight")->capture_default_str();
    crf_cmd->add_option("--w2", crf_args.cfg.w2, "Smoothness kernel weight")->capture_default_str();
    crf_cmd->add_option("--sa", crf_args.cfg.sigma_alpha, "Appearance spatial sigma")
        ->capture_default_str();
    crf_cmd->add_option("--sb", crf_args.cfg.sigma_beta, "Appearance color sigma")
        ->capture_default_str();
    crf_cmd->add_option("--sg", crf_args.cfg.sigma_gamma, "Smoothness spatial sigma")
        ->capture_default_str();
    crf_cmd->add_option("--iters", crf_args.cfg.iterations, "Mean-field iterations")
        ->capture_default_str();

    PtsArgs pts_args;
    CLI::App* pts_cmd =
        app.add_subcommand("pts", "Progressive-training loop on the built-in toy scene");
    pts_cmd->add_option("--seed", pts_args.seed, "Scene seed")->capture_default_str();
    pts_cmd->add_option("--iterations", pts_args.iterations, "Training iterations R")
        ->capture_default_str();
    pts_cmd->add_option("--epochs", pts_args.epochs, "Epochs per iteration E")
        ->capture_default_str();
    pts_cmd->add_option("--out", pts_args.out, "Also write the records here");

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Mask-level mAP evaluation");
    eval_cmd->add_option("--pred", eval_args.preds, "Prediction label FMAP (repeatable)")
        ->required();
    eval_cmd->add_option("--gt", eval_args.gts, "Ground-truth label FMAP (repeatable)")->required();
    eval_cmd->add_option("--scores", eval_args.scores, "Score sidecar, one `id score` per line");
    eval_cmd->add_option("--saliency", eval_args.saliencies,
                         "Saliency FMAP for mean-saliency scores");
    eval_cmd->add_option("--tau", eval_args.taus, "IoU threshold (repeatable; default 0.5 0.7)");
    eval_cmd->add_option("--mode", eval_args.mode, "pooled or per-image")
        ->check(CLI::IsMember({"pooled", "per-image"}))
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_args.out, "Also write the report here");

    try {
        app.parse(argc, argv);
        if (synth_cmd->parsed())
            return run_synth(synth_args);
        if (canny_cmd->parsed())
            return run_canny(canny_args);
        if (forward_cmd->parsed())
            return run_forward(forward_args);
        if (assemble_cmd->parsed())
            return run_assemble(assemble_args, assemble_cmd);
        if (crf_cmd->parsed())
            return run_crf(crf_args);
        if (pts_cmd->parsed())
            return run_pts_cmd(pts_args);
        if (eval_cmd->parsed())
            return run_eval(eval_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const EmptyCentroids& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyCentroids;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShapeMismatch;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
