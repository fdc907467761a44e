// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "sidkit/attention.hpp"
#include "sidkit/canny.hpp"
#include "sidkit/centroid.hpp"
#include "sidkit/crf.hpp"
#include "sidkit/eval.hpp"
#include "sidkit/pipeline.hpp"
#include "sidkit/pts.hpp"
#include "sidkit/random_walk.hpp"
#include "sidkit/synth.hpp"
#include "sidkit/toy_trainer.hpp"
#include "support/reference.hpp"

using namespace sidkit;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d %-28s %s  (%s)\n", id, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass)
        ++failures;
}

OffsetField random_field(std::mt19937_64& gen, int h, int w, double span) {
    std::vector<OffsetField::Vec> vecs(static_cast<std::size_t>(h) * w);
    for (auto& v : vecs) {
        v.dy = static_cast<float>((refimpl::urand(gen) * 2 - 1) * span);
        v.dx = static_cast<float>((refimpl::urand(gen) * 2 - 1) * span);
    }
    return OffsetField(h, w, std::move(vecs));
}

// 1. Offset-clustering oracle on 200 seeded random 8x8 fields.
void criterion_offset_clustering() {
    Timer timer;
    const double eps = 0.5;
    long long pixels_checked = 0, mismatches = 0, drifted = 0;
    int fields_with_centroids = 0;

    std::mt19937_64 gen(1001);
    for (int trial = 0; trial < 200; ++trial) {
        const ChaseResult chased = chase_offsets(random_field(gen, 8, 8, 8.0), 100, eps);
        const CentroidSet set = extract_centroids(chased.field, eps);

        if (!set.empty()) {
            ++fields_with_centroids;
            const InstanceLabelMap assigned = assign_pixels(chased.field, set);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const auto& v = chased.field.at(y, x);
                    double best = 1e300;
                    std::int32_t best_id = 0;
                    for (std::size_t n = 0; n < set.points.size(); ++n) {
                        const double dy = y + static_cast<double>(v.dy) - set.points[n].y;
                        const double dx = x + static_cast<double>(v.dx) - set.points[n].x;
                        const double d2 = dy * dy + dx * dx;
                        if (d2 < best) {
                            best = d2;
                            best_id = static_cast<std::int32_t>(n) + 1;
                        }
                    }
                    ++pixels_checked;
                    if (assigned.at(y, x) != best_id)
                        ++mismatches;
                }
        }

        if (chased.all_converged) {
            const ChaseResult again = chase_offsets(chased.field, 100, eps);
            for (std::size_t i = 0; i < chased.field.pixels(); ++i) {
                const double dy = again.field.vectors()[i].dy - chased.field.vectors()[i].dy;
                const double dx = again.field.vectors()[i].dx - chased.field.vectors()[i].dx;
                if (std::hypot(dy, dx) > eps)
                    ++drifted;
            }
        }
    }

    const double secs = timer.seconds();
    const bool pass =
        mismatches == 0 && drifted == 0 && pixels_checked > 0 && secs < 5.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%lld pixels vs exhaustive search, %lld mismatches, %lld drifted, "
                  "%d/200 fields had centroids, %.2fs",
                  pixels_checked, mismatches, drifted, fields_with_centroids, secs);
    report(1, "offset-clustering-oracle", pass, detail);
}

// 2. Subitizing loss and gradient identities.
void criterion_subitizing() {
    std::mt19937_64 gen(1002);
    bool pass = true;

    for (int trial = 0; trial < 50; ++trial) {
        const int t_star = static_cast<int>(gen() % 12);
        const int t = static_cast<int>(gen() % 12);
        const long long d = t_star - t;
        if (subitizing_loss(t_star, t) != static_cast<double>(d * d))
            pass = false;
    }

    for (int trial = 0; trial < 50; ++trial) {
        const int t_star = static_cast<int>(gen() % 6);
        const int t = static_cast<int>(gen() % 6);
        std::vector<float> sal(64);
        for (float& v : sal)
            v = gen() % 3 == 0 ? 1.0f : 0.0f;
        const DenseMap saliency = DenseMap::probability(8, 8, 1, sal);
        const InstanceLabelMap inst = InstanceLabelMap::background(8, 8);
        const SubitizingGradient g = subitizing_gradient(inst, saliency, t_star, t);

        int k = 0;
        for (float v : sal)
            k += v >= 0.5f;
        if (g.salient_count != k)
            pass = false;

        bool all_zero = true;
        for (std::size_t i = 0; i < g.dy.size(); ++i)
            if (g.dy[i] != 0.0 || g.dx[i] != 0.0)
                all_zero = false;
        if (all_zero != (t_star == t || k == 0))
            pass = false;

        const double expect = (t_star == t || k == 0) ? 0.0 : 2.0 * std::abs(t_star - t) / k;
        for (std::size_t i = 0; i < sal.size(); ++i) {
            if (sal[i] >= 0.5f) {
                if (std::abs(std::abs(g.dy[i]) - expect) > 1e-12 ||
                    std::abs(std::abs(g.dx[i]) - expect) > 1e-12)
                    pass = false;
            } else if (g.dy[i] != 0.0 || g.dx[i] != 0.0) {
                pass = false;
            }
        }
    }
    report(2, "subitizing-loss-gradient", pass, "50 loss pairs + 50 gradient fields");
}

// 3. Sparse random walk against the dense matrix-power reference.
void criterion_random_walk() {
    std::mt19937_64 gen(1003);
    double max_diff = 0.0;
    double worst_row = 0.0;
    double max_cross_wall = 0.0;
    bool pass = true;

    for (int trial = 0; trial < 50; ++trial) {
        const int h = 6 + static_cast<int>(gen() % 7); // up to 12
        const int w = 6 + static_cast<int>(gen() % 7);
        const refimpl::RandomScene scene = refimpl::random_walk_scene(gen, h, w, false);
        if (scene.labels.count() == 0)
            continue;
        const int radius = 2 + static_cast<int>(gen() % 3);
        const int chi = 1 + static_cast<int>(gen() % 4);
        const int steps = 1 + static_cast<int>(gen() % 8);

        const AffinityOperator op = build_affinity(scene.boundary, radius, chi);
        for (double s : op.transition_row_sums())
            worst_row = std::max(worst_row, std::abs(s - 1.0));

        const refimpl::DenseWalk ref = refimpl::dense_walk_reference(scene.boundary, radius, chi);
        for (int id = 1; id <= scene.labels.count(); ++id) {
            const std::vector<double> seed =
                walk_seed(scene.labels, id, scene.boundary, scene.saliency);
            const std::vector<double> sparse = op.propagate(seed, steps);
            const std::vector<double> dense = refimpl::dense_propagate(ref, seed, steps);
            for (std::size_t i = 0; i < sparse.size(); ++i)
                max_diff = std::max(max_diff, std::abs(sparse[i] - dense[i]));
        }
    }

    // Walls: boundary 1 outside the instance masks blocks every crossing.
    for (int trial = 0; trial < 10; ++trial) {
        const refimpl::RandomScene scene = refimpl::random_walk_scene(gen, 10, 10, true);
        if (scene.labels.count() < 2)
            continue;
        const AffinityOperator op = build_affinity(scene.boundary, 4, 4);
        for (int id = 1; id <= scene.labels.count(); ++id) {
            const std::vector<double> out =
                op.propagate(walk_seed(scene.labels, id, scene.boundary, scene.saliency), 16);
            for (std::size_t i = 0; i < out.size(); ++i)
                if (scene.labels.labels()[i] != id)
                    max_cross_wall = std::max(max_cross_wall, out[i]);
        }
    }

    pass = max_diff <= 1e-8 && worst_row <= 1e-9 && max_cross_wall <= 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max |sparse-dense| %.2e, row-sum drift %.2e, cross-wall %.2e", max_diff,
                  worst_row, max_cross_wall);
    report(3, "random-walk-correctness", pass, detail);
}

// 4. End-to-end synthetic accuracy over 100 seeded scenes.
void criterion_end_to_end() {
    Timer timer;
    int exact_count = 0, scenes = 0;
    std::vector<ImageDetections> detections;

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SceneSpec spec = random_scene(seed, 40, 40, 1, 4);
        if (spec.shapes.empty())
            continue;
        const SceneBundle bundle = generate(spec);
        ++scenes;

        const AssembleResult res =
            assemble(bundle.saliency, bundle.boundary, bundle.offsets, PipelineConfig{});
        if (res.count == bundle.count)
            ++exact_count;

        ImageDetections det;
        det.gts = masks_from_labels(bundle.labels);
        std::vector<PixelMask> pred_masks = masks_from_labels(res.labels);
        for (std::size_t k = 0; k < pred_masks.size(); ++k)
            det.preds.push_back({std::move(pred_masks[k]), res.scores[k]});
        detections.push_back(std::move(det));
    }

    const EvalReport report_eval = evaluate(detections, {0.5, 0.7}, EvalMode::Pooled);
    const double map50 = report_eval.map_at.at(0.5);
    const double map70 = report_eval.map_at.at(0.7);
    const double secs = timer.seconds();
    const double exact_ratio = static_cast<double>(exact_count) / scenes;

    const bool pass =
        scenes == 100 && exact_ratio >= 0.95 && map50 >= 0.9 && map70 >= 0.8 && secs < 60.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "T*=T on %d/%d scenes, mAP@0.5 %.4f, mAP@0.7 %.4f, %.1fs", exact_count,
                  scenes, map50, map70, secs);
    report(4, "end-to-end-synthetic", pass, detail);
}

// 5. CRF properties at the stock kernel settings.
void criterion_crf() {
    bool pass = true;
    CrfConfig cfg; // w1=4, w2=3, sigma_alpha=49, sigma_beta=5, sigma_gamma=3

    GrayImage uniform(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x)
            uniform.at(y, x) = 90;
    std::vector<float> unanimous(6 * 6 * 2);
    for (std::size_t i = 0; i < 36; ++i) {
        unanimous[2 * i] = 0.0f;
        unanimous[2 * i + 1] = 1.0f;
    }
    for (int iters = 1; iters <= 5; ++iters) {
        cfg.iterations = iters;
        const DenseMap out = crf_refine(DenseMap(6, 6, 2, unanimous), uniform, cfg);
        for (std::size_t i = 0; i < 36; ++i)
            if (out.data()[2 * i] != 0.0f || out.data()[2 * i + 1] != 1.0f)
                pass = false;
    }

    GrayImage split(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            split.at(y, x) = x < 4 ? 0 : 255;
    std::mt19937_64 gen(1005);
    std::vector<float> noisy(8 * 8 * 2);
    for (std::size_t i = 0; i < 64; ++i) {
        const float fg = static_cast<float>(gen() % 256) / 255.0f;
        noisy[2 * i] = 1.0f - fg;
        noisy[2 * i + 1] = fg;
    }
    double worst_row = 0.0;
    for (int iters = 1; iters <= 5; ++iters) {
        cfg.iterations = iters;
        const DenseMap out = crf_refine(DenseMap(8, 8, 2, noisy), split, cfg);
        for (std::size_t i = 0; i < 64; ++i) {
            const double sum = static_cast<double>(out.data()[2 * i]) + out.data()[2 * i + 1];
            worst_row = std::max(worst_row, std::abs(sum - 1.0));
        }
    }
    if (worst_row > 1e-6)
        pass = false;

    std::vector<float> dyadic(8 * 8 * 2);
    for (std::size_t i = 0; i < 64; ++i) {
        const float fg = static_cast<float>(gen() % 257) / 256.0f;
        dyadic[2 * i] = 1.0f - fg;
        dyadic[2 * i + 1] = fg;
    }
    cfg = CrfConfig{};
    cfg.w1 = 0.0;
    cfg.w2 = 0.0;
    const DenseMap through = crf_refine(DenseMap(8, 8, 2, dyadic), split, cfg);
    if (std::memcmp(through.data().data(), dyadic.data(), dyadic.size() * 4) != 0)
        pass = false;

    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "unanimous fixed point exact, row drift %.2e, zero-weight pass-through exact",
                  worst_row);
    report(5, "crf-properties", pass, detail);
}

// 6. Progressive-training harness.
void criterion_pts() {
    bool pass = true;

    const ParamVector prev{{1.0, -2.0, 0.5}, 1};
    const ParamVector curr{{0.25, 0.75, -0.125}, 2};
    const ParamVector a0 = ema_refresh(prev, curr, 0.0);
    const ParamVector a1 = ema_refresh(prev, curr, 1.0);
    if (std::memcmp(a0.values.data(), curr.values.data(), 3 * sizeof(double)) != 0 ||
        std::memcmp(a1.values.data(), prev.values.data(), 3 * sizeof(double)) != 0)
        pass = false;

    const ToyPtsScene scene = make_toy_pts_scene(0);
    PtsConfig cfg; // R=6, E=8
    std::vector<double> accs;
    ToyTrainer t1(scene.images);
    const PtsResult run1 =
        run_pts(scene.noisy, ToyTrainer::initial_params(), t1, scene.images, scene.crf, cfg,
                [&](const PtsObservation& obs) {
                    accs.push_back(pixel_accuracy(*obs.predictions, scene.clean));
                });
    if (accs.size() != 6)
        pass = false;
    for (std::size_t i = 1; i < accs.size(); ++i)
        if (accs[i] < accs[i - 1])
            pass = false;
    if (!(accs.back() >= accs.front()))
        pass = false;

    ToyTrainer t2(scene.images);
    const PtsResult run2 =
        run_pts(scene.noisy, ToyTrainer::initial_params(), t2, scene.images, scene.crf, cfg);
    if (run1.params.values.size() != run2.params.values.size() ||
        std::memcmp(run1.params.values.data(), run2.params.values.data(),
                    run1.params.values.size() * sizeof(double)) != 0)
        pass = false;
    if (run1.trail.size() != run2.trail.size())
        pass = false;
    for (std::size_t i = 0; pass && i < run1.trail.size(); ++i)
        if (run1.trail[i].label_hash != run2.trail[i].label_hash ||
            run1.trail[i].alpha != run2.trail[i].alpha)
            pass = false;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "accuracy %.4f -> %.4f over R=6 E=8, replay byte-exact", accs.front(),
                  accs.back());
    report(6, "pts-harness", pass, detail);
}

// 7. Attention forwards and Canny behavior.
void criterion_attention() {
    bool pass_shuffle = true, pass_ma = true, pass_zero = true;
    bool pass_det = true, pass_const = true, pass_order = true;

    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 256; ++b)
            if (channel_shuffle_index(256 * a + b, 5, 256) != 5 * b + a)
                pass_shuffle = false;
    std::vector<int> hits(1280, 0);
    for (int c = 0; c < 1280; ++c)
        ++hits[static_cast<std::size_t>(channel_shuffle_index(c, 5, 256))];
    for (int c = 0; c < 1280; ++c)
        if (hits[static_cast<std::size_t>(c)] != 1)
            pass_shuffle = false;

    std::mt19937_64 gen(1007);
    std::vector<float> data(8 * 8 * 32);
    for (float& v : data)
        v = static_cast<float>(refimpl::urand(gen) * 4 - 2);
    const DenseMap f(8, 8, 32, std::move(data));
    const MaDetail d = ma_forward_detail(f, MaWeights::seeded(77, 32));
    for (float v : d.channel_attention)
        if (!(v > 0.0f && v < 1.0f))
            pass_ma = false;
    for (float v : d.spatial_attention.data())
        if (!(v > 0.0f && v < 1.0f))
            pass_ma = false;
    const DenseMap zeroed = ma_forward(DenseMap(8, 8, 32), MaWeights::seeded(77, 32));
    for (float v : zeroed.data())
        if (v != 0.0f)
            pass_zero = false;

    // Canny: determinism, constant-image behavior, Table-4 style ordering.
    SceneSpec spec = random_scene(2024, 48, 48, 3, 4, 0.3);
    const SceneBundle bundle = generate(spec);
    const GrayImage gray = to_gray(bundle.image);
    const DenseMap auto1 = canny(gray, CannyConfig::automatic());
    const DenseMap auto2 = canny(gray, CannyConfig::automatic());
    pass_det = auto1 == auto2;

    GrayImage constant(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            constant.at(y, x) = 77;
    const DenseMap flat_edges = canny(constant, CannyConfig::automatic());
    for (float v : flat_edges.data())
        if (v != 0.0f)
            pass_const = false;

    long long wide = 0, narrow = 0;
    const DenseMap wide_edges = canny(gray, CannyConfig::manual(30, 200));
    const DenseMap narrow_edges = canny(gray, CannyConfig::manual(230, 260));
    for (float v : wide_edges.data())
        wide += v > 0.5f;
    for (float v : narrow_edges.data())
        narrow += v > 0.5f;
    pass_order = wide > narrow;

    const bool pass = pass_shuffle && pass_ma && pass_zero && pass_det && pass_const && pass_order;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "shuffle %d, ma-bounds %d, zero-input %d, deterministic %d, constant %d, "
                  "edges %lld > %lld %d",
                  pass_shuffle, pass_ma, pass_zero, pass_det, pass_const, wide, narrow,
                  pass_order);
    report(7, "attention-and-canny", pass, detail);
}

// 8. Metric oracle equivalence and tau monotonicity.
void criterion_metric() {
    std::mt19937_64 gen(1008);
    bool pass = true;
    int cases = 0;

    auto random_mask = [&gen](int h, int w) {
        PixelMask m;
        m.height = h;
        m.width = w;
        m.bits.assign(static_cast<std::size_t>(h) * w, 0);
        const int rh = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(h));
        const int rw = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(w));
        const int y0 = static_cast<int>(gen() % static_cast<std::uint64_t>(h - rh + 1));
        const int x0 = static_cast<int>(gen() % static_cast<std::uint64_t>(w - rw + 1));
        for (int y = y0; y < y0 + rh; ++y)
            for (int x = x0; x < x0 + rw; ++x)
                m.bits[static_cast<std::size_t>(y) * w + x] = 1;
        return m;
    };

    for (int n_pred = 0; n_pred <= 4; ++n_pred)
        for (int n_gt = 0; n_gt <= 4; ++n_gt)
            for (int rep = 0; rep < 20; ++rep) {
                std::vector<ScoredInstance> preds;
                std::vector<PixelMask> gts;
                for (int i = 0; i < n_pred; ++i)
                    preds.push_back({random_mask(4, 4), refimpl::urand(gen)});
                for (int i = 0; i < n_gt; ++i)
                    gts.push_back(random_mask(4, 4));
                for (double tau : {0.3, 0.5, 0.7}) {
                    ++cases;
                    if (average_precision(preds, gts, tau) != refimpl::ap_oracle(preds, gts, tau))
                        pass = false;
                }
            }

    int monotone_cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ScoredInstance> preds;
        std::vector<PixelMask> gts;
        const int n_pred = 1 + static_cast<int>(gen() % 4);
        const int n_gt = 1 + static_cast<int>(gen() % 4);
        for (int i = 0; i < n_pred; ++i)
            preds.push_back({random_mask(5, 5), refimpl::urand(gen)});
        for (int i = 0; i < n_gt; ++i)
            gts.push_back(random_mask(5, 5));
        double prev = 1.0;
        ++monotone_cases;
        for (double tau : {0.3, 0.5, 0.7, 0.9}) {
            const double ap = average_precision(preds, gts, tau);
            if (ap > prev)
                pass = false;
            prev = ap;
        }
    }

    char detail[120];
    std::snprintf(detail, sizeof(detail), "%d oracle cases exact, %d tau chains monotone", cases,
                  monotone_cases);
    report(8, "metric-oracle", pass, detail);
}

} // namespace

int main() {
    criterion_offset_clustering();
    criterion_subitizing();
    criterion_random_walk();
    criterion_end_to_end();
    criterion_crf();
    criterion_pts();
    criterion_attention();
    criterion_metric();

    if (failures == 0) {
        std::printf("SUMMARY: 8/8 criteria passed\n");
        return 0;
    }
    std::printf("SUMMARY: %d/8 criteria FAILED\n", failures);
    return 1;
}
