#include <benchmark/benchmark.h>

#include <random>

#include "sidkit/attention.hpp"
#include "sidkit/canny.hpp"
#include "sidkit/centroid.hpp"
#include "sidkit/crf.hpp"
#include "sidkit/eval.hpp"
#include "sidkit/pipeline.hpp"
#include "sidkit/synth.hpp"

using namespace sidkit;

namespace {

SceneBundle bench_scene(int size, int shapes, double texture = 0.0) {
    return generate(random_scene(7, size, size, shapes, shapes, texture));
}

OffsetField random_field(int h, int w, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<OffsetField::Vec> vecs(static_cast<std::size_t>(h) * w);
    for (auto& v : vecs) {
        v.dy = static_cast<float>((static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2 - 1) * h);
        v.dx = static_cast<float>((static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2 - 1) * w);
    }
    return OffsetField(h, w, std::move(vecs));
}

void BM_ChaseOffsets(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OffsetField field = random_field(n, n, 11);
    for (auto _ : state)
        benchmark::DoNotOptimize(chase_offsets(field, 100, 0.5));
}
BENCHMARK(BM_ChaseOffsets)->Arg(32)->Arg(64);

void BM_AssignPixels(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OffsetField field = random_field(n, n, 13);
    const ChaseResult chased = chase_offsets(field, 100, 0.5);
    const CentroidSet set = extract_centroids(chased.field, 0.5);
    if (set.empty())
        return;
    for (auto _ : state)
        benchmark::DoNotOptimize(assign_pixels(chased.field, set));
}
BENCHMARK(BM_AssignPixels)->Arg(32)->Arg(64);

void BM_BuildAffinity(benchmark::State& state) {
    const SceneBundle scene = bench_scene(static_cast<int>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_affinity(scene.boundary, 5, 4));
}
BENCHMARK(BM_BuildAffinity)->Arg(32)->Arg(48);

void BM_RandomWalkStep(benchmark::State& state) {
    const SceneBundle scene = bench_scene(static_cast<int>(state.range(0)), 3);
    const AffinityOperator op = build_affinity(scene.boundary, 5, 4);
    std::vector<double> seed(op.pixel_count(), 0.0);
    for (std::size_t i = 0; i < seed.size(); ++i)
        seed[i] = scene.labels.labels()[i] == 1 ? 1.0 : 0.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(op.step(seed));
}
BENCHMARK(BM_RandomWalkStep)->Arg(32)->Arg(48);

void BM_Assemble(benchmark::State& state) {
    const SceneBundle scene = bench_scene(40, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            assemble(scene.saliency, scene.boundary, scene.offsets, PipelineConfig{}));
}
BENCHMARK(BM_Assemble);

void BM_Canny(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SceneBundle scene = bench_scene(n, 3, 0.3);
    const GrayImage gray = to_gray(scene.image);
    const CannyConfig cfg = CannyConfig::automatic();
    for (auto _ : state)
        benchmark::DoNotOptimize(canny(gray, cfg));
}
BENCHMARK(BM_Canny)->Arg(64)->Arg(128);

void BM_CrfRefine(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SceneBundle scene = bench_scene(n, 2, 0.1);
    const GrayImage gray = to_gray(scene.image);
    const DenseMap prob = unary_from_saliency(scene.saliency);
    const CrfConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(crf_refine(prob, gray, cfg));
}
BENCHMARK(BM_CrfRefine)->Arg(16)->Arg(32);

void BM_MaForward(benchmark::State& state) {
    std::mt19937_64 gen(3);
    std::vector<float> data(16 * 16 * 256);
    for (float& v : data)
        v = static_cast<float>(static_cast<double>(gen() >> 11) * 0x1.0p-53);
    const DenseMap f(16, 16, 256, std::move(data));
    const MaWeights w = MaWeights::seeded(5, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(ma_forward(f, w));
}
BENCHMARK(BM_MaForward);

void BM_AveragePrecision(benchmark::State& state) {
    std::mt19937_64 gen(9);
    std::vector<ScoredInstance> preds;
    std::vector<PixelMask> gts;
    auto mask = [&gen]() {
        PixelMask m;
        m.height = 16;
        m.width = 16;
        m.bits.assign(256, 0);
        for (int k = 0; k < 40; ++k)
            m.bits[gen() % 256] = 1;
        return m;
    };
    for (int i = 0; i < 16; ++i)
        preds.push_back({mask(), static_cast<double>(gen() >> 11) * 0x1.0p-53});
    for (int i = 0; i < 12; ++i)
        gts.push_back(mask());
    for (auto _ : state)
        benchmark::DoNotOptimize(average_precision(preds, gts, 0.5));
}
BENCHMARK(BM_AveragePrecision);

} // namespace

BENCHMARK_MAIN();
