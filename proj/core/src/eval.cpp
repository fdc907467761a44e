#include "sidkit/eval.hpp"

#include <algorithm>
#include <numeric>

namespace sidkit {

int PixelMask::area() const {
    int n = 0;
    for (std::uint8_t b : bits)
        n += b != 0;
    return n;
}

std::vector<PixelMask> masks_from_labels(const InstanceLabelMap& labels) {
    std::vector<PixelMask> out(static_cast<std::size_t>(labels.count()));
    for (PixelMask& m : out) {
        m.height = labels.height();
        m.width = labels.width();
        m.bits.assign(labels.labels().size(), 0);
    }
    for (std::size_t i = 0; i < labels.labels().size(); ++i) {
        const std::int32_t id = labels.labels()[i];
        if (id > 0)
            out[static_cast<std::size_t>(id) - 1].bits[i] = 1;
    }
    return out;
}

double mask_iou(const PixelMask& a, const PixelMask& b) {
    if (!a.same_grid(b))
        throw ShapeError("mask_iou: masks live on different grids");
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool pa = a.bits[i] != 0, pb = b.bits[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    if (uni == 0)
        throw ValueError("mask_iou: both masks are empty");
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double mean_saliency_score(const PixelMask& mask, const DenseMap& saliency) {
    require_probability(saliency, "mean_saliency_score");
    if (!saliency.same_grid(mask.height, mask.width))
        throw ShapeError("mean_saliency_score: grid mismatch");
    double sum = 0.0;
    long long n = 0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (mask.bits[i]) {
            sum += saliency.data()[i];
            ++n;
        }
    }
    if (n == 0)
        throw ValueError("mean_saliency_score: empty mask");
    return sum / static_cast<double>(n);
}

namespace {

// All-point interpolated area under the PR curve from per-rank hit flags.
double ap_from_hits(const std::vector<std::uint8_t>& hits, std::size_t gt_count) {
    if (gt_count == 0 || hits.empty())
        return 0.0;
    const std::size_t n = hits.size();
    std::vector<double> precision(n), recall(n);
    std::size_t tp = 0;
    for (std::size_t k = 0; k < n; ++k) {
        tp += hits[k];
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(gt_count);
    }
    std::vector<double> envelope(n);
    double running = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        running = std::max(running, precision[k]);
        envelope[k] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        ap += (recall[k] - prev_recall) * envelope[k];
        prev_recall = recall[k];
    }
    return ap;
}

void check_masks(const std::vector<ScoredInstance>& preds, const std::vector<PixelMask>& gts) {
    for (const ScoredInstance& p : preds)
        if (p.mask.area() == 0)
            throw ValueError("average_precision: empty prediction mask");
    for (const PixelMask& g : gts)
        if (g.area() == 0)
            throw ValueError("average_precision: empty ground-truth mask");
}

// Greedy matching in rank order; writes one hit flag per prediction.
std::vector<std::uint8_t> greedy_match(const std::vector<const ScoredInstance*>& ranked,
                                       const std::vector<PixelMask>& gts, double tau) {
    std::vector<std::uint8_t> hits(ranked.size(), 0);
    std::vector<std::uint8_t> taken(gts.size(), 0);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        double best = -1.0;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (taken[g])
                continue;
            const double iou = mask_iou(ranked[k]->mask, gts[g]);
            if (iou > best) {
                best = iou;
                best_gt = g;
            }
        }
        if (best_gt < gts.size() && best >= tau) {
            taken[best_gt] = 1;
            hits[k] = 1;
        }
    }
    return hits;
}

std::vector<std::size_t> rank_by_score(const std::vector<ScoredInstance>& preds) {
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return preds[a].score > preds[b].score;
    });
    return order;
}

} // namespace

double average_precision(const std::vector<ScoredInstance>& preds,
                         const std::vector<PixelMask>& gts, double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw ValueError("average_precision: tau must lie in (0,1)");
    check_masks(preds, gts);
    if (gts.empty() || preds.empty())
        return 0.0;

    std::vector<const ScoredInstance*> ranked;
    ranked.reserve(preds.size());
    for (std::size_t i : rank_by_score(preds))
        ranked.push_back(&preds[i]);
    return ap_from_hits(greedy_match(ranked, gts, tau), gts.size());
}

EvalReport evaluate(const std::vector<ImageDetections>& images, const std::vector<double>& taus,
                    EvalMode mode) {
    EvalReport report;
    report.mode = mode;

    for (double tau : taus) {
        std::vector<double>& per_image = report.ap_per_image[tau];
        per_image.reserve(images.size());
        for (const ImageDetections& img : images)
            per_image.push_back(average_precision(img.preds, img.gts, tau));

        if (mode == EvalMode::PerImage) {
            const double sum = std::accumulate(per_image.begin(), per_image.end(), 0.0);
            report.map_at[tau] = images.empty() ? 0.0 : sum / static_cast<double>(images.size());
            continue;
        }

        // Pooled: one ranking across the whole set, matching per image.
        struct Tagged {
            double score;
            std::size_t image;
            std::size_t index;
        };
        std::vector<Tagged> all;
        std::size_t total_gt = 0;
        for (std::size_t i = 0; i < images.size(); ++i) {
            check_masks(images[i].preds, images[i].gts);
            total_gt += images[i].gts.size();
            for (std::size_t k = 0; k < images[i].preds.size(); ++k)
                all.push_back({images[i].preds[k].score, i, k});
        }
        std::stable_sort(all.begin(), all.end(),
                         [](const Tagged& a, const Tagged& b) { return a.score > b.score; });

        std::vector<std::vector<std::uint8_t>> taken(images.size());
        for (std::size_t i = 0; i < images.size(); ++i)
            taken[i].assign(images[i].gts.size(), 0);

        std::vector<std::uint8_t> hits(all.size(), 0);
        for (std::size_t k = 0; k < all.size(); ++k) {
            const auto& [score, i, idx] = all[k];
            const std::vector<PixelMask>& gts = images[i].gts;
            double best = -1.0;
            std::size_t best_gt = gts.size();
            for (std::size_t g = 0; g < gts.size(); ++g) {
                if (taken[i][g])
                    continue;
                const double iou = mask_iou(images[i].preds[idx].mask, gts[g]);
                if (iou > best) {
                    best = iou;
                    best_gt = g;
                }
            }
            if (best_gt < gts.size() && best >= tau) {
                taken[i][best_gt] = 1;
                hits[k] = 1;
            }
        }
        report.map_at[tau] = ap_from_hits(hits, total_gt);
    }
    return report;
}

} // namespace sidkit
