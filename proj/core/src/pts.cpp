#include "sidkit/pts.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace sidkit {

ParamVector ema_refresh(const ParamVector& prev, const ParamVector& curr, double alpha) {
    if (prev.values.size() != curr.values.size())
        throw ValueError("ema_refresh: length mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValueError("ema_refresh: alpha must lie in [0,1]");
    for (double v : prev.values)
        if (!std::isfinite(v))
            throw ValueError("ema_refresh: non-finite value in prev");
    for (double v : curr.values)
        if (!std::isfinite(v))
            throw ValueError("ema_refresh: non-finite value in curr");

    if (alpha == 0.0)
        return curr;
    if (alpha == 1.0)
        return prev;

    ParamVector out;
    out.iteration_index = curr.iteration_index;
    out.values.resize(curr.values.size());
    for (std::size_t i = 0; i < curr.values.size(); ++i) {
        const double a = prev.values[i], b = curr.values[i];
        const double v = alpha * a + (1.0 - alpha) * b;
        out.values[i] = std::clamp(v, std::min(a, b), std::max(a, b));
    }
    return out;
}

std::uint64_t hash_labels(const LabelSet& labels) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    for (const DenseMap& m : labels) {
        const std::int32_t dims[3] = {m.height(), m.width(), m.channels()};
        mix(dims, sizeof(dims));
        mix(m.data().data(), m.size() * sizeof(float));
    }
    return h;
}

PtsResult run_pts(const LabelSet& init_labels, const ParamVector& init_params,
                  TrainerPort& trainer, const std::vector<GrayImage>& images,
                  const CrfConfig& crf_cfg, const PtsConfig& cfg, const PtsObserver& observer) {
    cfg.validate();
    crf_cfg.validate();
    if (init_labels.empty())
        throw ValueError("run_pts: empty initial label set");
    if (images.size() != init_labels.size())
        throw ShapeError("run_pts: image/label counts disagree");

    PtsResult res;
    LabelSet labels = init_labels;
    ParamVector prev = init_params; // weights closing iteration r-1
    ParamVector curr = init_params;

    for (int r = 1; r <= cfg.iterations; ++r) {
        ParamVector trained;
        try {
            trained = trainer.train(curr, labels, cfg.epochs);
        } catch (const std::exception& e) {
            throw Error("pts iteration " + std::to_string(r) + ": " + e.what());
        }
        trained.iteration_index = r;

        const bool apply_ema = r > cfg.refresh_from;
        const double alpha = apply_ema ? cfg.alpha_rule(r) : 0.0;
        ParamVector final_r = apply_ema ? ema_refresh(prev, trained, alpha) : trained;
        final_r.iteration_index = r;

        res.trail.push_back({r, alpha, apply_ema, hash_labels(labels)});

        LabelSet predictions;
        const bool need_predictions = observer != nullptr || r < cfg.iterations;
        if (need_predictions)
            predictions = trainer.predict(final_r);

        if (observer) {
            PtsObservation obs;
            obs.r = r;
            obs.alpha = alpha;
            obs.ema_applied = apply_ema;
            obs.params = &final_r;
            obs.trained_labels = &labels;
            obs.predictions = &predictions;
            observer(obs);
        }

        if (r < cfg.iterations) {
            // rho_{r+1}: CRF-refined predictions of the refreshed weights.
            LabelSet next;
            next.reserve(predictions.size());
            for (std::size_t i = 0; i < predictions.size(); ++i) {
                const DenseMap refined =
                    crf_refine(unary_from_saliency(predictions[i]), images[i], crf_cfg);
                std::vector<float> fg(refined.pixels());
                for (std::size_t p = 0; p < fg.size(); ++p)
                    fg[p] = refined.data()[2 * p + 1];
                next.push_back(DenseMap::probability(refined.height(), refined.width(), 1,
                                                     std::move(fg)));
            }
            labels = std::move(next);
        }

        prev = final_r;
        curr = std::move(final_r);
    }

    res.params = std::move(curr);
    return res;
}

} // namespace sidkit
