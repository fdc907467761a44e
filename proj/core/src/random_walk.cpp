#include "sidkit/random_walk.hpp"

namespace sidkit {

std::vector<double> walk_seed(const InstanceLabelMap& instances, int id,
                              const DenseMap& boundary, const DenseMap& saliency) {
    std::vector<double> seed(instances.labels().size(), 0.0);
    for (std::size_t i = 0; i < seed.size(); ++i) {
        if (instances.labels()[i] != id)
            continue;
        seed[i] = static_cast<double>(saliency.data()[i]) *
                  (1.0 - static_cast<double>(boundary.data()[i]));
    }
    return seed;
}

InstanceLabelMap random_walk(const InstanceLabelMap& instances, const DenseMap& boundary,
                             const DenseMap& saliency, const AffinityOperator& affinity,
                             int steps) {
    require_probability(boundary, "random_walk boundary");
    require_probability(saliency, "random_walk saliency");
    if (!boundary.same_grid(instances.height(), instances.width()) ||
        !saliency.same_grid(instances.height(), instances.width()))
        throw ShapeError("random_walk: map shapes disagree");
    if (instances.count() < 1)
        throw ValueError("random_walk: needs at least one instance");

    constexpr double kFloor = 1e-6;
    const std::size_t n = instances.labels().size();
    std::vector<double> best(n, 0.0);
    std::vector<std::int32_t> winner(n, 0);

    for (int id = 1; id <= instances.count(); ++id) {
        const std::vector<double> propagated =
            affinity.propagate(walk_seed(instances, id, boundary, saliency), steps);
        for (std::size_t i = 0; i < n; ++i) {
            if (propagated[i] > best[i]) { // strict: ties keep the lower id
                best[i] = propagated[i];
                winner[i] = id;
            }
        }
    }

    std::vector<std::int32_t> raw(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (best[i] > kFloor)
            raw[i] = winner[i];
    return compact_labels(instances.height(), instances.width(), raw);
}

InstanceLabelMap random_walk(const InstanceLabelMap& instances, const DenseMap& boundary,
                             const DenseMap& saliency, const RandomWalkConfig& cfg) {
    cfg.validate();
    const AffinityOperator affinity = build_affinity(boundary, cfg.radius, cfg.chi);
    return random_walk(instances, boundary, saliency, affinity, cfg.steps);
}

} // namespace sidkit
