#include "sidkit/pipeline.hpp"

#include <charconv>
#include <fstream>

#include "sidkit/eval.hpp"

namespace sidkit {
namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValueError("config: cannot parse value for '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ValueError("config: cannot parse value for '" + key + "': " + value);
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    return s.substr(a, b - a + 1);
}

} // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "theta")
        theta = parse_double(key, value);
    else if (key == "eps")
        eps = parse_double(key, value);
    else if (key == "max_iters")
        max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "radius")
        radius = static_cast<int>(parse_int(key, value));
    else if (key == "chi")
        chi = static_cast<int>(parse_int(key, value));
    else if (key == "steps")
        steps = static_cast<int>(parse_int(key, value));
    else if (key == "crf_w1")
        crf.w1 = parse_double(key, value);
    else if (key == "crf_w2")
        crf.w2 = parse_double(key, value);
    else if (key == "crf_sigma_alpha")
        crf.sigma_alpha = parse_double(key, value);
    else if (key == "crf_sigma_beta")
        crf.sigma_beta = parse_double(key, value);
    else if (key == "crf_sigma_gamma")
        crf.sigma_gamma = parse_double(key, value);
    else if (key == "crf_iterations")
        crf.iterations = static_cast<int>(parse_int(key, value));
    else if (key == "seed")
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    else
        throw ValueError("config: unknown key '" + key + "'");
}

void PipelineConfig::validate() const {
    if (theta < 0.0 || theta > 1.0)
        throw ValueError("config: theta must lie in [0,1]");
    if (!(eps > 0.0))
        throw ValueError("config: eps must be positive");
    if (max_iters < 1)
        throw ValueError("config: max_iters must be >= 1");
    if (radius < 1)
        throw ValueError("config: radius must be >= 1");
    if (chi < 1)
        throw ValueError("config: chi must be >= 1");
    if (steps < 1)
        throw ValueError("config: steps must be >= 1");
    crf.validate();
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValueError("config: line " + std::to_string(lineno) + " is not key=value");
        cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

AssembleResult assemble(const DenseMap& saliency, const DenseMap& boundary,
                        const OffsetField& offsets, const PipelineConfig& cfg) {
    cfg.validate();
    require_probability(saliency, "assemble saliency");
    require_probability(boundary, "assemble boundary");
    if (!saliency.same_grid(offsets.height(), offsets.width()) ||
        !boundary.same_grid(offsets.height(), offsets.width()))
        throw ShapeError("assemble: input maps disagree on the grid");

    const ChaseResult chased = chase_offsets(offsets, cfg.max_iters, cfg.eps);

    AssembleResult res;
    res.labels = InstanceLabelMap::background(offsets.height(), offsets.width());

    if (extract_centroids(chased.field, cfg.eps).empty())
        throw EmptyCentroids("assemble: the chased offset field has no fixed points");

    // Centroids and instance support both live inside the binarized salient
    // region; everything outside stays background.
    const std::vector<std::uint8_t> salient = binarize(saliency);
    const CentroidSet centroids = extract_centroids(chased.field, cfg.eps, salient);
    if (centroids.empty())
        return res; // nothing salient: T* = 0

    const InstanceLabelMap full = assign_pixels(chased.field, centroids);
    std::vector<std::int32_t> masked(full.labels().size(), 0);
    for (std::size_t i = 0; i < masked.size(); ++i)
        if (salient[i])
            masked[i] = full.labels()[i];
    const InstanceLabelMap instances =
        compact_labels(full.height(), full.width(), masked);
    if (instances.count() == 0)
        return res;

    const InstanceLabelMap kept = filter_salient(instances, saliency, cfg.theta);
    if (kept.count() == 0)
        return res;

    res.labels = random_walk(kept, boundary, saliency, cfg.walk());
    res.count = res.labels.count();
    res.areas = res.labels.areas();
    for (const PixelMask& mask : masks_from_labels(res.labels))
        res.scores.push_back(mean_saliency_score(mask, saliency));
    return res;
}

} // namespace sidkit
