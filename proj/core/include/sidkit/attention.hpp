#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sidkit/dense_map.hpp"

namespace sidkit {

/// 2-D convolution layer, zero-padded to keep the spatial size ("same").
/// Weight layout: weight[((o * in_ch + i) * kh + ky) * kw + kx].
struct Conv2d {
    int in_ch = 0;
    int out_ch = 0;
    int kh = 1;
    int kw = 1;
    std::vector<float> weight;
    std::vector<float> bias;

    static Conv2d seeded(std::uint64_t seed, int in_ch, int out_ch, int kh, int kw);
    static Conv2d zeros(int in_ch, int out_ch, int kh, int kw);
    /// Center-tap passthrough; requires in_ch == out_ch.
    static Conv2d identity(int channels, int kh, int kw);

    DenseMap apply(const DenseMap& in) const;
};

struct Linear {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<float> weight; // weight[o * in_dim + i]
    std::vector<float> bias;

    static Linear seeded(std::uint64_t seed, int in_dim, int out_dim);
    std::vector<float> apply(const std::vector<float>& x) const;
};

/// Five feature maps with non-increasing spatial size, level 0 largest.
struct FeaturePyramid {
    std::array<DenseMap, 5> levels;

    void validate() const;
};

FeaturePyramid make_pyramid(std::array<DenseMap, 5> levels);

/// Upsamples to (out_h, out_w) by nearest neighbor (top-left anchored).
DenseMap upsample_nearest(const DenseMap& in, int out_h, int out_w);

DenseMap relu(DenseMap in);
DenseMap sigmoid(DenseMap in);
DenseMap concat_channels(const std::vector<const DenseMap*>& maps);

// --- Cross-layer Feature Mixing -------------------------------------------

struct CfmWeights {
    std::array<Conv2d, 5> reduce; // level channels -> 256
    std::array<Conv2d, 5> fuse;   // 2560 -> 256 per level
    std::uint64_t seed = 0;

    static CfmWeights seeded(std::uint64_t seed, const std::array<int, 5>& level_channels);
};

/// Destination of channel c under the concat-split-concat shuffle viewed as
/// reshape [groups, per] -> transpose -> flatten: c = per*a + b lands at
/// groups*b + a.
int channel_shuffle_index(int c, int groups, int per_group);

/// Shuffles a map's channel axis with the (groups, per_group) rule above.
DenseMap channel_shuffle(const DenseMap& in, int groups);

/// Upsample f2..f5 to f1's size, reduce every level to 256 channels,
/// concatenate (1280), shuffle, concatenate pre/post shuffle (2560) and mix
/// back to five 256-channel outputs at f1's resolution.
FeaturePyramid cfm_forward(const FeaturePyramid& pyr, const CfmWeights& w);

// --- Mutual Attention -------------------------------------------------------

struct MaWeights {
    Linear fc1; // C -> max(1, C/16), shared by avg and max paths
    Linear fc2; // back to C
    Conv2d spatial; // 2 -> 1, 7x7
    std::uint64_t seed = 0;

    static MaWeights seeded(std::uint64_t seed, int channels);
};

struct MaDetail {
    DenseMap output;
    std::vector<float> channel_attention; // per channel, sigmoid bounded
    DenseMap spatial_attention;           // H x W x 1, sigmoid bounded
    std::vector<float> avg_pooled;        // spatial means per channel
    std::vector<float> max_pooled;        // spatial maxima per channel
};

/// Channel attention from global average/max pooling through a shared MLP,
/// spatial attention from a 7x7 conv over channel mean/max planes; output is
/// f * F_c + f * F_s with broadcast products.
DenseMap ma_forward(const DenseMap& f, const MaWeights& w);
MaDetail ma_forward_detail(const DenseMap& f, const MaWeights& w);

// --- Boundary Enhancement ---------------------------------------------------

struct ResidualBlock {
    Conv2d conv1;
    Conv2d conv2;

    static ResidualBlock seeded(std::uint64_t seed, int channels);
};

/// relu(x + conv2(relu(conv1(x)))).
DenseMap residual_forward(const DenseMap& x, const ResidualBlock& block);

struct BeWeights {
    Conv2d horizontal; // 1x7 over the image
    Conv2d vertical;   // 7x1 over the image
    std::array<ResidualBlock, 3> blocks_h;
    std::array<ResidualBlock, 3> blocks_v;
    Conv2d head_h; // 1x1 after edge concat
    Conv2d head_v;
    std::uint64_t seed = 0;

    static BeWeights seeded(std::uint64_t seed, int width = 16);
};

/// Directional low-level features refined by residual blocks, concatenated
/// with the Canny edge map and projected by 1x1 convs. Returns the
/// horizontal-path and vertical-path feature maps.
std::pair<DenseMap, DenseMap> be_forward(const DenseMap& image, const DenseMap& edge,
                                         const BeWeights& w);

/// Boundary-map head: pyramid levels are upsampled to the BE feature
/// resolution, concatenated with both BE outputs and squashed to one channel.
DenseMap boundary_map_forward(const FeaturePyramid& refined, const DenseMap& fb1,
                              const DenseMap& fb2, const Conv2d& head);

} // namespace sidkit
