#include "sidkit/attention.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sidkit {
namespace {

// Uniform in [-k, k] with k = 1/sqrt(fan_in), drawn from raw mt19937 words
// so initialization is identical across standard libraries.
std::vector<float> uniform_init(std::mt19937_64& gen, std::size_t count, int fan_in) {
    const double k = 1.0 / std::sqrt(static_cast<double>(std::max(1, fan_in)));
    std::vector<float> out(count);
    for (float& v : out) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53; // [0,1)
        v = static_cast<float>((2.0 * u - 1.0) * k);
    }
    return out;
}

} // namespace

Conv2d Conv2d::seeded(std::uint64_t seed, int in_ch, int out_ch, int kh, int kw) {
    Conv2d c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.kh = kh;
    c.kw = kw;
    std::mt19937_64 gen(seed);
    const int fan_in = in_ch * kh * kw;
    c.weight = uniform_init(gen, static_cast<std::size_t>(out_ch) * in_ch * kh * kw, fan_in);
    c.bias = uniform_init(gen, static_cast<std::size_t>(out_ch), fan_in);
    return c;
}

Conv2d Conv2d::zeros(int in_ch, int out_ch, int kh, int kw) {
    Conv2d c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.kh = kh;
    c.kw = kw;
    c.weight.assign(static_cast<std::size_t>(out_ch) * in_ch * kh * kw, 0.0f);
    c.bias.assign(static_cast<std::size_t>(out_ch), 0.0f);
    return c;
}

Conv2d Conv2d::identity(int channels, int kh, int kw) {
    Conv2d c = zeros(channels, channels, kh, kw);
    const int cy = kh / 2, cx = kw / 2;
    for (int ch = 0; ch < channels; ++ch)
        c.weight[((static_cast<std::size_t>(ch) * channels + ch) * kh + cy) * kw + cx] = 1.0f;
    return c;
}

DenseMap Conv2d::apply(const DenseMap& in) const {
    if (in.channels() != in_ch)
        throw ShapeError("Conv2d: input channel mismatch");
    const int h = in.height(), w = in.width();
    DenseMap out(h, w, out_ch);

    if (kh == 1 && kw == 1) {
        // Pointwise: a dense inner product over the channel axis per pixel.
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const float* px_in =
                    in.data().data() + (static_cast<std::size_t>(y) * w + x) * in_ch;
                float* px_out = &out.at(y, x, 0);
                for (int o = 0; o < out_ch; ++o) {
                    const float* wp = weight.data() + static_cast<std::size_t>(o) * in_ch;
                    double acc = bias[static_cast<std::size_t>(o)];
                    for (int i = 0; i < in_ch; ++i)
                        acc += static_cast<double>(wp[i]) * px_in[i];
                    px_out[o] = static_cast<float>(acc);
                }
            }
        }
        return out;
    }

    const int py = kh / 2, px = kw / 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int o = 0; o < out_ch; ++o) {
                double acc = bias[static_cast<std::size_t>(o)];
                for (int ky = 0; ky < kh; ++ky) {
                    const int yy = y + ky - py;
                    if (yy < 0 || yy >= h)
                        continue;
                    for (int kx = 0; kx < kw; ++kx) {
                        const int xx = x + kx - px;
                        if (xx < 0 || xx >= w)
                            continue;
                        const float* wp =
                            weight.data() + ((static_cast<std::size_t>(o) * in_ch) * kh + ky) * kw + kx;
                        for (int i = 0; i < in_ch; ++i)
                            acc += static_cast<double>(wp[static_cast<std::size_t>(i) * kh * kw]) *
                                   in.at(yy, xx, i);
                    }
                }
                out.at(y, x, o) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

Linear Linear::seeded(std::uint64_t seed, int in_dim, int out_dim) {
    Linear l;
    l.in_dim = in_dim;
    l.out_dim = out_dim;
    std::mt19937_64 gen(seed);
    l.weight = uniform_init(gen, static_cast<std::size_t>(out_dim) * in_dim, in_dim);
    l.bias = uniform_init(gen, static_cast<std::size_t>(out_dim), in_dim);
    return l;
}

std::vector<float> Linear::apply(const std::vector<float>& x) const {
    if (x.size() != static_cast<std::size_t>(in_dim))
        throw ShapeError("Linear: input size mismatch");
    std::vector<float> y(static_cast<std::size_t>(out_dim));
    for (int o = 0; o < out_dim; ++o) {
        double acc = bias[static_cast<std::size_t>(o)];
        for (int i = 0; i < in_dim; ++i)
            acc += static_cast<double>(weight[static_cast<std::size_t>(o) * in_dim + i]) * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(o)] = static_cast<float>(acc);
    }
    return y;
}

void FeaturePyramid::validate() const {
    for (const DenseMap& l : levels)
        if (l.channels() < 1 || l.height() < 1)
            throw ValueError("FeaturePyramid: empty level");
    for (std::size_t k = 1; k < levels.size(); ++k)
        if (levels[k].height() > levels[k - 1].height() ||
            levels[k].width() > levels[k - 1].width())
            throw ValueError("FeaturePyramid: spatial sizes must be non-increasing");
}

FeaturePyramid make_pyramid(std::array<DenseMap, 5> levels) {
    FeaturePyramid p{std::move(levels)};
    p.validate();
    return p;
}

DenseMap upsample_nearest(const DenseMap& in, int out_h, int out_w) {
    DenseMap out(out_h, out_w, in.channels());
    for (int y = 0; y < out_h; ++y) {
        const int sy = std::min(in.height() - 1, y * in.height() / out_h);
        for (int x = 0; x < out_w; ++x) {
            const int sx = std::min(in.width() - 1, x * in.width() / out_w);
            for (int c = 0; c < in.channels(); ++c)
                out.at(y, x, c) = in.at(sy, sx, c);
        }
    }
    return out;
}

DenseMap relu(DenseMap in) {
    for (float& v : in.data())
        v = std::max(v, 0.0f);
    return in;
}

DenseMap sigmoid(DenseMap in) {
    for (float& v : in.data())
        v = static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(v))));
    return in;
}

DenseMap concat_channels(const std::vector<const DenseMap*>& maps) {
    const int h = maps.front()->height(), w = maps.front()->width();
    int total = 0;
    for (const DenseMap* m : maps) {
        if (!m->same_grid(h, w))
            throw ShapeError("concat_channels: spatial sizes disagree");
        total += m->channels();
    }
    DenseMap out(h, w, total);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int c0 = 0;
            for (const DenseMap* m : maps) {
                for (int c = 0; c < m->channels(); ++c)
                    out.at(y, x, c0 + c) = m->at(y, x, c);
                c0 += m->channels();
            }
        }
    }
    return out;
}

// --- CFM --------------------------------------------------------------------

CfmWeights CfmWeights::seeded(std::uint64_t seed, const std::array<int, 5>& level_channels) {
    CfmWeights w;
    w.seed = seed;
    for (int k = 0; k < 5; ++k)
        w.reduce[static_cast<std::size_t>(k)] =
            Conv2d::seeded(seed * 1000 + static_cast<std::uint64_t>(k),
                           level_channels[static_cast<std::size_t>(k)], 256, 1, 1);
    for (int k = 0; k < 5; ++k)
        w.fuse[static_cast<std::size_t>(k)] =
            Conv2d::seeded(seed * 1000 + 100 + static_cast<std::uint64_t>(k), 2560, 256, 1, 1);
    return w;
}

int channel_shuffle_index(int c, int groups, int per_group) {
    const int a = c / per_group;
    const int b = c % per_group;
    return groups * b + a;
}

DenseMap channel_shuffle(const DenseMap& in, int groups) {
    if (in.channels() % groups != 0)
        throw ValueError("channel_shuffle: channels not divisible by groups");
    const int per = in.channels() / groups;
    DenseMap out(in.height(), in.width(), in.channels());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x)
            for (int c = 0; c < in.channels(); ++c)
                out.at(y, x, channel_shuffle_index(c, groups, per)) = in.at(y, x, c);
    return out;
}

FeaturePyramid cfm_forward(const FeaturePyramid& pyr, const CfmWeights& w) {
    pyr.validate();
    const int h = pyr.levels[0].height();
    const int wd = pyr.levels[0].width();

    std::array<DenseMap, 5> reduced;
    for (int k = 0; k < 5; ++k) {
        const DenseMap up = k == 0 ? pyr.levels[0]
                                   : upsample_nearest(pyr.levels[static_cast<std::size_t>(k)], h, wd);
        reduced[static_cast<std::size_t>(k)] = w.reduce[static_cast<std::size_t>(k)].apply(up);
    }

    const DenseMap pre = concat_channels({&reduced[0], &reduced[1], &reduced[2], &reduced[3],
                                          &reduced[4]});
    const DenseMap post = channel_shuffle(pre, 5);
    const DenseMap both = concat_channels({&pre, &post});

    std::array<DenseMap, 5> out;
    for (int k = 0; k < 5; ++k)
        out[static_cast<std::size_t>(k)] = w.fuse[static_cast<std::size_t>(k)].apply(both);
    return FeaturePyramid{std::move(out)};
}

// --- MA ---------------------------------------------------------------------

MaWeights MaWeights::seeded(std::uint64_t seed, int channels) {
    const int hidden = std::max(1, channels / 16);
    MaWeights w;
    w.seed = seed;
    w.fc1 = Linear::seeded(seed * 1000 + 1, channels, hidden);
    w.fc2 = Linear::seeded(seed * 1000 + 2, hidden, channels);
    w.spatial = Conv2d::seeded(seed * 1000 + 3, 2, 1, 7, 7);
    return w;
}

namespace {

std::vector<float> mlp(const MaWeights& w, const std::vector<float>& x) {
    std::vector<float> hid = w.fc1.apply(x);
    for (float& v : hid)
        v = std::max(v, 0.0f);
    return w.fc2.apply(hid);
}

} // namespace

MaDetail ma_forward_detail(const DenseMap& f, const MaWeights& w) {
    const int h = f.height(), wd = f.width(), c = f.channels();
    if (w.fc1.in_dim != c)
        throw ShapeError("ma_forward: channel count does not match the weights");

    MaDetail d;
    d.avg_pooled.assign(static_cast<std::size_t>(c), 0.0f);
    d.max_pooled.assign(static_cast<std::size_t>(c), -std::numeric_limits<float>::infinity());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < wd; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                const float v = f.at(y, x, ch);
                d.avg_pooled[static_cast<std::size_t>(ch)] += v;
                d.max_pooled[static_cast<std::size_t>(ch)] =
                    std::max(d.max_pooled[static_cast<std::size_t>(ch)], v);
            }
        }
    }
    const float inv_area = 1.0f / static_cast<float>(h * wd);
    for (float& v : d.avg_pooled)
        v *= inv_area;

    const std::vector<float> a = mlp(w, d.avg_pooled);
    const std::vector<float> m = mlp(w, d.max_pooled);
    d.channel_attention.resize(static_cast<std::size_t>(c));
    for (int ch = 0; ch < c; ++ch) {
        const double z = static_cast<double>(a[static_cast<std::size_t>(ch)]) +
                         static_cast<double>(m[static_cast<std::size_t>(ch)]);
        d.channel_attention[static_cast<std::size_t>(ch)] =
            static_cast<float>(1.0 / (1.0 + std::exp(-z)));
    }

    // Channel-mean and channel-max planes, then 7x7 conv and sigmoid.
    DenseMap planes(h, wd, 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < wd; ++x) {
            double sum = 0.0;
            float mx = -std::numeric_limits<float>::infinity();
            for (int ch = 0; ch < c; ++ch) {
                const float v = f.at(y, x, ch);
                sum += v;
                mx = std::max(mx, v);
            }
            planes.at(y, x, 0) = static_cast<float>(sum / c);
            planes.at(y, x, 1) = mx;
        }
    }
    d.spatial_attention = sigmoid(w.spatial.apply(planes));

    DenseMap out(h, wd, c);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < wd; ++x) {
            const float fs = d.spatial_attention.at(y, x, 0);
            for (int ch = 0; ch < c; ++ch) {
                const float v = f.at(y, x, ch);
                out.at(y, x, ch) = v * d.channel_attention[static_cast<std::size_t>(ch)] + v * fs;
            }
        }
    }
    d.output = std::move(out);
    return d;
}

DenseMap ma_forward(const DenseMap& f, const MaWeights& w) {
    return ma_forward_detail(f, w).output;
}

// --- BE ---------------------------------------------------------------------

ResidualBlock ResidualBlock::seeded(std::uint64_t seed, int channels) {
    ResidualBlock b;
    b.conv1 = Conv2d::seeded(seed * 10 + 1, channels, channels, 3, 3);
    b.conv2 = Conv2d::seeded(seed * 10 + 2, channels, channels, 3, 3);
    return b;
}

DenseMap residual_forward(const DenseMap& x, const ResidualBlock& block) {
    DenseMap y = block.conv2.apply(relu(block.conv1.apply(x)));
    if (!y.same_shape(x))
        throw ShapeError("residual_forward: block must preserve the shape");
    for (std::size_t i = 0; i < y.size(); ++i)
        y.data()[i] = std::max(y.data()[i] + x.data()[i], 0.0f);
    return y;
}

BeWeights BeWeights::seeded(std::uint64_t seed, int width) {
    BeWeights w;
    w.seed = seed;
    w.horizontal = Conv2d::seeded(seed * 100 + 1, 3, width, 1, 7);
    w.vertical = Conv2d::seeded(seed * 100 + 2, 3, width, 7, 1);
    for (int k = 0; k < 3; ++k) {
        w.blocks_h[static_cast<std::size_t>(k)] =
            ResidualBlock::seeded(seed * 100 + 10 + static_cast<std::uint64_t>(k), width);
        w.blocks_v[static_cast<std::size_t>(k)] =
            ResidualBlock::seeded(seed * 100 + 20 + static_cast<std::uint64_t>(k), width);
    }
    w.head_h = Conv2d::seeded(seed * 100 + 31, width + 1, width, 1, 1);
    w.head_v = Conv2d::seeded(seed * 100 + 32, width + 1, width, 1, 1);
    return w;
}

std::pair<DenseMap, DenseMap> be_forward(const DenseMap& image, const DenseMap& edge,
                                         const BeWeights& w) {
    if (image.channels() != 3)
        throw ValueError("be_forward: image must have 3 channels");
    if (edge.channels() != 1)
        throw ValueError("be_forward: edge map must have 1 channel");
    if (!edge.same_grid(image.height(), image.width()))
        throw ShapeError("be_forward: image/edge spatial mismatch");

    DenseMap fh = w.horizontal.apply(image);
    DenseMap fv = w.vertical.apply(image);
    for (const ResidualBlock& b : w.blocks_h)
        fh = residual_forward(fh, b);
    for (const ResidualBlock& b : w.blocks_v)
        fv = residual_forward(fv, b);

    const DenseMap cat_h = concat_channels({&fh, &edge});
    const DenseMap cat_v = concat_channels({&fv, &edge});
    return {w.head_h.apply(cat_h), w.head_v.apply(cat_v)};
}

DenseMap boundary_map_forward(const FeaturePyramid& refined, const DenseMap& fb1,
                              const DenseMap& fb2, const Conv2d& head) {
    const int h = fb1.height(), w = fb1.width();
    if (!fb2.same_grid(h, w))
        throw ShapeError("boundary_map_forward: BE feature sizes disagree");

    std::array<DenseMap, 5> up;
    std::vector<const DenseMap*> parts;
    for (int k = 0; k < 5; ++k) {
        up[static_cast<std::size_t>(k)] =
            upsample_nearest(refined.levels[static_cast<std::size_t>(k)], h, w);
        parts.push_back(&up[static_cast<std::size_t>(k)]);
    }
    parts.push_back(&fb1);
    parts.push_back(&fb2);
    const DenseMap cat = concat_channels(parts);
    return sigmoid(head.apply(cat));
}

} // namespace sidkit
