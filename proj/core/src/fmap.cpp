#include "sidkit/fmap.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace sidkit {
namespace {

constexpr char kMagic[4] = {'F', 'M', 'A', 'P'};
constexpr std::uint32_t kMaxDim = 1u << 16;

void check_dim(std::uint32_t d) {
    if (d == 0)
        throw FormatError("FMAP: zero dimension");
    if (d > kMaxDim)
        throw FormatError("FMAP: dimension overflow (dim > 2^16)");
}

std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32le(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

} // namespace

DenseMap load_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());

    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header))
        throw FormatError("FMAP: truncated header in " + path.string());
    if (std::memcmp(header, kMagic, 4) != 0)
        throw FormatError("FMAP: bad magic in " + path.string());

    const std::uint32_t h = read_u32le(header + 4);
    const std::uint32_t w = read_u32le(header + 8);
    const std::uint32_t c = read_u32le(header + 12);
    check_dim(h);
    check_dim(w);
    check_dim(c);

    // The file must hold exactly the declared payload; checking the size up
    // front also keeps a forged header from forcing a huge allocation.
    const std::size_t count = std::size_t(h) * w * c;
    std::error_code ec;
    const std::uintmax_t file_size = std::filesystem::file_size(path, ec);
    if (ec)
        throw IoError("cannot stat " + path.string());
    if (file_size != 16 + count * 4)
        throw FormatError(file_size < 16 + count * 4
                              ? "FMAP: truncated payload in " + path.string()
                              : "FMAP: trailing bytes in " + path.string());

    std::vector<float> data(count);
    static_assert(sizeof(float) == 4);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * 4));
    if (in.gcount() != static_cast<std::streamsize>(count * 4))
        throw FormatError("FMAP: truncated payload in " + path.string());

    return DenseMap(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                    std::move(data));
}

void save_map(const DenseMap& map, const std::filesystem::path& path) {
    check_dim(static_cast<std::uint32_t>(map.height()));
    check_dim(static_cast<std::uint32_t>(map.width()));
    check_dim(static_cast<std::uint32_t>(map.channels()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(kMagic, 4);
    write_u32le(out, static_cast<std::uint32_t>(map.height()));
    write_u32le(out, static_cast<std::uint32_t>(map.width()));
    write_u32le(out, static_cast<std::uint32_t>(map.channels()));
    // Host is little-endian; floats written verbatim.
    out.write(reinterpret_cast<const char*>(map.data().data()),
              static_cast<std::streamsize>(map.size() * 4));
    if (!out)
        throw IoError("write failed for " + path.string());
}

InstanceLabelMap load_labels(const std::filesystem::path& path) {
    const DenseMap map = load_map(path);
    if (map.channels() != 1)
        throw FormatError("label map must have channels=1: " + path.string());
    std::vector<std::int32_t> labels(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        const float v = map.data()[i];
        if (!(v >= 0.0f) || v != std::floor(v))
            throw FormatError("label map carries non-integer values: " + path.string());
        if (v > 16777216.0f) // ids above 2^24 are not exact in float
            throw FormatError("label map id overflows: " + path.string());
        labels[i] = static_cast<std::int32_t>(v);
    }
    return InstanceLabelMap(map.height(), map.width(), std::move(labels));
}

void save_labels(const InstanceLabelMap& labels, const std::filesystem::path& path) {
    std::vector<float> data(labels.labels().size());
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = static_cast<float>(labels.labels()[i]);
    save_map(DenseMap(labels.height(), labels.width(), 1, std::move(data)), path);
}

OffsetField load_offsets(const std::filesystem::path& path) {
    const DenseMap map = load_map(path);
    if (map.channels() != 2)
        throw FormatError("offset field must have channels=2: " + path.string());
    std::vector<OffsetField::Vec> vecs(map.pixels());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        vecs[i].dy = map.data()[2 * i];
        vecs[i].dx = map.data()[2 * i + 1];
    }
    return OffsetField(map.height(), map.width(), std::move(vecs));
}

void save_offsets(const OffsetField& field, const std::filesystem::path& path) {
    std::vector<float> data(field.pixels() * 2);
    for (std::size_t i = 0; i < field.pixels(); ++i) {
        data[2 * i] = field.vectors()[i].dy;
        data[2 * i + 1] = field.vectors()[i].dx;
    }
    save_map(DenseMap(field.height(), field.width(), 2, std::move(data)), path);
}

} // namespace sidkit
