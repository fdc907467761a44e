#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "sidkit/fmap.hpp"

using namespace sidkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("fmap encodes a single value as 16-byte header plus one float") {
    const fs::path p = temp_file("single.fmap");
    save_map(DenseMap(1, 1, 1, {0.25f}), p);
    const std::vector<unsigned char> bytes = read_bytes(p);
    REQUIRE(bytes.size() == 20);
    CHECK(std::memcmp(bytes.data(), "FMAP", 4) == 0);
    const unsigned char expected_dims[12] = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
    CHECK(std::memcmp(bytes.data() + 4, expected_dims, 12) == 0);
    // 0.25f little-endian is 00 00 80 3E
    const unsigned char payload[4] = {0x00, 0x00, 0x80, 0x3E};
    CHECK(std::memcmp(bytes.data() + 16, payload, 4) == 0);
}

TEST_CASE("fmap header dims survive a round trip") {
    const fs::path p = temp_file("dims.fmap");
    save_map(DenseMap(2, 3, 1, std::vector<float>(6, 0.5f)), p);
    const DenseMap back = load_map(p);
    CHECK(back.height() == 2);
    CHECK(back.width() == 3);
    CHECK(back.channels() == 1);
}

TEST_CASE("fmap rejects bad inputs") {
    CHECK_THROWS_AS(load_map(temp_file("does-not-exist.fmap")), IoError);

    const fs::path bad = temp_file("bad-magic.fmap");
    {
        std::ofstream out(bad, std::ios::binary);
        out.write("XMAP", 4);
        const std::uint32_t dims[3] = {1, 1, 1};
        out.write(reinterpret_cast<const char*>(dims), 12);
        const float v = 0.0f;
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    CHECK_THROWS_AS(load_map(bad), FormatError);

    const fs::path trunc = temp_file("trunc.fmap");
    {
        std::ofstream out(trunc, std::ios::binary);
        out.write("FMAP", 4);
        const std::uint32_t dims[3] = {2, 2, 1};
        out.write(reinterpret_cast<const char*>(dims), 12);
        const float v = 0.0f;
        out.write(reinterpret_cast<const char*>(&v), 4); // 3 floats short
    }
    CHECK_THROWS_AS(load_map(trunc), FormatError);

    // Dimension overflow is refused on write.
    CHECK_THROWS_AS(
        save_map(DenseMap(1, 1 << 17, 1, std::vector<float>(1 << 17, 0.0f)), temp_file("big.fmap")),
        FormatError);

    // Trailing bytes are refused (they would break the byte round trip).
    const fs::path padded = temp_file("padded.fmap");
    save_map(DenseMap(1, 1, 1, {0.5f}), padded);
    std::ofstream(padded, std::ios::binary | std::ios::app) << "x";
    CHECK_THROWS_AS(load_map(padded), FormatError);

    // A forged header declaring a huge payload is rejected before allocating.
    const fs::path forged = temp_file("forged.fmap");
    {
        std::ofstream out(forged, std::ios::binary);
        out.write("FMAP", 4);
        const std::uint32_t dims[3] = {65536, 65536, 1};
        out.write(reinterpret_cast<const char*>(dims), 12);
    }
    CHECK_THROWS_AS(load_map(forged), FormatError);
}

TEST_CASE("fmap round trip is exact for random maps") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int h = 1 + static_cast<int>(gen() % 8);
        const int w = 1 + static_cast<int>(gen() % 8);
        const int c = 1 + static_cast<int>(gen() % 4);
        std::vector<float> data(static_cast<std::size_t>(h) * w * c);
        for (float& v : data)
            v = static_cast<float>(static_cast<double>(gen() >> 11) * 0x1.0p-53 * 10.0 - 5.0);
        const DenseMap map(h, w, c, data);

        const fs::path p = temp_file("roundtrip.fmap");
        save_map(map, p);
        const DenseMap back = load_map(p);
        REQUIRE(back.same_shape(map));
        CHECK(std::memcmp(back.data().data(), map.data().data(), data.size() * 4) == 0);

        // save(load(p)) reproduces the file bytes.
        const fs::path p2 = temp_file("roundtrip2.fmap");
        save_map(back, p2);
        CHECK(read_bytes(p) == read_bytes(p2));
    }
}

TEST_CASE("probability maps reject out-of-range values and clamp slop") {
    CHECK_THROWS_AS(DenseMap::probability(1, 1, 1, {1.1f}), ValueError);
    CHECK_THROWS_AS(DenseMap::probability(1, 1, 1, {-0.5f}), ValueError);
    const DenseMap ok = DenseMap::probability(1, 2, 1, {-5e-10f, 1.0f});
    CHECK(ok.at(0, 0) == 0.0f);
    CHECK(ok.at(0, 1) == 1.0f);
}

TEST_CASE("to_gray uses the BT.601 weights") {
    DenseMap white(1, 1, 3, {1.0f, 1.0f, 1.0f});
    CHECK(to_gray(white).at(0, 0) == 255);
    DenseMap black(1, 1, 3, {0.0f, 0.0f, 0.0f});
    CHECK(to_gray(black).at(0, 0) == 0);
    DenseMap red(1, 1, 3, {1.0f, 0.0f, 0.0f});
    CHECK(to_gray(red).at(0, 0) == 76); // round(255 * 0.299)
    CHECK_THROWS_AS(to_gray(DenseMap(1, 1, 1, {0.5f})), ValueError);
}

TEST_CASE("to_gray is monotone in each channel and bounded") {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 200; ++trial) {
        float base[3];
        for (float& v : base)
            v = static_cast<float>(static_cast<double>(gen() >> 11) * 0x1.0p-53);
        const int ch = static_cast<int>(gen() % 3);
        float bumped[3] = {base[0], base[1], base[2]};
        bumped[ch] = std::min(1.0f, bumped[ch] + 0.25f);

        const auto g0 = to_gray(DenseMap(1, 1, 3, {base[0], base[1], base[2]})).at(0, 0);
        const auto g1 = to_gray(DenseMap(1, 1, 3, {bumped[0], bumped[1], bumped[2]})).at(0, 0);
        CHECK(g1 >= g0);
    }
}

TEST_CASE("offset fields clamp pointed-to targets at construction") {
    OffsetField f(2, 2, {{-5.0f, 0.0f}, {0.0f, 9.0f}, {0.0f, 0.0f}, {3.5f, 3.5f}});
    CHECK(f.at(0, 0).dy == 0.0f);
    CHECK(f.at(0, 1).dx == 0.0f);
    CHECK(f.at(1, 1).dy == 0.0f);
    CHECK(f.at(1, 1).dx == 0.0f);
    const auto [ty, tx] = f.target(0, 0);
    CHECK(ty == 0);
    CHECK(tx == 0);
}

TEST_CASE("offset field fmap round trip") {
    // Vectors whose targets are in bounds, so reload-time clamping is a no-op.
    OffsetField f(2, 3, {{0, 0}, {1.0f, -1.0f}, {0, 0}, {0, 0}, {0, 0}, {-1.0f, -0.5f}});
    const fs::path p = temp_file("offsets.fmap");
    save_offsets(f, p);
    CHECK(load_offsets(p) == f);
    CHECK_THROWS_AS(load_offsets(temp_file("single.fmap")), FormatError); // channels=1 file
}

TEST_CASE("label maps enforce contiguous ids") {
    CHECK_THROWS_AS(InstanceLabelMap(1, 3, {0, 2, 2}), ValueError); // id 1 missing
    CHECK_THROWS_AS(InstanceLabelMap(1, 2, {0, -1}), ValueError);
    const InstanceLabelMap ok(1, 4, {0, 1, 2, 1});
    CHECK(ok.count() == 2);
    CHECK(ok.areas() == std::vector<int>{2, 1});

    const fs::path p = temp_file("labels.fmap");
    save_labels(ok, p);
    CHECK(load_labels(p) == ok);

    save_map(DenseMap(1, 1, 1, {0.5f}), p); // non-integer payload
    CHECK_THROWS_AS(load_labels(p), FormatError);
}

TEST_CASE("compact_labels renumbers in first-appearance order") {
    const InstanceLabelMap m = compact_labels(1, 5, {0, 7, 3, 7, 9});
    CHECK(m.labels() == std::vector<std::int32_t>{0, 1, 2, 1, 3});
}

TEST_CASE("loading garbage bytes throws instead of crashing") {
    std::mt19937_64 gen(99);
    const fs::path p = temp_file("garbage.fmap");
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = gen() % 64;
        std::vector<char> junk(len);
        for (char& c : junk)
            c = static_cast<char>(gen() & 0xff);
        // Half the trials keep a valid magic so the dim/payload paths get hit.
        if (trial % 2 == 0 && len >= 4)
            std::memcpy(junk.data(), "FMAP", 4);
        std::ofstream(p, std::ios::binary | std::ios::trunc)
            .write(junk.data(), static_cast<std::streamsize>(junk.size()));
        CHECK_THROWS_AS(load_map(p), Error);
    }
}

TEST_CASE("offset targets round half away from zero before clamping") {
    OffsetField f(1, 4, {{0.0f, 1.5f}, {0.0f, 1.49f}, {0.0f, -0.5f}, {0.0f, 0.0f}});
    CHECK(f.target(0, 0) == std::pair<int, int>{0, 2}); // 0 + 1.5 -> 2
    CHECK(f.target(0, 1) == std::pair<int, int>{0, 2}); // 1 + 1.49 -> 2
    CHECK(f.target(0, 2) == std::pair<int, int>{0, 2}); // 2 - 0.5 -> 2 after rounding
}
