#include "scribkit/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "scribkit/error.hpp"
#include "scribkit/png_io.hpp"

namespace scribkit {
namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'T', 'B', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) {
        out.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xFFu));
    }
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
        v |= static_cast<std::uint32_t>(b[off + static_cast<std::size_t>(k)]) << (8 * k);
    }
    return v;
}

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    std::ostringstream os;
    os << "tensor blob: " << what << " at byte offset " << offset;
    throw FormatError(os.str());
}

}  // namespace

std::size_t Tensor::element_count() const {
    std::size_t n = 1;
    for (auto d : dims) {
        n *= d;
    }
    return n;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
    if (t.dims.size() > static_cast<std::size_t>(kMaxTensorRank)) {
        throw FormatError("tensor blob: rank above 4");
    }
    if (t.data.size() != t.element_count()) {
        throw ShapeError("tensor blob: payload length does not match dims");
    }
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) {
        put_u32(out, d);
    }
    out.reserve(out.size() + 4 * t.data.size());
    for (float f : t.data) {
        put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
    return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> b) {
    if (b.size() < 5) {
        fail(b.size(), "truncated header");
    }
    if (std::memcmp(b.data(), kMagic, 4) != 0) {
        fail(0, "wrong magic (expected \"RTB1\")");
    }
    const std::size_t rank = b[4];
    if (rank > static_cast<std::size_t>(kMaxTensorRank)) {
        fail(4, "rank " + std::to_string(rank) + " exceeds 4");
    }
    const std::size_t header = 5 + 4 * rank;
    if (b.size() < header) {
        fail(b.size(), "truncated dims");
    }
    Tensor t;
    std::size_t n = 1;
    for (std::size_t k = 0; k < rank; ++k) {
        const std::uint32_t d = get_u32(b, 5 + 4 * k);
        t.dims.push_back(d);
        if (n != 0 && d > (b.size() - header) / 4 / n) {
            fail(b.size(), "truncated payload (dims need more bytes than the blob holds)");
        }
        n *= d;
    }
    const std::size_t expected = header + 4 * n;
    if (b.size() < expected) {
        fail(b.size(), "truncated payload (expected " + std::to_string(expected) + " bytes)");
    }
    if (b.size() > expected) {
        fail(expected, "trailing bytes after payload");
    }
    t.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.data[i] = std::bit_cast<float>(get_u32(b, header + 4 * i));
    }
    return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
    write_file_atomic(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open tensor file " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_tensor(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

Tensor to_tensor(const Grid<double>& map) {
    Tensor t;
    t.dims = {static_cast<std::uint32_t>(map.height()), static_cast<std::uint32_t>(map.width())};
    t.data.reserve(map.size());
    for (double v : map.values()) {
        t.data.push_back(static_cast<float>(v));
    }
    return t;
}

PredictionMap to_prediction(const Tensor& t) {
    const bool ok = t.dims.size() == 2 || (t.dims.size() == 3 && t.dims[2] == 1);
    if (!ok) {
        throw ShapeError("prediction tensor must be H x W or H x W x 1");
    }
    std::vector<double> v(t.data.begin(), t.data.end());
    PredictionMap p(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), std::move(v));
    validate(p);
    return p;
}

Tensor to_tensor(const PatchScoreMap& s) {
    Tensor t;
    t.dims = {static_cast<std::uint32_t>(s.n), static_cast<std::uint32_t>(s.n), 2};
    t.data.assign(s.data.begin(), s.data.end());
    return t;
}

PatchScoreMap to_patch_scores(const Tensor& t) {
    if (t.dims.size() != 3 || t.dims[0] != t.dims[1] || t.dims[2] != 2) {
        throw ShapeError("patch score tensor must be N x N x 2");
    }
    PatchScoreMap s;
    s.n = static_cast<int>(t.dims[0]);
    s.data.assign(t.data.begin(), t.data.end());
    return s;
}

}  // namespace scribkit
