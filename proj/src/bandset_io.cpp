#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "biharm/error.hpp"
#include "biharm/io.hpp"

namespace biharm {

namespace {

constexpr std::uint8_t kMagic[4] = {'B', 'F', 'R', '1'};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n)
            throw ParseError(std::string("truncated BFR1 file while reading ") + what, data_.size());
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const auto* p = data_.data() + pos_;
        pos_ += 2;
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        const auto* p = data_.data() + pos_;
        pos_ += 4;
        return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
               (std::uint32_t{p[3]} << 24);
    }

    std::span<const std::uint8_t> bytes(std::size_t n, const char* what) {
        need(n, what);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument(std::string(what) + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

BandSet decode_bandset(std::span<const std::uint8_t> data) {
    if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw ParseError("not a BFR1 file (bad magic)", 0);
    ByteReader in(data.subspan(4));
    const std::size_t base = 4;

    const std::size_t width = in.u32("width");
    const std::size_t height = in.u32("height");
    const std::size_t count = in.u32("band count");
    if (width == 0 || height == 0 || count == 0)
        throw ParseError("BFR1 dimensions and band count must be positive", base + in.pos());

    std::vector<std::string> names;
    for (std::size_t b = 0; b < count; ++b) {
        const auto len = in.u16("band name length");
        const auto raw = in.bytes(len, "band name");
        names.emplace_back(raw.begin(), raw.end());
    }

    const std::size_t pixels = width * height;
    if (in.remaining() / 4 / count < pixels)
        throw ParseError("truncated BFR1 payload", data.size());
    if (in.remaining() != pixels * count * 4)
        throw ParseError("trailing bytes after BFR1 payload", base + in.pos() + pixels * count * 4);

    std::vector<Raster> bands;
    bands.reserve(count);
    for (std::size_t b = 0; b < count; ++b) {
        std::vector<double> samples(pixels);
        for (std::size_t i = 0; i < pixels; ++i) {
            const std::size_t at = base + in.pos();
            const auto value = std::bit_cast<float>(in.u32("sample"));
            if (!std::isfinite(value)) throw ParseError("non-finite sample in BFR1 payload", at);
            samples[i] = value;
        }
        bands.emplace_back(width, height, std::move(samples));
    }
    return BandSet(std::move(bands), std::move(names));
}

BandSet load_bandset(const std::filesystem::path& path) { return decode_bandset(read_file(path)); }

Bytes encode_bandset(const BandSet& b) {
    Bytes out(std::begin(kMagic), std::end(kMagic));
    put_u32(out, checked_u32(b.width(), "width"));
    put_u32(out, checked_u32(b.height(), "height"));
    put_u32(out, checked_u32(b.band_count(), "band count"));
    for (const auto& name : b.names()) {
        if (name.size() > std::numeric_limits<std::uint16_t>::max())
            throw std::invalid_argument("band name longer than 65535 bytes");
        put_u16(out, static_cast<std::uint16_t>(name.size()));
        out.insert(out.end(), name.begin(), name.end());
    }
    out.reserve(out.size() + b.band_count() * b.width() * b.height() * 4);
    for (const auto& band : b.bands()) {
        for (double v : band.samples()) {
            const auto f = static_cast<float>(v);
            if (!std::isfinite(f))
                throw std::invalid_argument("sample " + std::to_string(v) + " overflows 32-bit float");
            put_u32(out, std::bit_cast<std::uint32_t>(f));
        }
    }
    return out;
}

void save_bandset(const BandSet& b, const std::filesystem::path& path) {
    write_file(path, encode_bandset(b));
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IoError("error writing " + path.string());
}

bool looks_like_bandset(std::span<const std::uint8_t> data) {
    return data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) == 0;
}

BandSet load_any(const std::filesystem::path& path) {
    const auto data = read_file(path);
    if (looks_like_bandset(data)) return decode_bandset(data);
    std::vector<Raster> bands;
    bands.push_back(decode_pgm(data));
    return BandSet(std::move(bands), {path.stem().string()});
}

}  // namespace biharm
