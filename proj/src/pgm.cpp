#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "biharm/error.hpp"
#include "biharm/io.hpp"

namespace biharm {

namespace {

class HeaderReader {
public:
    HeaderReader(std::span<const std::uint8_t> data, std::size_t pos) : data_(data), pos_(pos) {}

    std::size_t pos() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ >= data_.size(); }

    void skip_space_and_comments() {
        while (!at_end()) {
            const auto c = data_[pos_];
            if (c == '#') {
                while (!at_end() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (!at_end() && std::isdigit(data_[pos_])) {
            value = value * 10 + (data_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw ParseError(std::string(what) + " is too large", start);
            ++pos_;
        }
        if (pos_ == start) {
            if (at_end()) throw ParseError(std::string("truncated PGM: expected ") + what, pos_);
            throw ParseError(std::string("expected ") + what, pos_);
        }
        return value;
    }

    void single_whitespace(const char* after) {
        if (at_end() || !std::isspace(data_[pos_]))
            throw ParseError(std::string("expected whitespace after ") + after, pos_);
        ++pos_;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_;
};

}  // namespace

Raster decode_pgm(std::span<const std::uint8_t> data) {
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        throw ParseError("not a PGM file (expected magic P2 or P5)", 0);
    const bool binary = data[1] == '5';

    HeaderReader header(data, 2);
    header.single_whitespace("magic");
    const auto width = header.number("width");
    const auto height = header.number("height");
    header.skip_space_and_comments();
    const std::size_t maxval_offset = header.pos();
    const auto maxval = header.number("maxval");
    if (width == 0 || height == 0) throw ParseError("PGM dimensions must be positive", 2);
    if (maxval == 0 || maxval > 65535)
        throw UnsupportedFormat("PGM maxval " + std::to_string(maxval) + " at byte " +
                                std::to_string(maxval_offset) + " is outside 1..65535");

    const std::size_t count = width * height;
    // every sample takes at least one byte in either encoding
    if (count / width != height || count > data.size() - header.pos())
        throw ParseError("truncated PGM payload", data.size());
    std::vector<double> samples(count);

    if (binary) {
        // exactly one whitespace byte separates the header from the payload
        header.single_whitespace("maxval");
        const std::size_t start = header.pos();
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        const std::size_t needed = count * bytes_per_sample;
        if (data.size() - start < needed)
            throw ParseError("truncated PGM payload: need " + std::to_string(needed) + " bytes, have " +
                                 std::to_string(data.size() - start),
                             data.size());
        const auto* p = data.data() + start;
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v = bytes_per_sample == 2 ? (unsigned{p[2 * i]} << 8) | p[2 * i + 1] : p[i];
            if (v > maxval)
                throw ParseError("PGM sample exceeds maxval", start + i * bytes_per_sample);
            samples[i] = static_cast<double>(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            header.skip_space_and_comments();
            const std::size_t at = header.pos();
            const auto v = header.number("sample");
            if (v > maxval) throw ParseError("PGM sample exceeds maxval", at);
            samples[i] = static_cast<double>(v);
        }
    }
    return Raster(width, height, std::move(samples));
}

Raster load_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

Bytes encode_pgm(const Raster& r, int maxval) {
    if (maxval != 255 && maxval != 65535)
        throw std::invalid_argument("PGM maxval must be 255 or 65535");
    const std::string header =
        "P5\n" + std::to_string(r.width()) + " " + std::to_string(r.height()) + "\n" +
        std::to_string(maxval) + "\n";
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + r.size() * (maxval > 255 ? 2 : 1));
    const double top = maxval;
    for (double v : r.samples()) {
        const auto q = static_cast<unsigned>(std::round(std::clamp(v, 0.0, top)));
        if (maxval > 255) out.push_back(static_cast<std::uint8_t>(q >> 8));
        out.push_back(static_cast<std::uint8_t>(q & 0xFF));
    }
    return out;
}

void save_pgm(const Raster& r, const std::filesystem::path& path, int maxval) {
    write_file(path, encode_pgm(r, maxval));
}

}  // namespace biharm
