#include "biharm/scene.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "biharm/error.hpp"
#include "biharm/io.hpp"

namespace biharm {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

double per_band(const std::vector<double>& values, std::size_t band) {
    return values.size() == 1 ? values.front() : values[band];
}

void check_per_band(const std::vector<double>& values, std::size_t bands, const char* what) {
    if (values.size() != 1 && values.size() != bands)
        throw std::invalid_argument(std::string(what) + ": expected 1 or " + std::to_string(bands) +
                                    " values, got " + std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

struct PixelSpan {
    long first;
    long last;  // inclusive
};

PixelSpan rect_span(double centre, std::size_t size) {
    const double lo = centre - static_cast<double>(size) / 2.0;
    const long first = static_cast<long>(std::ceil(lo));
    return {first, first + static_cast<long>(size) - 1};
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform_open0() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double GaussianSource::next() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform_open0();
    const double u2 = rng_.uniform_open0();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Raster anomaly_footprint(const AnomalySpec& a, std::size_t width, std::size_t height) {
    Raster mask(width, height, 0.0);
    const long w = static_cast<long>(width);
    const long h = static_cast<long>(height);
    auto inside = [&](PixelSpan xs, PixelSpan ys) {
        return xs.first >= 0 && ys.first >= 0 && xs.last < w && ys.last < h;
    };

    if (a.shape == AnomalyShape::Rectangle) {
        if (a.width == 0 || a.height == 0)
            throw std::invalid_argument("rectangle anomaly needs positive width and height");
        const auto xs = rect_span(a.cx, a.width);
        const auto ys = rect_span(a.cy, a.height);
        if (!inside(xs, ys)) throw std::invalid_argument("rectangle anomaly footprint leaves the image");
        for (long y = ys.first; y <= ys.last; ++y)
            for (long x = xs.first; x <= xs.last; ++x) mask(x, y) = 1.0;
        return mask;
    }

    if (!(a.radius >= 0.0) || !std::isfinite(a.radius))
        throw std::invalid_argument("disk anomaly radius must be non-negative");
    const PixelSpan xs{static_cast<long>(std::ceil(a.cx - a.radius)),
                       static_cast<long>(std::floor(a.cx + a.radius))};
    const PixelSpan ys{static_cast<long>(std::ceil(a.cy - a.radius)),
                       static_cast<long>(std::floor(a.cy + a.radius))};
    if (!inside(xs, ys)) throw std::invalid_argument("disk anomaly footprint leaves the image");
    const double r2 = a.radius * a.radius;
    for (long y = ys.first; y <= ys.last; ++y) {
        for (long x = xs.first; x <= xs.last; ++x) {
            const double dx = static_cast<double>(x) - a.cx;
            const double dy = static_cast<double>(y) - a.cy;
            if (dx * dx + dy * dy <= r2) mask(x, y) = 1.0;
        }
    }
    return mask;
}

Scene synth_scene(const SceneSpec& spec) {
    if (spec.width == 0 || spec.height == 0 || spec.bands == 0)
        throw std::invalid_argument("scene width, height and band count must be positive");
    if (!(spec.background.noise_sigma >= 0.0) || !std::isfinite(spec.background.noise_sigma))
        throw std::invalid_argument("noise sigma must be non-negative");
    check_per_band(spec.background.levels, spec.bands, "background levels");
    if (!spec.band_names.empty() && spec.band_names.size() != spec.bands)
        throw std::invalid_argument("band name count does not match band count");

    std::vector<Raster> footprints;
    for (const auto& a : spec.anomalies) {
        check_per_band(a.amplitudes, spec.bands, "anomaly amplitudes");
        footprints.push_back(anomaly_footprint(a, spec.width, spec.height));
    }

    Raster truth(spec.width, spec.height, 0.0);
    for (const auto& fp : footprints)
        for (std::size_t i = 0; i < fp.size(); ++i)
            if (fp.samples()[i] != 0.0) truth.samples()[i] = 1.0;

    const auto& t = spec.background.trend;
    GaussianSource noise(spec.seed);
    std::vector<Raster> bands;
    bands.reserve(spec.bands);
    for (std::size_t b = 0; b < spec.bands; ++b) {
        Raster band(spec.width, spec.height, 0.0);
        const double level = per_band(spec.background.levels, b);
        for (std::size_t y = 0; y < spec.height; ++y) {
            for (std::size_t x = 0; x < spec.width; ++x) {
                const double fx = static_cast<double>(x);
                const double fy = static_cast<double>(y);
                const double trend =
                    t[0] + t[1] * fx + t[2] * fy + t[3] * fx * fx + t[4] * fx * fy + t[5] * fy * fy;
                // drawn even when sigma is 0 so the stream layout never depends on it
                const double z = noise.next();
                double v = level + trend;
                if (spec.background.noise_sigma > 0.0) v += spec.background.noise_sigma * z;
                for (std::size_t k = 0; k < footprints.size(); ++k)
                    if (footprints[k](x, y) != 0.0) v += per_band(spec.anomalies[k].amplitudes, b);
                band(x, y) = v;
            }
        }
        bands.push_back(std::move(band));
    }
    return Scene{BandSet(std::move(bands), spec.band_names), std::move(truth)};
}

// ---- text format ------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class LineParser {
public:
    explicit LineParser(std::size_t offset) : offset_(offset) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("scene spec: " + msg, offset_); }

    double real(std::string_view s) const {
        s = trim(s);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
            fail("expected a number, got '" + std::string(s) + "'");
        return v;
    }

    std::uint64_t integer(std::string_view s) const {
        s = trim(s);
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            fail("expected a non-negative integer, got '" + std::string(s) + "'");
        return v;
    }

    std::vector<double> reals(std::string_view s) const {
        std::vector<double> out;
        for (const auto& item : split(s, ',')) out.push_back(real(item));
        return out;
    }

    static std::vector<std::string_view> split(std::string_view s, char sep) {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(sep, start);
            out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return out;
    }

private:
    std::size_t offset_;
};

AnomalySpec parse_anomaly(std::string_view value, const LineParser& lp) {
    std::vector<std::string_view> words;
    for (auto w : LineParser::split(value, ' '))
        if (!w.empty()) words.push_back(w);
    if (words.empty()) lp.fail("anomaly needs a shape");

    AnomalySpec a;
    if (words[0] == "disk") {
        a.shape = AnomalyShape::Disk;
    } else if (words[0] == "rect" || words[0] == "rectangle") {
        a.shape = AnomalyShape::Rectangle;
    } else {
        lp.fail("unknown anomaly shape '" + std::string(words[0]) + "'");
    }

    bool cx = false, cy = false, size = false, amp = false;
    for (std::size_t i = 1; i < words.size(); ++i) {
        const auto eq = words[i].find('=');
        if (eq == std::string_view::npos) lp.fail("expected key=value, got '" + std::string(words[i]) + "'");
        const auto key = words[i].substr(0, eq);
        const auto val = words[i].substr(eq + 1);
        if (key == "cx") {
            a.cx = lp.real(val);
            cx = true;
        } else if (key == "cy") {
            a.cy = lp.real(val);
            cy = true;
        } else if (key == "r" && a.shape == AnomalyShape::Disk) {
            a.radius = lp.real(val);
            size = true;
        } else if (key == "w" && a.shape == AnomalyShape::Rectangle) {
            a.width = lp.integer(val);
        } else if (key == "h" && a.shape == AnomalyShape::Rectangle) {
            a.height = lp.integer(val);
        } else if (key == "amp") {
            a.amplitudes = lp.reals(val);
            amp = true;
        } else {
            lp.fail("unknown anomaly attribute '" + std::string(key) + "'");
        }
    }
    if (a.shape == AnomalyShape::Rectangle) size = a.width > 0 && a.height > 0;
    if (!cx || !cy || !size || !amp) lp.fail("anomaly is missing cx, cy, size or amp");
    return a;
}

}  // namespace

SceneSpec parse_scene_spec(std::string_view text) {
    SceneSpec spec;
    bool have_width = false, have_height = false;
    std::size_t offset = 0;
    while (offset < text.size()) {
        auto end = text.find('\n', offset);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(offset, end - offset);
        const LineParser lp(offset);
        offset = end + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) lp.fail("expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "width") {
            spec.width = lp.integer(value);
            have_width = true;
        } else if (key == "height") {
            spec.height = lp.integer(value);
            have_height = true;
        } else if (key == "bands") {
            spec.bands = lp.integer(value);
        } else if (key == "band_names") {
            spec.band_names.clear();
            for (auto n : LineParser::split(value, ',')) spec.band_names.emplace_back(n);
        } else if (key == "seed") {
            spec.seed = lp.integer(value);
        } else if (key == "background") {
            spec.background.levels = lp.reals(value);
        } else if (key == "noise_sigma") {
            spec.background.noise_sigma = lp.real(value);
        } else if (key == "trend") {
            const auto coeffs = lp.reals(value);
            if (coeffs.size() != 6) lp.fail("trend needs 6 coefficients");
            std::copy(coeffs.begin(), coeffs.end(), spec.background.trend.begin());
        } else if (key == "anomaly") {
            spec.anomalies.push_back(parse_anomaly(value, lp));
        } else {
            lp.fail("unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_width || !have_height) throw ParseError("scene spec: width and height are required", text.size());
    return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse_scene_spec(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace biharm
