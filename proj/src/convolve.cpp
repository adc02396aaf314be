#include "biharm/convolve.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace biharm {

namespace {

using Index = std::ptrdiff_t;

// Source index for coordinate i on an axis of length n, or -1 if the
// sample is an implicit zero.
Index remap(Index i, Index n, BoundaryPolicy b) noexcept {
    if (i >= 0 && i < n) return i;
    switch (b) {
        case BoundaryPolicy::Mirror:
            // a single reflection suffices because n > 2*radius
            return i < 0 ? -i : 2 * (n - 1) - i;
        case BoundaryPolicy::Replicate:
            return i < 0 ? 0 : n - 1;
        case BoundaryPolicy::Zero:
            return -1;
        case BoundaryPolicy::Wrap: {
            const Index m = i % n;
            return m < 0 ? m + n : m;
        }
    }
    return -1;
}

struct Tap {
    Index dx;
    Index dy;
    double coeff;
};

// Non-zero taps in the normative order (q outer, p inner, both ascending).
// Dropping zero taps cannot change a sum: the accumulator starts at +0 and
// never becomes -0, so adding a signed zero leaves it unchanged.
std::vector<Tap> nonzero_taps(const Stencil& s) {
    std::vector<Tap> taps;
    const int r = s.radius();
    for (int q = -r; q <= r; ++q)
        for (int p = -r; p <= r; ++p)
            if (const double c = s(p, q); c != 0.0) taps.push_back({p, q, c});
    return taps;
}

class TiledKernel {
public:
    TiledKernel(const Raster& in, const Stencil& s, BoundaryPolicy b, Raster& out)
        : in_(in), out_(out), taps_(nonzero_taps(s)), radius_(s.radius()), boundary_(b),
          width_(static_cast<Index>(in.width())), height_(static_cast<Index>(in.height())) {}

    void rows(Index y0, Index y1) const {
        const bool has_interior_cols = width_ > 2 * radius_;
        for (Index y = y0; y < y1; ++y) {
            const bool interior_row = y >= radius_ && y + radius_ < height_;
            if (interior_row && has_interior_cols) {
                interior_span(y);
                for (Index x = 0; x < radius_; ++x) border_pixel(x, y);
                for (Index x = width_ - radius_; x < width_; ++x) border_pixel(x, y);
            } else {
                for (Index x = 0; x < width_; ++x) border_pixel(x, y);
            }
        }
    }

private:
    // Tap-outer, pixel-inner: each output still receives its terms in the
    // normative order, and the inner loop vectorises.
    void interior_span(Index y) const {
        const Index x0 = radius_;
        const Index x1 = width_ - radius_;
        double* __restrict dst = out_.row(static_cast<std::size_t>(y)).data();
        std::fill(dst + x0, dst + x1, 0.0);
        for (const Tap& t : taps_) {
            const double* __restrict src = in_.row(static_cast<std::size_t>(y + t.dy)).data() + t.dx;
            const double c = t.coeff;
            for (Index x = x0; x < x1; ++x) dst[x] += c * src[x];
        }
    }

    void border_pixel(Index x, Index y) const {
        double acc = 0.0;
        for (const Tap& t : taps_) {
            const Index sx = remap(x + t.dx, width_, boundary_);
            const Index sy = remap(y + t.dy, height_, boundary_);
            if (sx < 0 || sy < 0) continue;
            acc += t.coeff * in_(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
        }
        out_(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }

    const Raster& in_;
    Raster& out_;
    std::vector<Tap> taps_;
    Index radius_;
    BoundaryPolicy boundary_;
    Index width_;
    Index height_;
};

}  // namespace

std::string_view to_string(BoundaryPolicy b) noexcept {
    switch (b) {
        case BoundaryPolicy::Mirror: return "mirror";
        case BoundaryPolicy::Replicate: return "replicate";
        case BoundaryPolicy::Zero: return "zero";
        case BoundaryPolicy::Wrap: return "wrap";
    }
    return "unknown";
}

std::optional<BoundaryPolicy> parse_boundary(std::string_view name) noexcept {
    if (name == "mirror") return BoundaryPolicy::Mirror;
    if (name == "replicate") return BoundaryPolicy::Replicate;
    if (name == "zero") return BoundaryPolicy::Zero;
    if (name == "wrap") return BoundaryPolicy::Wrap;
    return std::nullopt;
}

void check_boundary_fits(const Raster& r, const Stencil& s, BoundaryPolicy b) {
    if (b != BoundaryPolicy::Mirror) return;
    const auto need = static_cast<std::size_t>(2 * s.radius());
    if (r.width() <= need || r.height() <= need)
        throw std::invalid_argument("mirror boundary needs a raster larger than " + std::to_string(need) +
                                    " pixels in each dimension for a radius-" +
                                    std::to_string(s.radius()) + " stencil, got " +
                                    std::to_string(r.width()) + "x" + std::to_string(r.height()));
}

Raster convolve_reference(const Raster& r, const Stencil& s, BoundaryPolicy b) {
    check_boundary_fits(r, s, b);
    const Index w = static_cast<Index>(r.width());
    const Index h = static_cast<Index>(r.height());
    const int rad = s.radius();
    Raster out(r.width(), r.height(), 0.0);
    for (Index y = 0; y < h; ++y) {
        for (Index x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int q = -rad; q <= rad; ++q) {
                for (int p = -rad; p <= rad; ++p) {
                    const Index sx = remap(x + p, w, b);
                    const Index sy = remap(y + q, h, b);
                    const double sample = (sx < 0 || sy < 0)
                                              ? 0.0
                                              : r(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
                    acc += s(p, q) * sample;
                }
            }
            out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    }
    return out;
}

Raster convolve(const Raster& r, const Stencil& s, BoundaryPolicy b, TileConfig tiles) {
    if (tiles.tile_height == 0) throw std::invalid_argument("tile height must be positive");
    if (tiles.workers == 0) throw std::invalid_argument("worker count must be positive");
    check_boundary_fits(r, s, b);

    Raster out(r.width(), r.height(), 0.0);
    const TiledKernel kernel(r, s, b, out);
    const Index height = static_cast<Index>(r.height());
    const Index tile = static_cast<Index>(std::min(tiles.tile_height, r.height()));
    const Index tile_count = (height + tile - 1) / tile;
    const auto workers = static_cast<Index>(std::min<std::size_t>(tiles.workers, tile_count));

    auto run_tile = [&](Index t) { kernel.rows(t * tile, std::min(height, (t + 1) * tile)); };

    if (workers <= 1) {
        for (Index t = 0; t < tile_count; ++t) run_tile(t);
        return out;
    }

    // Tiles write disjoint rows, so claim order does not affect the result.
    std::atomic<Index> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (Index w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (Index t = next.fetch_add(1); t < tile_count; t = next.fetch_add(1)) run_tile(t);
            });
        }
    }
    return out;
}

Raster apply_stencil(const Raster& r, const Stencil& s, BoundaryPolicy b, const ConvolveOptions& opts) {
    return opts.use_reference ? convolve_reference(r, s, b) : convolve(r, s, b, opts.tiles);
}

}  // namespace biharm
