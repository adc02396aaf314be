#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "biharm/raster.hpp"
#include "biharm/stencil.hpp"

namespace biharm {

/// Rule supplying samples outside the raster.
///   Mirror    -k -> k, (n-1)+k -> (n-1)-k  (reflect about the edge pixel)
///   Replicate clamp to the nearest edge index
///   Zero      out-of-range samples read as 0
///   Wrap      periodic
enum class BoundaryPolicy { Mirror, Replicate, Zero, Wrap };

std::string_view to_string(BoundaryPolicy b) noexcept;
std::optional<BoundaryPolicy> parse_boundary(std::string_view name) noexcept;

/// Mirror needs both raster dimensions to exceed 2*radius; throws
/// std::invalid_argument otherwise.
void check_boundary_fits(const Raster& r, const Stencil& s, BoundaryPolicy b);

/// Reference engine. out(x,y) = sum over q then p (ascending) of
/// coeff(p,q) * in(x+p, y+q), accumulated in double. No kernel flip.
Raster convolve_reference(const Raster& r, const Stencil& s, BoundaryPolicy b);

struct TileConfig {
    std::size_t tile_height = 64;
    unsigned workers = 1;
};

/// Tiled engine: horizontal bands of `tile_height` rows handed to `workers`
/// threads. Bit-identical to convolve_reference for every tiling and worker
/// count. Throws std::invalid_argument for a zero tile height or worker
/// count.
Raster convolve(const Raster& r, const Stencil& s, BoundaryPolicy b, TileConfig tiles = {});

/// Engine selection for callers that apply stencils repeatedly.
struct ConvolveOptions {
    bool use_reference = false;
    TileConfig tiles{};
};

Raster apply_stencil(const Raster& r, const Stencil& s, BoundaryPolicy b, const ConvolveOptions& opts);

}  // namespace biharm
