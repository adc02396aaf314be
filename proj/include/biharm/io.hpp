#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "biharm/raster.hpp"

namespace biharm {

using Bytes = std::vector<std::uint8_t>;

// ---- PGM ------------------------------------------------------------------
//
// Reads P2 (ASCII) and P5 (binary) greymaps with maxval 1..65535. Samples are
// returned as stored, without normalisation; 16-bit P5 payloads are
// big-endian. Writing always produces P5.

Raster decode_pgm(std::span<const std::uint8_t> data);
Raster load_pgm(const std::filesystem::path& path);

/// `maxval` must be 255 or 65535. Samples are clamped to [0, maxval] and
/// rounded half away from zero.
Bytes encode_pgm(const Raster& r, int maxval = 255);
void save_pgm(const Raster& r, const std::filesystem::path& path, int maxval = 255);

// ---- BFR1 -----------------------------------------------------------------
//
//   "BFR1"
//   u32 width, u32 height, u32 band_count          (little-endian)
//   band_count x { u16 name_length, UTF-8 bytes }  (little-endian length)
//   band_count x height x width f32 samples        (IEEE-754, little-endian,
//                                                   band-sequential, row-major)

BandSet decode_bandset(std::span<const std::uint8_t> data);
BandSet load_bandset(const std::filesystem::path& path);

/// Throws std::invalid_argument if a sample does not fit in a finite float
/// or a name is longer than 65535 bytes.
Bytes encode_bandset(const BandSet& b);
void save_bandset(const BandSet& b, const std::filesystem::path& path);

// ---- helpers --------------------------------------------------------------

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

/// True if the bytes start with the BFR1 magic.
bool looks_like_bandset(std::span<const std::uint8_t> data);

/// Loads either format: a PGM becomes a one-band set named after the file
/// stem.
BandSet load_any(const std::filesystem::path& path);

}  // namespace biharm
