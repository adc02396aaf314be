#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biharm {

// Precondition violations (bad increments, undersized rasters, mismatched
// dimensions) are reported as std::invalid_argument.

/// Malformed input file or text. `offset` is the byte position where
/// parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Well-formed input that uses a feature this library does not read.
class UnsupportedFormat : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biharm
