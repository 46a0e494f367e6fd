#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hnswmerge {

// Invalid arguments are reported with std::invalid_argument.

/// A vertex or layer that was looked up does not exist.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed on-disk data. `offset` is the byte position where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class UnsupportedVersionError : public FormatError {
public:
    UnsupportedVersionError(std::uint32_t version, std::uint64_t offset)
        : FormatError("unsupported index file version " + std::to_string(version), offset),
          version_(version) {}

    std::uint32_t version() const noexcept { return version_; }

private:
    std::uint32_t version_;
};

}  // namespace hnswmerge
