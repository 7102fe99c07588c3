#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tuckmat {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller (bad mode index,
// shape mismatch, out-of-range voxel index, ...).
struct ContractViolation : Error {
    using Error::Error;
};

// Source and observation point (numerically) coincide.
struct SingularityError : Error {
    using Error::Error;
};

// A dense allocation would exceed the configured memory cap.
struct CapacityError : Error {
    using Error::Error;
};

// Invalid scene geometry; remembers which source broke the rule.
struct SceneError : Error {
    SceneError(const std::string& msg, std::size_t source_index)
        : Error(msg), source(source_index) {}
    std::size_t source;
};

// Malformed persisted file; remembers where parsing stopped.
struct ParseError : Error {
    ParseError(const std::string& msg, std::uint64_t offset)
        : Error(msg + " (byte offset " + std::to_string(offset) + ")"),
          byte_offset(offset) {}
    std::uint64_t byte_offset;
};

// Bad experiment configuration (CLI or JSON).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace tuckmat
