#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace svb {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax, bad grammar). Carries a byte offset when known.
struct ParseError : Error {
    explicit ParseError(const std::string& what, std::size_t byte = 0) : Error(what), byte_offset(byte) {}
    std::size_t byte_offset;
};

struct StructuralError : Error {
    using Error::Error;
};
struct InputError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct CapacityError : Error {
    using Error::Error;
};
struct EmbeddingError : Error {
    using Error::Error;
};
struct UnsupportedModelError : Error {
    using Error::Error;
};
struct IncompleteDataError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace svb
