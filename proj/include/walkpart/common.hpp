#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkpart {

inline constexpr const char* kVersion = "0.1.0";

using VertexId = std::uint32_t;
using PartitionId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = static_cast<VertexId>(-1);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data (edge lists, partition files).
struct ParseError : Error {
    using Error::Error;
};

// Caller-supplied parameters out of range or unsatisfiable.
struct ValidationError : Error {
    using Error::Error;
};

// A structural invariant of a PartitionSet or table is broken.
struct IntegrityError : Error {
    using Error::Error;
};

}  // namespace walkpart
