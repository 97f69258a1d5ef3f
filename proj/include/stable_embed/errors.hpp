#pragma once

#include <stdexcept>
#include <string>

namespace stable_embed {

// Shape mismatches between operators, vectors, or composition children.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or unwritable files, malformed CSV/JSON input.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every trial of an experiment failed, so there is no result to report.
class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stable_embed
