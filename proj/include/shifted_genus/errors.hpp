#pragma once

#include <stdexcept>
#include <string>

namespace shifted_genus {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A valuation or residue was requested at or beyond the carried precision.
struct insufficient_precision : error {
    using error::error;
};

struct not_positive_definite : error {
    using error::error;
};

/// The factor-p growth check of an empirical density never settled.
struct not_stabilized : error {
    using error::error;
};

struct bad_discriminant : error {
    using error::error;
};

/// An exact identity that must hold (integral index, integral class number) failed.
struct invariant_breach : error {
    using error::error;
};

/// Text input did not parse. `position` is a 0-based character offset.
struct parse_error : error {
    parse_error(std::size_t pos, const std::string& reason)
        : error("at position " + std::to_string(pos) + ": " + reason), position(pos) {}
    std::size_t position;
};

} // namespace shifted_genus
