#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ceildyn/arith.hpp"

namespace ceildyn {

/// log10 of the k-th iterate of x*ceil(x), with an error bound that is
/// propagated through every step.
struct MagnitudeTracker {
    std::uint64_t steps = 0;
    std::string log10_value;   // decimal, ~40 significant digits
    std::string error_bound;   // absolute bound on |log10_value - true value|
    /// Decimal length of the iterate when the error interval does not
    /// straddle an integer (meaningful for integral iterates).
    std::optional<BigInt> digit_count;
    /// log10 of the decimal length, with its half-width.
    double log10_digit_count = 0.0;
    double log10_digit_count_error = 0.0;
    /// error_bound / log10_value as a double.
    double relative_error = 0.0;
    /// False when relative_error exceeds the tolerance passed in.
    bool within_tolerance = true;
    /// True when the ceiling offset came from a digit window at every step.
    bool window_used = true;
};

/// Tracks log10 f^(k)(l/d) for k = steps using
///   log10 x_{k+1} = 2 log10 x_k + log10(1 + delta_k / x_k),
/// where delta_k = ceil(x_k) - x_k is read from a parallel digit window when
/// steps <= window_cap and is otherwise bounded by [0, 1).
MagnitudeTracker track_magnitude(const BigInt& l, std::uint64_t d, std::uint64_t steps,
                                 double relative_tolerance = 1e-40, std::uint64_t window_cap = 1u << 14);

}  // namespace ceildyn
