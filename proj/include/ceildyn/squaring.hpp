#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ceildyn/arith.hpp"
#include "ceildyn/map_spec.hpp"

namespace ceildyn {

/// Marker for a stopping time that was not found within the given budget
/// (a step cap for exact engines, a digit window for the modular one).
struct Unresolved {
    std::uint64_t window;
    friend bool operator==(const Unresolved&, const Unresolved&) = default;
};

struct StoppingReport {
    std::variant<std::uint64_t, Unresolved> theta;
    std::optional<BigInt> reached;              // exact modes only
    std::optional<std::uint64_t> decimal_digits;  // of `reached`

    bool resolved() const { return std::holds_alternative<std::uint64_t>(theta); }
    /// Throws std::bad_variant_access when unresolved.
    std::uint64_t steps() const { return std::get<std::uint64_t>(theta); }

    static StoppingReport unresolved(std::uint64_t window) { return {Unresolved{window}, std::nullopt, std::nullopt}; }
};

struct Trajectory {
    Rational start;
    std::vector<Rational> steps;  // f^(1), ..., f^(m)
    bool truncated = false;       // step budget ran out before the map's stopping rule fired
};

/// f(x) = x * ceil(x)
Rational step(const Rational& q);
/// F(x) = x * floor(x)
Rational step_floor(const Rational& q);

/// Iterates `map` from q until its stopping predicate holds or max_steps
/// iterates have been produced. For the squaring family an integral start
/// yields an empty, untruncated trajectory. Along squaring trajectories each
/// denominator must divide its predecessor; a violation throws
/// InvariantViolation.
Trajectory trajectory(const Rational& q, const MapSpec& map, std::uint64_t max_steps);

/// Least k >= 0 with f^(k)(q) integral, with the integer reached and its
/// decimal length. Intended for q > 1 or q integral.
StoppingReport stopping_time_exact(const Rational& q, std::uint64_t max_steps);

struct Denominator2Result {
    std::uint64_t steps;
    BigInt reached;
};

/// Closed form for the start (2l+1)/2: the first integer appears after
/// v2(l) + 1 steps and equals T^(v+1)(2l+1)/2 with T(y) = y(y+1)/2.
Denominator2Result theta_denominator2(const BigInt& l);

}  // namespace ceildyn
