#pragma once

/**
 * @file mult.hpp
 * @brief Approximate multiplication f_r(x) = r*ceil(x) and periodically linear maps.
 *
 * All iteration here is exact and happens on the conjugated integer maps
 * (g_r(x) = l*ceil(x/d) and friends), where "f_r^(k)(n) is an integer"
 * becomes "g_r^(k)(d*n) is divisible by d". Stopping times count from k >= 1.
 */

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ceildyn/arith.hpp"
#include "ceildyn/periodic_map.hpp"
#include "ceildyn/squaring.hpp"

namespace ceildyn {

PeriodicallyLinearMap make_map(std::int64_t l, std::int64_t d, std::vector<std::int64_t> offsets);

/// g_r: offsets l_0 = 0, l_b = l(d - b). Rejects integral r.
PeriodicallyLinearMap conjugate_g(const Rational& r);

/// ceil(r x): offsets l_0 = 0, l_b = d - (l b mod d). Rejects integral r.
PeriodicallyLinearMap ceiling_map(const Rational& r);

/// The two-exception example 3n/2 + 1/2 (n odd), 3n/2 - 1 (n even).
PeriodicallyLinearMap two_exception_example();

/// Least k >= 1 with f_r^(k)(n) integral, and that integer.
StoppingReport stopping_time_mult(const Rational& r, const BigInt& n, std::uint64_t max_steps);

/// Residue classes modulo d^(k+1) whose members avoid divisibility by d for
/// the first k iterates, sorted ascending. Each surviving class at one level
/// splits into d children of which exactly one is removed; any other count
/// throws InvariantViolation.
std::vector<BigInt> exceptional_sieve(const PeriodicallyLinearMap& h, std::uint64_t depth);

/// Residue classes modulo d^(j+1) whose members first hit a multiple of d at
/// iterate j (j >= 1), derived from the sieve at depth j-1.
std::vector<BigInt> first_hit_classes(const PeriodicallyLinearMap& h, std::uint64_t j);

struct ExceptionalCensus {
    PeriodicallyLinearMap map;
    BigInt bound_x;
    std::uint64_t depth;
    std::vector<BigInt> survivors;  // sorted ascending
    std::uint64_t count = 0;
    double count_bound = 0.0;  // 4 d x^beta_d
    bool within_bound = true;
};

/// Integers |n| <= x lying in the depth-k sieve classes. Every truly
/// exceptional n in range is among the survivors.
ExceptionalCensus exceptional_census(const PeriodicallyLinearMap& h, const BigInt& x, std::uint64_t depth);

struct OrbitVerdict {
    bool exceptional = false;    // certified: eventually periodic, never divisible
    bool hit = false;            // some iterate was divisible by d
    std::uint64_t checked = 0;   // iterates examined
};

/// Follows h^(j)(n), j >= 1, until an iterate is divisible by d, the orbit
/// revisits a value with no hit (certified exceptional), or max_steps runs out.
OrbitVerdict classify_orbit(const PeriodicallyLinearMap& h, const BigInt& n, std::uint64_t max_steps);

struct CertifiedCount {
    std::uint64_t exceptional = 0;
    std::uint64_t unresolved = 0;
};

/// Number of |n| <= x certified exceptional by classify_orbit.
CertifiedCount certified_exceptional_count(const PeriodicallyLinearMap& h, std::int64_t x, std::uint64_t max_steps);

struct Denominator2Candidate {
    std::optional<BigInt> candidate;  // the integer the nested classes settle on
    int parity = 0;                   // which of the two chains (0 even, 1 odd)
    std::uint64_t verified_depth = 0;
    bool certified = false;
};

/// Follows the even and odd nested class chains of a d = 2 map to the given
/// depth and reports at most one candidate per chain.
std::vector<Denominator2Candidate> exceptional_denominator2(const PeriodicallyLinearMap& h, std::uint64_t depth);

struct SigmaSets {
    std::vector<BigInt> corrected;  // a_0 in [1, d-1], a_i in [0, d-2] for i >= 1
    std::vector<BigInt> literal;    // 1 <= n < d^k with a_i != d-1 for i >= 1
    std::vector<BigInt> literal_not_exceptional;
};

/// Digit-restricted subsets of the exceptional set of g_{1/d}. Every corrected
/// member is checked by iterating to the fixed point 1; a failure throws
/// InvariantViolation.
SigmaSets sigma_prime(std::uint64_t d, std::uint64_t k);

/// N(g_{1/d}; x) >= x^beta_d / d, with N counted by orbit certification.
bool lower_bound_check(std::uint64_t d, std::int64_t x);

/// Least j >= 1 with ceil(3/2 x)^(j)(n) = 3 (mod 4).
std::variant<std::uint64_t, Unresolved> mahler_witness(const BigInt& n, std::uint64_t j_max);

struct FloorShiftReport {
    bool holds = true;
    std::uint64_t checked = 0;                 // iterates compared
    std::optional<std::uint64_t> ceil_stop;    // k >= 1 for r*ceil(x) from m
    std::optional<std::uint64_t> floor_stop;   // k >= 1 for r*floor(x) from m+d
};

/// With r = (d+1)/d, compares r*floor iterates from m+d against r*ceil
/// iterates from m: they must differ by exactly d+1 for 1 <= j <= stop and
/// reach an integer at the same step.
FloorShiftReport floor_shift_check(std::uint64_t d, const BigInt& m, std::uint64_t horizon);

}  // namespace ceildyn
