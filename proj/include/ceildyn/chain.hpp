#pragma once

/**
 * @file chain.hpp
 * @brief Denominator chains of x*ceil(x) orbits and what can be counted from them.
 *
 * For a start l/d the reduced denominators d_0, d_1, ... of successive
 * iterates form a divisibility cascade (each divides the previous one and
 * d_0 divides d). A break-point is an index j where d_{j-1}/d_j > 1, with
 * d_{-1} = d. The set of l realizing a given chain is a union of
 * prod phi(d_i) residue classes modulo d * d_0 * ... * d_{m-1}, which is
 * what makes the limiting stopping-time distribution computable exactly.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceildyn/arith.hpp"

namespace ceildyn {

struct Chain {
    std::uint64_t d_start = 2;
    std::vector<std::uint64_t> denominators;  // d_0 .. d_m

    /// Pairs (j, d_{j-1}/d_j) where the ratio exceeds 1.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> break_points() const;
    bool complete() const { return !denominators.empty() && denominators.back() == 1; }
    /// d_{m+j} := d_m past the end.
    std::uint64_t at(std::uint64_t j) const;

    friend bool operator==(const Chain&, const Chain&) = default;
};

/// Number of prime factors of n counted with multiplicity.
std::uint64_t big_omega(std::uint64_t n);

/// Denominators of f^(0..m)(l/d), computed exactly. Throws InvariantViolation
/// if the divisibility cascade or the break-point bound fails.
Chain chain_of(const BigInt& l, std::uint64_t d, std::uint64_t m);

struct MixedRadixDigits {
    BigInt fractional;           // a_{-1}(k), 0 < a_{-1} < d_k
    std::vector<BigInt> digits;  // a_0(k), a_1(k), ...; a_j < d_{k+j} except a final
                                 // digit in a radix-1 position, which carries the rest
};

/// Expansion of q = l_k/d_k with radices d_k, d_{k+1}, ... Throws
/// std::invalid_argument if q is integral or its denominator is not d_k.
/// `max_digits` limits the a_j count (0 means all).
MixedRadixDigits mixed_radix_expand(const Rational& q, const Chain& chain, std::uint64_t k, std::uint64_t max_digits = 0);

/// Inverse of mixed_radix_expand for complete digit lists.
Rational mixed_radix_evaluate(const MixedRadixDigits& digits, const Chain& chain, std::uint64_t k);

struct DigitLawReport {
    bool holds = true;
    std::uint64_t steps_checked = 0;
    std::optional<std::uint64_t> first_violation;  // step k
    std::string law;                               // which law failed
};

/// Checks, for each non-integral iterate k < m, that
///   d_k / d_{k+1} = gcd(a_0(k) + 1, d_k)   and   gcd(a_{-1}(k+1), d_{k+1}) = 1.
DigitLawReport verify_digit_laws(const BigInt& l, std::uint64_t d, std::uint64_t m);

struct ApCount {
    BigInt predicted;                 // prod phi(d_i)
    BigInt modulus;                   // d * d_0 * ... * d_{m-1}
    std::optional<BigInt> enumerated; // residues realizing the chain, when modulus <= cap
};

ApCount ap_count_for_chain(const Chain& chain, std::uint64_t cap = 10'000'000);

struct AlphaValue {
    std::uint64_t p = 2;  // minimizing prime power p^j || d
    std::uint64_t j = 1;
    double value = 1.0;
    std::string symbolic;  // "log(p/(p-1))/(j*log(p))"
};

/// min over p^j || d of log(1 + 1/(p-1)) / (j log p).
AlphaValue alpha_d(std::uint64_t d);
/// min over divisors d' > 1 of log_{d'}(d'/phi(d')); equal to alpha_d(d).value.
double alpha_d_via_divisors(std::uint64_t d);

/// log(d-1)/log(d)
double beta_d(std::uint64_t d);

/// Complete chains (d_0, ..., d_j) with d_j = 1 and d_{j-1} >= 2 (just (1) for j = 0).
std::vector<Chain> complete_chains(std::uint64_t d, std::uint64_t j);

/// Limiting probability that a uniform start l/d first reaches an integer at
/// step j, summed over complete chains.
Rational stop_mass_from_chains(std::uint64_t d, std::uint64_t j);
/// The same mass by counting residues modulo d^(j+1).
Rational stop_mass_by_enumeration(std::uint64_t d, std::uint64_t j);

struct StopDistribution {
    std::uint64_t d = 2;
    std::uint64_t scanned = 0;
    std::vector<Rational> probabilities;       // index j = 0..depth
    std::vector<std::uint64_t> empirical_counts;  // l in [1, scanned] with theta = j
    std::uint64_t empirical_tail = 0;          // theta > depth, or never
    Rational unresolved_mass;                  // 1 - sum(probabilities)
};

StopDistribution stop_distribution(std::uint64_t d, std::uint64_t x_scan, std::uint64_t depth, unsigned workers = 1);

/// Stopping time of l/d for integer l >= 1 using a window of M digits:
/// 0 for multiples of d, nullopt for l < d (fixed points) or an exhausted window.
std::optional<std::uint64_t> theta_of(std::uint64_t l, std::uint64_t d, std::uint64_t M, bool auto_grow = false);

struct SquaringCensus {
    std::uint64_t d = 2;
    std::uint64_t window = 1;
    std::vector<std::optional<std::uint64_t>> theta;  // index l-1
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::vector<std::uint64_t> unresolved;
};

SquaringCensus squaring_census(std::uint64_t d, std::uint64_t x, std::uint64_t M, unsigned workers = 1);

/// True iff some m has d_0 * ... * d_{m-1} <= x < d_0 * ... * d_m with d_m > 1.
bool bad_at_size(const BigInt& l, std::uint64_t d, const BigInt& x);

}  // namespace ceildyn
