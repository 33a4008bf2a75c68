#pragma once

#include <cstdint>
#include <vector>

#include "ceildyn/arith.hpp"

namespace ceildyn {

/// Integer map n -> (l*n + offset[n mod d]) / d, with offset[b] = -l*b (mod d)
/// so that every value is integral. The approximate multiplication map in
/// conjugated form, its ceiling variant and any other member of the same
/// class are all instances.
class PeriodicallyLinearMap {
public:
    /// Validates gcd(l, d) = 1, d >= 2, offsets.size() == d and the
    /// congruence offset[b] = -l*b (mod d). Violations throw
    /// std::invalid_argument naming the offending residue.
    static PeriodicallyLinearMap make(std::int64_t l, std::int64_t d, std::vector<std::int64_t> offsets);

    std::int64_t multiplier() const { return l_; }
    std::int64_t modulus() const { return d_; }
    const std::vector<std::int64_t>& offsets() const { return offsets_; }
    Rational ratio() const { return Rational::normalize(BigInt(static_cast<long>(l_)), BigInt(static_cast<long>(d_))); }

    BigInt apply(const BigInt& n) const;
    /// Machine-word fast path; throws std::overflow_error if the result does
    /// not fit.
    std::int64_t apply(std::int64_t n) const;

    bool divisible(const BigInt& n) const { return mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d_)) != 0; }

    friend bool operator==(const PeriodicallyLinearMap&, const PeriodicallyLinearMap&) = default;

private:
    PeriodicallyLinearMap(std::int64_t l, std::int64_t d, std::vector<std::int64_t> offsets)
        : l_(l), d_(d), offsets_(std::move(offsets)) {}

    std::int64_t l_;
    std::int64_t d_;
    std::vector<std::int64_t> offsets_;
};

}  // namespace ceildyn
