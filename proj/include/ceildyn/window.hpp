#pragma once

/**
 * @file window.hpp
 * @brief Truncated base-d iteration of x*ceil(x).
 *
 * The iterate is stored as u/d with the denominator fixed at the starting d
 * (the reduced denominator always divides d), and u is only known modulo
 * d^W. The ceiling of u/d is then known modulo d^(W-1), so every step
 * spends one base-d digit of validity. The iterate is integral exactly when
 * the fractional digit u mod d is zero, which stays readable while W >= 1.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ceildyn/arith.hpp"
#include "ceildyn/squaring.hpp"

namespace ceildyn {

class DigitWindow {
public:
    std::uint64_t base() const { return base_; }
    const BigInt& scaled_residue() const { return residue_; }
    std::uint64_t valid_digits() const { return valid_digits_; }
    std::uint64_t steps_taken() const { return steps_; }
    /// d^valid_digits
    const BigInt& modulus() const { return modulus_; }
    /// The digit a_{-1} of the represented value: u mod d.
    std::uint64_t fractional_digit() const;

    friend DigitWindow window_from_rational(const BigInt& l, std::uint64_t d, std::uint64_t M);
    friend DigitWindow step_window(const DigitWindow& w);

private:
    std::uint64_t base_ = 2;
    BigInt residue_;
    std::uint64_t valid_digits_ = 1;
    std::uint64_t steps_ = 0;
    BigInt modulus_;
};

/// Window for l/d holding M+1 base-d digits. Throws std::invalid_argument for
/// M < 1, d < 2 or l < 1.
DigitWindow window_from_rational(const BigInt& l, std::uint64_t d, std::uint64_t M);

/// One application of x*ceil(x). Throws PrecisionExhausted when fewer than two
/// digits remain.
DigitWindow step_window(const DigitWindow& w);

/// Least k >= 1 with u_k = 0 (mod d), for a non-integral start l/d > 1.
/// Without auto_grow an exhausted window yields Unresolved(M); with it M is
/// doubled and the scan restarted. `reached` is never filled.
StoppingReport stopping_time_windowed(const BigInt& l, std::uint64_t d, std::uint64_t M, bool auto_grow);

/// Reduced denominators d_0..d_m of the first m iterates of l/d, read off a
/// window of m+1 digits as d / gcd(u_k mod d, d).
std::vector<std::uint64_t> denominator_chain_windowed(const BigInt& l, std::uint64_t d, std::uint64_t m);

}  // namespace ceildyn
