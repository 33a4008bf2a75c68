#pragma once

/**
 * @file arith.hpp
 * @brief Exact integer and rational primitives shared by every engine.
 *
 * Integers are GMP `mpz_class` values. `Rational` keeps a canonical form:
 * gcd(|num|, den) = 1 and den >= 1, with the sign carried by the numerator
 * and zero stored as 0/1, so structural equality is value equality.
 */

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ceildyn {

using BigInt = mpz_class;

/// Raised when an internal consistency check fails (a proof mechanism or
/// structural invariant that must never break). The CLI maps it to exit 3.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised by the windowed engines when the tracked precision runs out.
class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)

    /// Reduced fraction num/den. Throws std::invalid_argument when den == 0.
    static Rational normalize(BigInt num, BigInt den);

    /// Parses "a", "a/b" or "-a/b".
    static Rational parse(std::string_view text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    int sign() const { return sgn(num_); }

    /// "num/den", with "/den" omitted when den == 1.
    std::string to_string() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    Rational(BigInt num, BigInt den, bool /*already_reduced*/)
        : num_(std::move(num)), den_(std::move(den)) {}

    BigInt num_;
    BigInt den_;
};

/// Smallest integer >= q.
BigInt ceil(const Rational& q);
/// Largest integer <= q.
BigInt floor(const Rational& q);
/// q - floor(q), always in [0, 1).
Rational frac(const Rational& q);

/// q * ceil(q) computed without a full gcd of the product.
Rational mul_ceil(const Rational& q);
/// q * floor(q).
Rational mul_floor(const Rational& q);

/// Exponent a in q = p^a * (unit at p).
struct Valuation {
    long exponent = 0;
    friend bool operator==(const Valuation&, const Valuation&) = default;
};

bool is_prime(std::uint64_t p);

/// Throws std::invalid_argument for q == 0 or a non-prime p.
Valuation padic_valuation(const Rational& q, std::uint64_t p);

/// Floor division and nonnegative remainder for any sign of the dividend.
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt mod_nonneg(const BigInt& a, const BigInt& m);

/// Number of decimal digits of |n| (1 for zero), computed exactly.
std::uint64_t decimal_digits(const BigInt& n);

BigInt pow_ui(std::uint64_t base, std::uint64_t exponent);

/// Euler's totient for a small positive integer.
std::uint64_t euler_phi(std::uint64_t n);

}  // namespace ceildyn
