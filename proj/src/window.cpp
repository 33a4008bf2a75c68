#include "ceildyn/window.hpp"

#include <numeric>
#include <stdexcept>

namespace ceildyn {

std::uint64_t DigitWindow::fractional_digit() const {
    return mpz_fdiv_ui(residue_.get_mpz_t(), static_cast<unsigned long>(base_));
}

DigitWindow window_from_rational(const BigInt& l, std::uint64_t d, std::uint64_t M) {
    if (M < 1) throw std::invalid_argument("window needs M >= 1");
    if (d < 2) throw std::invalid_argument("window base must be >= 2");
    if (l < 1) throw std::invalid_argument("window start numerator must be >= 1");
    DigitWindow w;
    w.base_ = d;
    w.valid_digits_ = M + 1;
    w.modulus_ = pow_ui(d, M + 1);
    w.residue_ = mod_nonneg(l, w.modulus_);
    return w;
}

DigitWindow step_window(const DigitWindow& w) {
    if (w.valid_digits_ < 2) throw PrecisionExhausted("digit window exhausted after " + std::to_string(w.steps_) + " steps");
    const auto d = static_cast<unsigned long>(w.base_);
    DigitWindow next;
    next.base_ = w.base_;
    next.valid_digits_ = w.valid_digits_ - 1;
    next.steps_ = w.steps_ + 1;
    mpz_divexact_ui(next.modulus_.get_mpz_t(), w.modulus_.get_mpz_t(), d);

    // ceil(u/d), valid modulo d^(W-1).
    BigInt c;
    mpz_cdiv_q_ui(c.get_mpz_t(), w.residue_.get_mpz_t(), d);
    // u is valid mod d^W, hence also mod d^(W-1); reduce before multiplying.
    BigInt u;
    mpz_mod(u.get_mpz_t(), w.residue_.get_mpz_t(), next.modulus_.get_mpz_t());
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), next.modulus_.get_mpz_t());
    mpz_mul(next.residue_.get_mpz_t(), u.get_mpz_t(), c.get_mpz_t());
    mpz_mod(next.residue_.get_mpz_t(), next.residue_.get_mpz_t(), next.modulus_.get_mpz_t());
    return next;
}

StoppingReport stopping_time_windowed(const BigInt& l, std::uint64_t d, std::uint64_t M, bool auto_grow) {
    if (d < 2) throw std::invalid_argument("windowed engine needs d >= 2");
    if (l <= static_cast<unsigned long>(d) || mpz_divisible_ui_p(l.get_mpz_t(), static_cast<unsigned long>(d)))
        throw std::invalid_argument("windowed engine needs a non-integral start l/d > 1");
    if (M < 1) throw std::invalid_argument("window needs M >= 1");

    for (;;) {
        DigitWindow w = window_from_rational(l, d, M);
        while (w.valid_digits() >= 2) {
            w = step_window(w);
            if (w.fractional_digit() == 0) return {w.steps_taken(), std::nullopt, std::nullopt};
        }
        if (!auto_grow) return StoppingReport::unresolved(M);
        M *= 2;
    }
}

std::vector<std::uint64_t> denominator_chain_windowed(const BigInt& l, std::uint64_t d, std::uint64_t m) {
    DigitWindow w = window_from_rational(l, d, m < 1 ? 1 : m);
    std::vector<std::uint64_t> chain;
    chain.reserve(m + 1);
    for (std::uint64_t k = 0;; ++k) {
        chain.push_back(d / std::gcd(w.fractional_digit(), d));
        if (k == m) break;
        w = step_window(w);
    }
    return chain;
}

}  // namespace ceildyn
