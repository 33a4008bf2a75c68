#include "ceildyn/periodic_map.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace ceildyn {

namespace {

std::int64_t mod_i64(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

PeriodicallyLinearMap PeriodicallyLinearMap::make(std::int64_t l, std::int64_t d, std::vector<std::int64_t> offsets) {
    if (d < 2) throw std::invalid_argument("map denominator must be >= 2");
    if (l == 0) throw std::invalid_argument("map multiplier must be nonzero");
    if (std::gcd(l < 0 ? -l : l, d) != 1) throw std::invalid_argument("gcd(l, d) must be 1");
    if (offsets.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("expected " + std::to_string(d) + " offsets, got " + std::to_string(offsets.size()));
    for (std::int64_t b = 0; b < d; ++b) {
        // l_b = -l*b (mod d), computed without overflow for small d.
        std::int64_t want = mod_i64(-mod_i64(l, d) * b, d);
        if (mod_i64(offsets[static_cast<std::size_t>(b)], d) != want) {
            throw std::invalid_argument("offset for residue b=" + std::to_string(b) + " violates l_b = -l*b (mod d)");
        }
    }
    return PeriodicallyLinearMap(l, d, std::move(offsets));
}

BigInt PeriodicallyLinearMap::apply(const BigInt& n) const {
    unsigned long b = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(d_));
    BigInt v = n * static_cast<long>(l_) + static_cast<long>(offsets_[b]);
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(d_));
    return v;
}

std::int64_t PeriodicallyLinearMap::apply(std::int64_t n) const {
    std::int64_t b = mod_i64(n, d_);
    __int128 v = static_cast<__int128>(l_) * n + offsets_[static_cast<std::size_t>(b)];
    v /= d_;
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("periodic map value exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

}  // namespace ceildyn
