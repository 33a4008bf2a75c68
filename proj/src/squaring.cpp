#include "ceildyn/squaring.hpp"

#include <stdexcept>

namespace ceildyn {

Rational step(const Rational& q) { return mul_ceil(q); }

Rational step_floor(const Rational& q) { return mul_floor(q); }

Trajectory trajectory(const Rational& q, const MapSpec& map, std::uint64_t max_steps) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    Trajectory t{q, {}, false};
    const bool squaring_family = counts_start(map);
    if (squaring_family && reached(map, q)) return t;

    Rational x = q;
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        Rational next = apply_map(map, x);
        if (squaring_family && !mpz_divisible_p(x.den().get_mpz_t(), next.den().get_mpz_t())) {
            throw InvariantViolation("denominator of " + next.to_string() + " does not divide that of " + x.to_string());
        }
        x = std::move(next);
        t.steps.push_back(x);
        if (reached(map, x)) return t;
    }
    t.truncated = true;
    return t;
}

StoppingReport stopping_time_exact(const Rational& q, std::uint64_t max_steps) {
    if (q.is_integer()) return {std::uint64_t{0}, q.num(), decimal_digits(q.num())};
    Rational x = q;
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        x = step(x);
        if (x.is_integer()) return {k, x.num(), decimal_digits(x.num())};
    }
    return StoppingReport::unresolved(max_steps);
}

Denominator2Result theta_denominator2(const BigInt& l) {
    if (l < 1) throw std::invalid_argument("theta_denominator2 needs l >= 1");
    const auto v = static_cast<std::uint64_t>(mpz_scan1(l.get_mpz_t(), 0));
    BigInt y = 2 * l + 1;
    for (std::uint64_t i = 0; i < v + 1; ++i) {
        y = y * (y + 1);
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), 2);
    }
    if (!mpz_divisible_ui_p(y.get_mpz_t(), 2)) throw InvariantViolation("closed form produced an odd iterate");
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), 2);
    return {v + 1, y};
}

}  // namespace ceildyn
