#include "ceildyn/mult.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "ceildyn/chain.hpp"

namespace ceildyn {

namespace {

void require_proper(const Rational& r) {
    if (r.is_integer()) throw std::invalid_argument("map ratio must have denominator >= 2");
    if (!r.num().fits_slong_p() || !r.den().fits_slong_p()) throw std::invalid_argument("map ratio too large");
}

BigInt iterate(const PeriodicallyLinearMap& h, BigInt x, std::uint64_t times) {
    for (std::uint64_t i = 0; i < times; ++i) x = h.apply(x);
    return x;
}

std::int64_t to_i64(const BigInt& x) { return static_cast<std::int64_t>(x.get_si()); }

// Fast path of classify_orbit on machine words; nullopt on overflow.
std::optional<OrbitVerdict> classify_small(const PeriodicallyLinearMap& h, std::int64_t n, std::uint64_t max_steps) {
    std::vector<std::int64_t> seen;
    OrbitVerdict v;
    std::int64_t x = n;
    try {
        for (std::uint64_t j = 1; j <= max_steps; ++j) {
            x = h.apply(x);
            v.checked = j;
            std::int64_t r = x % h.modulus();
            if (r == 0) {
                v.hit = true;
                return v;
            }
            if (std::find(seen.begin(), seen.end(), x) != seen.end()) {
                v.exceptional = true;
                return v;
            }
            if (seen.size() > 4096) return std::nullopt;  // long orbit: use the set-based path
            seen.push_back(x);
        }
    } catch (const std::overflow_error&) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

PeriodicallyLinearMap make_map(std::int64_t l, std::int64_t d, std::vector<std::int64_t> offsets) {
    return PeriodicallyLinearMap::make(l, d, std::move(offsets));
}

PeriodicallyLinearMap conjugate_g(const Rational& r) {
    require_proper(r);
    const std::int64_t l = r.num().get_si();
    const std::int64_t d = r.den().get_si();
    std::vector<std::int64_t> offsets(static_cast<std::size_t>(d), 0);
    for (std::int64_t b = 1; b < d; ++b) offsets[static_cast<std::size_t>(b)] = l * (d - b);
    return PeriodicallyLinearMap::make(l, d, std::move(offsets));
}

PeriodicallyLinearMap ceiling_map(const Rational& r) {
    require_proper(r);
    const std::int64_t l = r.num().get_si();
    const std::int64_t d = r.den().get_si();
    std::vector<std::int64_t> offsets(static_cast<std::size_t>(d), 0);
    for (std::int64_t b = 1; b < d; ++b) {
        std::int64_t lb = ((l % d) * b) % d;
        if (lb < 0) lb += d;
        offsets[static_cast<std::size_t>(b)] = d - lb;
    }
    return PeriodicallyLinearMap::make(l, d, std::move(offsets));
}

PeriodicallyLinearMap two_exception_example() { return PeriodicallyLinearMap::make(3, 2, {-2, 1}); }

StoppingReport stopping_time_mult(const Rational& r, const BigInt& n, std::uint64_t max_steps) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (r.is_integer()) {
        BigInt v = r.num() * n;
        return {std::uint64_t{1}, v, decimal_digits(v)};
    }
    const PeriodicallyLinearMap g = conjugate_g(r);
    const auto d = static_cast<unsigned long>(g.modulus());
    BigInt x = n * d;
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        x = g.apply(x);
        if (mpz_divisible_ui_p(x.get_mpz_t(), d)) {
            BigInt v = x / d;
            auto digits = decimal_digits(v);
            return {k, std::move(v), digits};
        }
    }
    return StoppingReport::unresolved(max_steps);
}

std::vector<BigInt> exceptional_sieve(const PeriodicallyLinearMap& h, std::uint64_t depth) {
    if (depth < 1) throw std::invalid_argument("sieve depth must be >= 1");
    const auto d = static_cast<std::uint64_t>(h.modulus());
    std::vector<BigInt> classes;
    for (std::uint64_t b = 0; b < d; ++b) classes.emplace_back(static_cast<unsigned long>(b));

    BigInt step = static_cast<unsigned long>(d);  // d^j
    for (std::uint64_t j = 1; j <= depth; ++j) {
        std::vector<BigInt> next;
        next.reserve(classes.size() * (d - 1));
        for (const BigInt& b : classes) {
            std::uint64_t removed = 0;
            for (std::uint64_t t = 0; t < d; ++t) {
                BigInt child = b + step * static_cast<unsigned long>(t);
                if (h.divisible(iterate(h, child, j))) {
                    ++removed;
                } else {
                    next.push_back(std::move(child));
                }
            }
            if (removed != 1) {
                throw InvariantViolation("class " + b.get_str() + " lost " + std::to_string(removed) +
                                         " children at depth " + std::to_string(j));
            }
        }
        classes = std::move(next);
        step *= static_cast<unsigned long>(d);
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

std::vector<BigInt> first_hit_classes(const PeriodicallyLinearMap& h, std::uint64_t j) {
    if (j < 1) throw std::invalid_argument("first hit step must be >= 1");
    const auto d = static_cast<std::uint64_t>(h.modulus());
    std::vector<BigInt> parents;
    if (j == 1) {
        for (std::uint64_t b = 0; b < d; ++b) parents.emplace_back(static_cast<unsigned long>(b));
    } else {
        parents = exceptional_sieve(h, j - 1);
    }
    const BigInt step = pow_ui(d, j);
    std::vector<BigInt> hits;
    for (const BigInt& b : parents) {
        for (std::uint64_t t = 0; t < d; ++t) {
            BigInt child = b + step * static_cast<unsigned long>(t);
            if (h.divisible(iterate(h, child, j))) hits.push_back(std::move(child));
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

ExceptionalCensus exceptional_census(const PeriodicallyLinearMap& h, const BigInt& x, std::uint64_t depth) {
    if (x < 1) throw std::invalid_argument("census bound must be >= 1");
    const auto d = static_cast<std::uint64_t>(h.modulus());
    ExceptionalCensus c{h, x, depth, {}, 0, 0.0, true};
    const BigInt modulus = pow_ui(d, depth + 1);
    for (const BigInt& cls : exceptional_sieve(h, depth)) {
        // n = cls + t*modulus with -x <= n <= x
        BigInt t;
        BigInt lo = -x - cls;
        mpz_cdiv_q(t.get_mpz_t(), lo.get_mpz_t(), modulus.get_mpz_t());
        for (BigInt n = cls + t * modulus; n <= x; n += modulus) c.survivors.push_back(n);
    }
    std::sort(c.survivors.begin(), c.survivors.end());
    c.count = c.survivors.size();
    c.count_bound = 4.0 * static_cast<double>(d) * std::pow(x.get_d(), beta_d(d));
    c.within_bound = static_cast<double>(c.count) <= c.count_bound;
    return c;
}

OrbitVerdict classify_orbit(const PeriodicallyLinearMap& h, const BigInt& n, std::uint64_t max_steps) {
    if (n.fits_slong_p()) {
        if (auto v = classify_small(h, to_i64(n), max_steps)) return *v;
    }
    std::set<BigInt> seen;
    OrbitVerdict v;
    BigInt x = n;
    for (std::uint64_t j = 1; j <= max_steps; ++j) {
        x = h.apply(x);
        v.checked = j;
        if (h.divisible(x)) {
            v.hit = true;
            return v;
        }
        if (!seen.insert(x).second) {
            v.exceptional = true;
            return v;
        }
    }
    return v;
}

CertifiedCount certified_exceptional_count(const PeriodicallyLinearMap& h, std::int64_t x, std::uint64_t max_steps) {
    CertifiedCount c;
    for (std::int64_t n = -x; n <= x; ++n) {
        OrbitVerdict v = classify_orbit(h, BigInt(static_cast<long>(n)), max_steps);
        if (v.exceptional) {
            ++c.exceptional;
        } else if (!v.hit) {
            ++c.unresolved;
        }
    }
    return c;
}

std::vector<Denominator2Candidate> exceptional_denominator2(const PeriodicallyLinearMap& h, std::uint64_t depth) {
    if (h.modulus() != 2) throw std::invalid_argument("exceptional_denominator2 needs d = 2");
    if (depth < 2) throw std::invalid_argument("depth must be >= 2");

    std::vector<Denominator2Candidate> out;
    for (int parity = 0; parity < 2; ++parity) {
        BigInt cls = parity;
        BigInt step = 2;  // 2^j
        std::vector<BigInt> signed_reps;
        for (std::uint64_t j = 1; j <= depth; ++j) {
            int kept = 0;
            BigInt survivor;
            for (int t = 0; t < 2; ++t) {
                BigInt child = cls + step * t;
                if (!h.divisible(iterate(h, child, j))) {
                    ++kept;
                    survivor = child;
                }
            }
            if (kept != 1) throw InvariantViolation("d = 2 chain did not keep exactly one class");
            cls = survivor;
            // representative in [-2^j, 2^j) of the class mod 2^(j+1)
            signed_reps.push_back(cls >= step ? BigInt(cls - 2 * step) : cls);
            step *= 2;
        }

        Denominator2Candidate cand;
        cand.parity = parity;
        cand.verified_depth = depth;
        const std::size_t half = signed_reps.size() / 2;
        const bool stable = std::all_of(signed_reps.begin() + static_cast<std::ptrdiff_t>(half), signed_reps.end(),
                                        [&](const BigInt& r) { return r == signed_reps.back(); });
        if (stable) {
            cand.candidate = signed_reps.back();
            OrbitVerdict v = classify_orbit(h, *cand.candidate, 64 * depth);
            cand.certified = v.exceptional;
            if (v.hit) cand.verified_depth = v.checked - 1;
            else cand.verified_depth = std::max<std::uint64_t>(depth, v.checked);
        }
        out.push_back(std::move(cand));
    }
    return out;
}

SigmaSets sigma_prime(std::uint64_t d, std::uint64_t k) {
    if (d < 3) throw std::invalid_argument("sigma sets need d >= 3");
    if (k < 1) throw std::invalid_argument("sigma sets need k >= 1");
    const PeriodicallyLinearMap g = conjugate_g(Rational::normalize(1, static_cast<unsigned long>(d)));
    SigmaSets s;

    // corrected set: odometer over digit tuples
    std::vector<std::uint64_t> digits(k, 0);
    digits[0] = 1;
    for (;;) {
        BigInt n = 0;
        for (std::uint64_t i = k; i-- > 0;) n = n * static_cast<unsigned long>(d) + static_cast<unsigned long>(digits[i]);
        s.corrected.push_back(n);
        std::uint64_t i = 0;
        for (; i < k; ++i) {
            const std::uint64_t top = (i == 0) ? d - 1 : d - 2;
            if (digits[i] < top) {
                ++digits[i];
                break;
            }
            digits[i] = (i == 0) ? 1 : 0;
        }
        if (i == k) break;
    }
    std::sort(s.corrected.begin(), s.corrected.end());

    for (const BigInt& n : s.corrected) {
        BigInt x = n;
        for (std::uint64_t j = 1;; ++j) {
            x = g.apply(x);
            if (g.divisible(x)) throw InvariantViolation("sigma member " + n.get_str() + " hits a multiple of d");
            if (x == 1) break;
            if (j > 64 * k + 64) throw InvariantViolation("sigma member " + n.get_str() + " does not settle at 1");
        }
    }

    const BigInt limit = pow_ui(d, k);
    for (BigInt n = 1; n < limit; ++n) {
        BigInt rest = n / static_cast<unsigned long>(d);
        bool ok = true;
        while (rest > 0) {
            if (mpz_fdiv_ui(rest.get_mpz_t(), static_cast<unsigned long>(d)) == d - 1) {
                ok = false;
                break;
            }
            rest /= static_cast<unsigned long>(d);
        }
        if (!ok) continue;
        s.literal.push_back(n);
        if (!classify_orbit(g, n, 64 * k + 64).exceptional) s.literal_not_exceptional.push_back(n);
    }
    return s;
}

bool lower_bound_check(std::uint64_t d, std::int64_t x) {
    if (d < 3) throw std::invalid_argument("lower bound check needs d >= 3");
    if (x < static_cast<std::int64_t>(d)) throw std::invalid_argument("lower bound check needs x >= d");
    const PeriodicallyLinearMap g = conjugate_g(Rational::normalize(1, static_cast<unsigned long>(d)));
    CertifiedCount c = certified_exceptional_count(g, x, 4096);
    const long double bound = std::pow(static_cast<long double>(x), static_cast<long double>(beta_d(d))) / d;
    return static_cast<long double>(c.exceptional) >= bound;
}

std::variant<std::uint64_t, Unresolved> mahler_witness(const BigInt& n, std::uint64_t j_max) {
    if (n < 1) throw std::invalid_argument("Mahler witness needs n >= 1");
    const PeriodicallyLinearMap h = ceiling_map(Rational::normalize(3, 2));
    BigInt x = n;
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        x = h.apply(x);
        if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3) return j;
    }
    return Unresolved{j_max};
}

FloorShiftReport floor_shift_check(std::uint64_t d, const BigInt& m, std::uint64_t horizon) {
    if (d < 1) throw std::invalid_argument("floor shift needs d >= 1");
    if (m < 1) throw std::invalid_argument("floor shift needs m >= 1");
    const Rational r = Rational::normalize(static_cast<unsigned long>(d + 1), static_cast<unsigned long>(d));
    const Rational shift(static_cast<long>(d + 1));
    Rational y(m);
    Rational Y(m + static_cast<unsigned long>(d));
    FloorShiftReport rep;
    for (std::uint64_t j = 1; j <= horizon; ++j) {
        y = r * Rational(ceil(y));
        Y = r * Rational(floor(Y));
        rep.checked = j;
        if (Y != y + shift) {
            rep.holds = false;
            break;
        }
        if (y.is_integer()) rep.ceil_stop = j;
        if (Y.is_integer()) rep.floor_stop = j;
        if (rep.ceil_stop || rep.floor_stop) break;
    }
    if (rep.ceil_stop != rep.floor_stop) rep.holds = false;
    return rep;
}

}  // namespace ceildyn
