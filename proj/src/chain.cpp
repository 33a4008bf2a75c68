#include "ceildyn/chain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ceildyn/parallel.hpp"
#include "ceildyn/squaring.hpp"
#include "ceildyn/window.hpp"

namespace ceildyn {

namespace {

std::uint64_t to_u64(const BigInt& x) {
    if (!x.fits_ulong_p()) throw std::overflow_error("denominator exceeds 64 bits");
    return x.get_ui();
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 1; f <= n; ++f) {
        if (n % f == 0) out.push_back(f);
    }
    return out;
}

void extend_chains(std::uint64_t remaining, std::vector<std::uint64_t>& prefix, std::uint64_t d,
                   std::vector<Chain>& out) {
    if (remaining == 0) {
        Chain c{d, prefix};
        c.denominators.push_back(1);
        out.push_back(std::move(c));
        return;
    }
    const std::uint64_t parent = prefix.empty() ? d : prefix.back();
    for (std::uint64_t q : divisors(parent)) {
        if (q < 2) continue;
        prefix.push_back(q);
        extend_chains(remaining - 1, prefix, d, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> Chain::break_points() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    std::uint64_t prev = d_start;
    for (std::size_t j = 0; j < denominators.size(); ++j) {
        if (denominators[j] < prev) out.emplace_back(j, prev / denominators[j]);
        prev = denominators[j];
    }
    return out;
}

std::uint64_t Chain::at(std::uint64_t j) const {
    if (denominators.empty()) throw std::out_of_range("empty chain");
    return j < denominators.size() ? denominators[j] : denominators.back();
}

std::uint64_t big_omega(std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t p = 2; p <= n / p; ++p) {
        while (n % p == 0) {
            n /= p;
            ++count;
        }
    }
    return count + (n > 1 ? 1 : 0);
}

Chain chain_of(const BigInt& l, std::uint64_t d, std::uint64_t m) {
    if (d < 2) throw std::invalid_argument("chain needs d >= 2");
    Chain c{d, {}};
    Rational x = Rational::normalize(l, static_cast<unsigned long>(d));
    for (std::uint64_t k = 0; k <= m; ++k) {
        if (x.is_integer()) {
            c.denominators.resize(m + 1, 1);
            break;
        }
        c.denominators.push_back(to_u64(x.den()));
        if (k < m) x = step(x);
    }
    std::uint64_t prev = d;
    for (std::uint64_t q : c.denominators) {
        if (prev % q != 0) throw InvariantViolation("denominator cascade broken");
        prev = q;
    }
    if (c.break_points().size() > big_omega(d)) throw InvariantViolation("more break-points than prime factors of d");
    return c;
}

MixedRadixDigits mixed_radix_expand(const Rational& q, const Chain& chain, std::uint64_t k, std::uint64_t max_digits) {
    if (q.is_integer()) throw std::invalid_argument("mixed-radix expansion needs a non-integral value");
    if (q.sign() < 0) throw std::invalid_argument("mixed-radix expansion needs a positive value");
    const std::uint64_t dk = chain.at(k);
    if (q.den() != static_cast<unsigned long>(dk)) throw std::invalid_argument("value does not match the chain at position k");

    MixedRadixDigits out;
    BigInt whole = floor(q);
    out.fractional = q.num() - whole * static_cast<unsigned long>(dk);
    for (std::uint64_t j = 0; max_digits == 0 || j < max_digits; ++j) {
        const std::uint64_t radix = chain.at(k + j);
        if (radix == 1) {
            out.digits.push_back(whole);
            break;
        }
        BigInt digit;
        mpz_fdiv_qr_ui(whole.get_mpz_t(), digit.get_mpz_t(), whole.get_mpz_t(), static_cast<unsigned long>(radix));
        out.digits.push_back(std::move(digit));
        if (whole == 0) break;
    }
    return out;
}

Rational mixed_radix_evaluate(const MixedRadixDigits& digits, const Chain& chain, std::uint64_t k) {
    BigInt place = 1;
    BigInt whole = 0;
    for (std::size_t j = 0; j < digits.digits.size(); ++j) {
        whole += digits.digits[j] * place;
        place *= static_cast<unsigned long>(chain.at(k + j));
    }
    const auto dk = static_cast<unsigned long>(chain.at(k));
    return Rational::normalize(digits.fractional + whole * dk, BigInt(dk));
}

DigitLawReport verify_digit_laws(const BigInt& l, std::uint64_t d, std::uint64_t m) {
    DigitLawReport rep;
    Chain chain{d, {}};
    Rational x = Rational::normalize(l, static_cast<unsigned long>(d));
    chain.denominators.push_back(to_u64(x.den()));
    for (std::uint64_t k = 0; k < m && !x.is_integer(); ++k) {
        Rational next = step(x);
        chain.denominators.push_back(to_u64(next.den()));
        const std::uint64_t dk = chain.denominators[k];
        const std::uint64_t dk1 = chain.denominators[k + 1];

        MixedRadixDigits here = mixed_radix_expand(x, chain, k, 1);
        const std::uint64_t a0 = mpz_fdiv_ui(here.digits.at(0).get_mpz_t(), static_cast<unsigned long>(dk));
        if (dk % dk1 != 0 || dk / dk1 != std::gcd(a0 + 1, dk)) {
            rep.holds = false;
            rep.first_violation = k;
            rep.law = "d_k/d_{k+1} = gcd(a_0(k)+1, d_k)";
            return rep;
        }
        const std::uint64_t a_minus1 = mpz_fdiv_ui(next.num().get_mpz_t(), static_cast<unsigned long>(dk1));
        if (std::gcd(a_minus1, dk1) != 1) {
            rep.holds = false;
            rep.first_violation = k;
            rep.law = "gcd(a_{-1}(k+1), d_{k+1}) = 1";
            return rep;
        }
        rep.steps_checked = k + 1;
        x = std::move(next);
    }
    return rep;
}

ApCount ap_count_for_chain(const Chain& chain, std::uint64_t cap) {
    if (chain.denominators.empty()) throw std::invalid_argument("empty chain");
    ApCount out;
    out.predicted = 1;
    out.modulus = static_cast<unsigned long>(chain.d_start);
    const std::size_t m = chain.denominators.size() - 1;
    for (std::size_t i = 0; i <= m; ++i) {
        out.predicted *= static_cast<unsigned long>(euler_phi(chain.denominators[i]));
        if (i < m) out.modulus *= static_cast<unsigned long>(chain.denominators[i]);
    }
    if (out.modulus <= static_cast<unsigned long>(cap)) {
        const std::uint64_t mod = out.modulus.get_ui();
        std::uint64_t count = 0;
        for (std::uint64_t l = 1; l <= mod; ++l) {
            if (denominator_chain_windowed(BigInt(static_cast<unsigned long>(l)), chain.d_start, m) == chain.denominators)
                ++count;
        }
        out.enumerated = BigInt(static_cast<unsigned long>(count));
    }
    return out;
}

AlphaValue alpha_d(std::uint64_t d) {
    if (d < 2) throw std::invalid_argument("alpha_d needs d >= 2");
    AlphaValue best;
    best.value = INFINITY;
    std::uint64_t n = d;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        std::uint64_t j = 0;
        while (n % p == 0) {
            n /= p;
            ++j;
        }
        const double v = std::log1p(1.0 / static_cast<double>(p - 1)) / (static_cast<double>(j) * std::log(static_cast<double>(p)));
        if (v < best.value) {
            best.value = v;
            best.p = p;
            best.j = j;
        }
    }
    best.symbolic = "log(" + std::to_string(best.p) + "/" + std::to_string(best.p - 1) + ")/(" + std::to_string(best.j) +
                    "*log(" + std::to_string(best.p) + "))";
    return best;
}

double alpha_d_via_divisors(std::uint64_t d) {
    double best = INFINITY;
    for (std::uint64_t q : divisors(d)) {
        if (q < 2) continue;
        const double v = std::log(static_cast<double>(q) / static_cast<double>(euler_phi(q))) / std::log(static_cast<double>(q));
        best = std::min(best, v);
    }
    return best;
}

double beta_d(std::uint64_t d) {
    if (d < 2) throw std::invalid_argument("beta_d needs d >= 2");
    return std::log(static_cast<double>(d - 1)) / std::log(static_cast<double>(d));
}

std::vector<Chain> complete_chains(std::uint64_t d, std::uint64_t j) {
    if (d < 2) throw std::invalid_argument("chains need d >= 2");
    std::vector<Chain> out;
    std::vector<std::uint64_t> prefix;
    extend_chains(j, prefix, d, out);
    return out;
}

Rational stop_mass_from_chains(std::uint64_t d, std::uint64_t j) {
    Rational total;
    for (const Chain& c : complete_chains(d, j)) {
        ApCount ap = ap_count_for_chain(c, 0);
        total = total + Rational::normalize(ap.predicted, ap.modulus);
    }
    return total;
}

std::optional<std::uint64_t> theta_of(std::uint64_t l, std::uint64_t d, std::uint64_t M, bool auto_grow) {
    if (l % d == 0) return 0;
    if (l < d) return std::nullopt;
    StoppingReport r = stopping_time_windowed(BigInt(static_cast<unsigned long>(l)), d, M < 1 ? 1 : M, auto_grow);
    if (!r.resolved()) return std::nullopt;
    return r.steps();
}

Rational stop_mass_by_enumeration(std::uint64_t d, std::uint64_t j) {
    const BigInt period = pow_ui(d, j + 1);
    if (!period.fits_ulong_p() || period.get_ui() > 100'000'000ul) throw std::invalid_argument("enumeration modulus too large");
    const std::uint64_t D = period.get_ui();
    std::uint64_t count = 0;
    for (std::uint64_t l = D + 1; l <= 2 * D; ++l) {
        auto t = theta_of(l, d, j);
        if (t && *t == j) ++count;
    }
    return Rational::normalize(BigInt(static_cast<unsigned long>(count)), period);
}

StopDistribution stop_distribution(std::uint64_t d, std::uint64_t x_scan, std::uint64_t depth, unsigned workers) {
    StopDistribution out;
    out.d = d;
    out.scanned = x_scan;
    Rational total;
    for (std::uint64_t j = 0; j <= depth; ++j) {
        out.probabilities.push_back(stop_mass_from_chains(d, j));
        total = total + out.probabilities.back();
    }
    out.unresolved_mass = Rational(1) - total;

    out.empirical_counts.assign(depth + 1, 0);
    auto thetas = parallel_range(1, static_cast<std::int64_t>(x_scan), workers,
                                 [&](std::int64_t l) { return theta_of(static_cast<std::uint64_t>(l), d, depth); });
    for (const auto& t : thetas) {
        if (t && *t <= depth) ++out.empirical_counts[*t];
        else ++out.empirical_tail;
    }
    return out;
}

SquaringCensus squaring_census(std::uint64_t d, std::uint64_t x, std::uint64_t M, unsigned workers) {
    if (d < 2) throw std::invalid_argument("census needs d >= 2");
    SquaringCensus c;
    c.d = d;
    c.window = M;
    c.theta = parallel_range(1, static_cast<std::int64_t>(x), workers,
                             [&](std::int64_t l) { return theta_of(static_cast<std::uint64_t>(l), d, M); });
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
        if (c.theta[i]) ++c.histogram[*c.theta[i]];
        else c.unresolved.push_back(i + 1);
    }
    return c;
}

bool bad_at_size(const BigInt& l, std::uint64_t d, const BigInt& x) {
    if (l < 1 || x < 1) throw std::invalid_argument("bad_at_size needs l, x >= 1");
    // Every non-final factor is >= 2, so at most log2(x) + 1 denominators matter.
    const std::uint64_t m = mpz_sizeinbase(x.get_mpz_t(), 2) + 1;
    const std::vector<std::uint64_t> chain = denominator_chain_windowed(l, d, m);
    BigInt product = 1;
    for (std::uint64_t dm : chain) {
        if (dm == 1) return false;
        if (product <= x && x < product * static_cast<unsigned long>(dm)) return true;
        product *= static_cast<unsigned long>(dm);
        if (product > x) return false;
    }
    return false;
}

}  // namespace ceildyn
