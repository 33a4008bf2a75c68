#include "ceildyn/arith.hpp"

namespace ceildyn {

Rational Rational::normalize(BigInt num, BigInt den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (num == 0) return Rational();
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
        mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
    return Rational(std::move(num), std::move(den), true);
}

namespace {

BigInt parse_integer(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("malformed integer: " + std::string(text));
    for (std::size_t j = i; j < text.size(); ++j) {
        if (text[j] < '0' || text[j] > '9')
            throw std::invalid_argument("malformed integer: " + std::string(text));
    }
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return BigInt(digits, 10);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text));
    return normalize(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

std::string Rational::to_string() const {
    if (den_ == 1) return num_.get_str();
    return num_.get_str() + "/" + den_.get_str();
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::normalize(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::normalize(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    // Cross-cancel so the result is already reduced.
    BigInt g1, g2;
    mpz_gcd(g1.get_mpz_t(), a.num_.get_mpz_t(), b.den_.get_mpz_t());
    mpz_gcd(g2.get_mpz_t(), b.num_.get_mpz_t(), a.den_.get_mpz_t());
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    BigInt n = (a.num_ / g1) * (b.num_ / g2);
    BigInt d = (a.den_ / g2) * (b.den_ / g1);
    return Rational(std::move(n), std::move(d), true);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero rational");
    return a * Rational::normalize(b.den_, b.num_);
}

Rational Rational::operator-() const { return Rational(-num_, den_, true); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.num_ * b.den_, b.num_ * a.den_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

BigInt mod_nonneg(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

BigInt ceil(const Rational& q) {
    BigInt c;
    mpz_cdiv_q(c.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
    return c;
}

BigInt floor(const Rational& q) { return floor_div(q.num(), q.den()); }

Rational frac(const Rational& q) { return q - Rational(floor(q)); }

namespace {

// q = n/d in lowest terms times an integer c: only gcd(c, d) can cancel.
Rational mul_integer(const Rational& q, const BigInt& c) {
    if (c == 0 || q.num() == 0) return Rational();
    BigInt g;
    mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), q.den().get_mpz_t());
    if (g == 1) return Rational::normalize(q.num() * c, q.den());
    BigInt cr = c / g;
    BigInt dr = q.den() / g;
    return Rational::normalize(q.num() * cr, dr);
}

}  // namespace

Rational mul_ceil(const Rational& q) { return mul_integer(q, ceil(q)); }
Rational mul_floor(const Rational& q) { return mul_integer(q, floor(q)); }

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    if (p < 4) return true;
    if (p % 2 == 0) return false;
    for (std::uint64_t f = 3; f <= p / f; f += 2) {
        if (p % f == 0) return false;
    }
    return true;
}

Valuation padic_valuation(const Rational& q, std::uint64_t p) {
    if (q.num() == 0) throw std::invalid_argument("valuation of zero is undefined");
    if (!is_prime(p)) throw std::invalid_argument("valuation base must be prime");
    BigInt prime(static_cast<unsigned long>(p));
    BigInt rest;
    long up = static_cast<long>(mpz_remove(rest.get_mpz_t(), q.num().get_mpz_t(), prime.get_mpz_t()));
    long down = static_cast<long>(mpz_remove(rest.get_mpz_t(), q.den().get_mpz_t(), prime.get_mpz_t()));
    return Valuation{up - down};
}

std::uint64_t decimal_digits(const BigInt& n) {
    BigInt a = abs(n);
    if (a == 0) return 1;
    std::uint64_t guess = mpz_sizeinbase(a.get_mpz_t(), 10);  // exact or one too large
    BigInt lower = pow_ui(10, guess - 1);
    return a >= lower ? guess : guess - 1;
}

BigInt pow_ui(std::uint64_t base, std::uint64_t exponent) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exponent));
    return r;
}

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("phi(0) undefined");
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p <= n / p; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

}  // namespace ceildyn
