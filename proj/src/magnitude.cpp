#include "ceildyn/magnitude.hpp"

#include <memory>
#include <stdexcept>

#include <mpfr.h>

#include "ceildyn/window.hpp"

namespace ceildyn {

namespace {

constexpr mpfr_prec_t kPrecision = 512;

class Real {
public:
    Real() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
    ~Real() { mpfr_clear(v_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    std::string str(int digits) const {
        mpfr_exp_t exp = 0;
        char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
        std::unique_ptr<char, void (*)(char*)> guard(raw, mpfr_free_str);
        std::string m(raw);
        bool neg = !m.empty() && m[0] == '-';
        if (neg) m.erase(0, 1);
        if (mpfr_zero_p(v_)) return "0";
        std::string out = neg ? "-" : "";
        out += m.substr(0, 1) + "." + m.substr(1) + "e" + std::to_string(static_cast<long>(exp) - 1);
        return out;
    }

private:
    mpfr_t v_;
};

// err += |v| * 2^(2-P): two correctly rounded operations feeding v.
void add_rounding(Real& err, const Real& v) {
    Real t;
    mpfr_abs(t.get(), v.get(), MPFR_RNDU);
    mpfr_mul_2si(t.get(), t.get(), 2 - kPrecision, MPFR_RNDU);
    mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
}

}  // namespace

MagnitudeTracker track_magnitude(const BigInt& l, std::uint64_t d, std::uint64_t steps, double relative_tolerance,
                                 std::uint64_t window_cap) {
    if (d < 1 || l <= static_cast<unsigned long>(d)) throw std::invalid_argument("magnitude tracking needs l/d > 1");

    MagnitudeTracker out;
    out.steps = steps;

    Real L, err, tmp;
    {
        Real ld;
        mpfr_set_z(L.get(), l.get_mpz_t(), MPFR_RNDN);
        mpfr_log10(L.get(), L.get(), MPFR_RNDN);
        mpfr_set_ui(ld.get(), static_cast<unsigned long>(d), MPFR_RNDN);
        mpfr_log10(ld.get(), ld.get(), MPFR_RNDN);
        add_rounding(err, L);
        add_rounding(err, ld);
        mpfr_sub(L.get(), L.get(), ld.get(), MPFR_RNDN);
        add_rounding(err, L);
    }

    const bool use_window = steps <= window_cap && d >= 2;
    out.window_used = use_window;
    std::optional<DigitWindow> window;
    if (use_window && steps > 0) window = window_from_rational(l, d, steps);

    Real ln10, delta, t, c, sens, half;
    mpfr_set_ui(ln10.get(), 10, MPFR_RNDN);
    mpfr_log(ln10.get(), ln10.get(), MPFR_RNDN);

    for (std::uint64_t k = 0; k < steps; ++k) {
        // t = 10^-L; the ceiling gap relative to x_k is delta * t.
        mpfr_neg(t.get(), L.get(), MPFR_RNDN);
        mpfr_exp10(t.get(), t.get(), MPFR_RNDN);
        const bool underflow = mpfr_zero_p(t.get()) != 0;

        // |d/dL log10(1 + delta 10^-L)| <= 10^-(L - err), capped at 1.
        mpfr_sub(sens.get(), err.get(), L.get(), MPFR_RNDU);
        mpfr_exp10(sens.get(), sens.get(), MPFR_RNDU);
        if (mpfr_cmp_ui(sens.get(), 1) > 0) mpfr_set_ui(sens.get(), 1, MPFR_RNDU);

        if (window) {
            std::uint64_t r = window->fractional_digit();
            mpfr_set_ui(delta.get(), static_cast<unsigned long>((d - r) % d), MPFR_RNDN);
            mpfr_div_ui(delta.get(), delta.get(), static_cast<unsigned long>(d), MPFR_RNDN);
            mpfr_mul(t.get(), t.get(), delta.get(), MPFR_RNDN);
            mpfr_log1p(c.get(), t.get(), MPFR_RNDN);
            mpfr_div(c.get(), c.get(), ln10.get(), MPFR_RNDN);
            for (int i = 0; i < 2; ++i) add_rounding(err, c);  // delta, t, log1p, division
            if (k + 1 < steps) window = step_window(*window);
        } else {
            // delta in [0, 1): take the midpoint of [0, log10(1 + 10^-L)].
            mpfr_log1p(c.get(), t.get(), MPFR_RNDU);
            mpfr_div(c.get(), c.get(), ln10.get(), MPFR_RNDU);
            mpfr_div_2ui(half.get(), c.get(), 1, MPFR_RNDU);
            mpfr_set(c.get(), half.get(), MPFR_RNDN);
            mpfr_add(err.get(), err.get(), half.get(), MPFR_RNDU);
            add_rounding(err, c);
        }
        if (underflow) {
            // 10^-L is below the smallest representable value; so is the correction.
            mpfr_set_ui_2exp(half.get(), 1, mpfr_get_emin(), MPFR_RNDU);
            mpfr_add(err.get(), err.get(), half.get(), MPFR_RNDU);
        }

        // err' = (2 + sens) err + rounding of the new value
        mpfr_mul(sens.get(), sens.get(), err.get(), MPFR_RNDU);
        mpfr_mul_2ui(err.get(), err.get(), 1, MPFR_RNDU);
        mpfr_add(err.get(), err.get(), sens.get(), MPFR_RNDU);
        mpfr_mul_2ui(L.get(), L.get(), 1, MPFR_RNDN);
        mpfr_add(L.get(), L.get(), c.get(), MPFR_RNDN);
        add_rounding(err, L);
    }

    out.log10_value = L.str(40);
    out.error_bound = err.str(6);

    Real lo, hi;
    mpfr_div(tmp.get(), err.get(), L.get(), MPFR_RNDU);
    out.relative_error = mpfr_get_d(tmp.get(), MPFR_RNDU);
    out.within_tolerance = out.relative_error <= relative_tolerance;

    // digits = floor(L) + 1 when the interval [L - err, L + err] has one floor.
    mpfr_sub(lo.get(), L.get(), err.get(), MPFR_RNDD);
    mpfr_add(hi.get(), L.get(), err.get(), MPFR_RNDU);
    {
        BigInt flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), lo.get(), MPFR_RNDD);
        mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
        if (flo == fhi) out.digit_count = flo + 1;
    }
    // log10 of the digit count lies in [log10(L - err), log10(L + err + 1)].
    mpfr_add_ui(hi.get(), hi.get(), 1, MPFR_RNDU);
    if (mpfr_cmp_ui(lo.get(), 1) < 0) mpfr_set_ui(lo.get(), 1, MPFR_RNDD);
    mpfr_log10(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_log10(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_add(tmp.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(tmp.get(), tmp.get(), 1, MPFR_RNDN);
    out.log10_digit_count = mpfr_get_d(tmp.get(), MPFR_RNDN);
    mpfr_sub(tmp.get(), hi.get(), lo.get(), MPFR_RNDU);
    mpfr_div_2ui(tmp.get(), tmp.get(), 1, MPFR_RNDU);
    out.log10_digit_count_error = mpfr_get_d(tmp.get(), MPFR_RNDU);

    return out;
}

}  // namespace ceildyn
