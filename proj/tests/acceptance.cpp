// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ceildyn/chain.hpp"
#include "ceildyn/harness.hpp"
#include "ceildyn/magnitude.hpp"
#include "ceildyn/mult.hpp"
#include "ceildyn/padic.hpp"
#include "ceildyn/squaring.hpp"

using namespace ceildyn;

namespace {

// Tolerances and budgets.
constexpr double kMagnitudeTarget = 435.0;
constexpr double kMagnitudeTolerance = 0.5;
constexpr double kBoxDimensionTolerance = 0.02;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

Rational R(long n, long d) { return Rational::normalize(BigInt(n), BigInt(d)); }

std::string str(const BigInt& x) { return x.get_str(); }

Outcome c1() {
    Outcome o;
    const std::uint64_t steps[] = {1, 2, 1, 3, 1, 2, 1, 4, 1};
    const char* reached[] = {"3", "60", "14", "268065", "33", "2093", "60", "1204154941925628", "95"};
    for (long l = 1; l <= 9; ++l) {
        auto r = stopping_time_exact(R(2 * l + 1, 2), 64);
        o.require(r.resolved() && r.steps() == steps[l - 1], "steps at l=" + std::to_string(l));
        o.require(r.reached && str(*r.reached) == reached[l - 1], "reached at l=" + std::to_string(l));
    }
    return o;
}

Outcome c2() {
    Outcome o;
    for (long l = 1; l <= 10000 && o.ok; ++l) {
        auto exact = stopping_time_exact(R(2 * l + 1, 2), 64);
        const std::uint64_t v = mpz_scan1(BigInt(l).get_mpz_t(), 0);
        auto closed = theta_denominator2(BigInt(l));
        o.require(exact.resolved() && exact.steps() == v + 1, "stopping time law at l=" + std::to_string(l));
        o.require(closed.steps == v + 1, "closed-form steps at l=" + std::to_string(l));
        o.require(exact.reached && closed.reached == *exact.reached, "closed-form value at l=" + std::to_string(l));
    }
    return o;
}

Outcome c3() {
    Outcome o;
    auto a = stopping_time_exact(R(8, 7), 64);
    o.require(a.resolved() && a.steps() == 3 && *a.reached == 48, "8/7");
    auto b = stopping_time_exact(R(6, 5), 64);
    o.require(b.resolved() && b.steps() == 18, "6/5 steps");
    o.require(b.decimal_digits && *b.decimal_digits == 57735, "6/5 digits");
    o.require(b.reached && b.reached->get_str().size() == 57735, "6/5 digits (string length)");
    return o;
}

Outcome c4() {
    Outcome o;
    const std::uint64_t theta[] = {0, 2, 6, 0, 1, 1, 0, 5, 2};
    const char* reached[] = {"1", "8", "1484710602474311520", "2", "7", "8", "3", "1484710602474311520", "220"};
    for (long l = 3; l <= 11; ++l) {
        auto r = stopping_time_exact(R(l, 3), 64);
        o.require(r.resolved() && r.steps() == theta[l - 3], "theta at l=" + std::to_string(l));
        o.require(r.reached && str(*r.reached) == reached[l - 3], "reached at l=" + std::to_string(l));
        auto w = theta_of(static_cast<std::uint64_t>(l), 3, 25);
        o.require(w && *w == theta[l - 3], "windowed theta at l=" + std::to_string(l));
    }
    return o;
}

Outcome c5() {
    Outcome o;
    RecordList r = records(RecordKind::theta_d3, 2000, 25, 1);
    const std::vector<std::pair<long, std::uint64_t>> want{{3, 0}, {4, 2}, {5, 6}, {28, 22}, {1783, 23}};
    o.require(r.entries.size() == want.size(), "record count " + std::to_string(r.entries.size()));
    for (std::size_t i = 0; i < want.size() && i < r.entries.size(); ++i) {
        o.require(r.entries[i].first == want[i].first && r.entries[i].second == want[i].second, "record " + std::to_string(i));
    }
    o.require(r.unresolved == std::vector<BigInt>{BigInt(1), BigInt(2)}, "unresolved set");
    return o;
}

Outcome c6() {
    Outcome o;
    RecordList r = records(RecordKind::theta_succ, 199, 25, 1);
    const std::vector<std::uint64_t> values{0, 1, 2, 3, 18, 26, 56, 79, 200, 225, 388, 1444};
    const std::vector<long> at{1, 2, 3, 4, 5, 11, 19, 31, 37, 67, 149, 199};
    o.require(r.entries.size() == values.size(), "record count " + std::to_string(r.entries.size()));
    for (std::size_t i = 0; i < values.size() && i < r.entries.size(); ++i) {
        o.require(r.entries[i].first == at[i] && r.entries[i].second == values[i], "record " + std::to_string(i));
    }
    o.require(r.unresolved.empty(), "unresolved successor starts");
    MagnitudeTracker m = track_magnitude(BigInt(200), 199, 1444);
    std::ostringstream s;
    s << "records ok, log10(digits)=" << m.log10_digit_count << " vs target " << kMagnitudeTarget << " +- " << kMagnitudeTolerance;
    o.require(std::abs(m.log10_digit_count - kMagnitudeTarget) <= kMagnitudeTolerance, s.str());
    o.require(m.log10_digit_count_error < kMagnitudeTolerance, "magnitude error bound too wide");
    if (o.ok) o.detail = s.str();
    return o;
}

Outcome c7() {
    Outcome o;
    const std::uint64_t theta[] = {1, 3, 2, 1, 2, 9, 1, 8, 3, 1, 7, 2, 1};
    const long reached[] = {0, 4, 4, 4, 8, 84, 8, 84, 20, 12, 84, 20, 16};
    for (long n = 0; n <= 12; ++n) {
        auto r = stopping_time_mult(R(4, 3), BigInt(n), 1000);
        o.require(r.resolved() && r.steps() == theta[n], "theta at n=" + std::to_string(n));
        o.require(r.reached && *r.reached == reached[n], "reached at n=" + std::to_string(n));
    }
    RecordList rl = records(RecordKind::theta_mult, 491729, 25, 1);
    const std::vector<std::uint64_t> values{1, 3, 9, 15, 17, 18, 24, 27, 28, 30, 40};
    const std::vector<long> at{0, 1, 5, 161, 1772, 3097, 3473, 23084, 38752, 335165, 491729};
    o.require(rl.entries.size() == values.size(), "record count " + std::to_string(rl.entries.size()));
    for (std::size_t i = 0; i < values.size() && i < rl.entries.size(); ++i) {
        o.require(rl.entries[i].first == at[i] && rl.entries[i].second == values[i], "record " + std::to_string(i));
    }
    o.require(rl.unresolved.empty(), "unresolved starts");
    return o;
}

std::set<long> certified(const PeriodicallyLinearMap& h) {
    std::set<long> out;
    for (const auto& c : exceptional_denominator2(h, 64)) {
        if (c.candidate && c.certified) out.insert(c.candidate->get_si());
    }
    return out;
}

Outcome c8() {
    Outcome o;
    auto gt = ceiling_map(R(3, 2));
    o.require(certified(gt) == std::set<long>{-1}, "ceil(3x/2) candidates");
    auto census = exceptional_census(gt, BigInt(100), 20);
    o.require(census.survivors == std::vector<BigInt>{BigInt(-1)}, "ceil(3x/2) census");
    o.require(classify_orbit(gt, BigInt(-1), 4).exceptional, "-1 fixed point");

    auto two = two_exception_example();
    o.require(certified(two) == std::set<long>{-1, 0}, "two-exception map candidates");
    census = exceptional_census(two, BigInt(100), 20);
    o.require(census.survivors == std::vector<BigInt>{BigInt(-1), BigInt(0)}, "two-exception map census");
    o.require(two.apply(BigInt(0)) == -1 && two.apply(BigInt(-1)) == -1, "0 -> -1 -> -1 orbit");
    return o;
}

Outcome c9() {
    Outcome o;
    std::uint64_t checks = 0;
    for (std::uint64_t d : {4u, 6u, 12u}) {
        for (long l = 1; l <= 2000; ++l) {
            auto rep = verify_digit_laws(BigInt(l), d, 10);
            checks += rep.steps_checked;
            o.require(rep.holds, "l=" + std::to_string(l) + " d=" + std::to_string(d) + " " + rep.law);
        }
    }
    if (o.ok) o.detail = std::to_string(checks) + " steps checked";
    return o;
}

Outcome c10() {
    Outcome o;
    auto h = conjugate_g(R(4, 3));
    std::ostringstream s;
    for (std::uint64_t j = 1; j <= 3; ++j) {
        long mod = 1;
        for (std::uint64_t i = 0; i <= j; ++i) mod *= 3;
        std::vector<BigInt> avoid, first;
        for (long n = 0; n < mod; ++n) {
            BigInt x(n);
            std::uint64_t hit = 0;
            for (std::uint64_t s2 = 1; s2 <= j && !hit; ++s2) {
                x = h.apply(x);
                if (h.divisible(x)) hit = s2;
            }
            if (!hit) avoid.emplace_back(n);
            if (hit == j) first.emplace_back(n);
        }
        const std::size_t expect = 3u << j;  // d (d-1)^j survivors, d (d-1)^(j-1) first hits
        o.require(avoid.size() == expect, "survivor count at j=" + std::to_string(j));
        o.require(exceptional_sieve(h, j) == avoid, "sieve classes at j=" + std::to_string(j));
        o.require(first.size() == expect / 2, "first-hit count at j=" + std::to_string(j));
        o.require(first_hit_classes(h, j) == first, "first-hit classes at j=" + std::to_string(j));
        s << "j=" << j << ":" << avoid.size() << " avoid/" << first.size() << " first ";
    }
    o.detail = s.str();
    return o;
}

Outcome c11() {
    Outcome o;
    Rational expect = R(1, 3);
    for (std::uint64_t j = 0; j <= 6; ++j) {
        Rational chain = stop_mass_from_chains(3, j);
        o.require(chain == expect, "chain mass at j=" + std::to_string(j) + " is " + chain.to_string());
        o.require(stop_mass_by_enumeration(3, j) == expect, "enumerated mass at j=" + std::to_string(j));
        expect = expect * R(2, 3);
    }
    return o;
}

Outcome c12() {
    Outcome o;
    for (std::uint64_t d : {3u, 4u, 5u}) {
        auto g = conjugate_g(Rational::normalize(BigInt(1), BigInt(static_cast<unsigned long>(d))));
        for (std::uint64_t k = 1; k <= 8; ++k) {
            SigmaSets s = sigma_prime(d, k);
            o.require(BigInt(static_cast<unsigned long>(s.corrected.size())) == pow_ui(d - 1, k),
                      "size at d=" + std::to_string(d) + " k=" + std::to_string(k));
            for (const BigInt& n : s.corrected) {
                BigInt x = n;
                bool fine = true;
                for (int step = 0; step < 64 && x != 1; ++step) {
                    x = g.apply(x);
                    if (g.divisible(x)) fine = false;
                }
                o.require(fine && x == 1, "orbit of " + n.get_str());
            }
            const BigInt x = pow_ui(d, k);
            o.require(lower_bound_check(d, x.get_si()), "lower bound at d=" + std::to_string(d) + " k=" + std::to_string(k));
        }
        SigmaSets three = sigma_prime(d, 3);
        const BigInt sq(static_cast<unsigned long>(d * d));
        bool in_literal = false, flagged = false;
        for (const auto& n : three.literal) in_literal |= (n == sq);
        for (const auto& n : three.literal_not_exceptional) flagged |= (n == sq);
        o.require(in_literal && flagged, "d^2 regression at d=" + std::to_string(d));
        o.require(g.divisible(g.apply(sq)), "d^2 first iterate divisible at d=" + std::to_string(d));
    }
    return o;
}

Outcome c13() {
    Outcome o;
    std::ostringstream s;
    s.precision(5);
    struct Case {
        std::uint64_t p, k;
    };
    for (Case c : {Case{2, 2}, Case{3, 1}, Case{3, 2}, Case{5, 1}}) {
        PrefixTree t;
        try {
            t = omega_prefix_tree(c.p, c.k, 4);
        } catch (const InvariantViolation& e) {
            o.require(false, e.what());
            continue;
        }
        const std::uint64_t b = euler_phi(pow_ui(c.p, c.k).get_ui());
        for (std::size_t l = 0; l + 1 < t.levels.size(); ++l) {
            for (auto n : t.children[l]) o.require(n == b, "branching at level " + std::to_string(l + 1));
        }
        const double est = box_dimension_estimate(t);
        const double exact = hausdorff_dimension(c.p, c.k);
        o.require(std::abs(est - exact) <= kBoxDimensionTolerance, "box dimension for p=" + std::to_string(c.p));
        s << "(" << c.p << "," << c.k << ") " << est << " vs " << exact << "  ";
    }
    if (o.ok) o.detail = s.str();
    return o;
}

Outcome c14() {
    Outcome o;
    for (std::uint64_t d = 1; d <= 8; ++d) {
        for (long m = 1; m <= 100; ++m) {
            auto rep = floor_shift_check(d, BigInt(m), 100000);
            o.require(rep.holds, "d=" + std::to_string(d) + " m=" + std::to_string(m));
            o.require(rep.ceil_stop.has_value() && rep.ceil_stop == rep.floor_stop,
                      "stopping times at d=" + std::to_string(d) + " m=" + std::to_string(m));
        }
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "denominator-2 table", 1, c1},
        {2, "denominator-2 stopping law and closed form, l <= 10^4", 60, c2},
        {3, "8/7 and 6/5 examples", 60, c3},
        {4, "denominator-3 table", 10, c4},
        {5, "denominator-3 records, window 25, l <= 2000", 300, c5},
        {6, "successor records d <= 199 and magnitude of the 200/199 integer", 1800, c6},
        {7, "4/3 multiplication table and records n <= 491729", 300, c7},
        {8, "denominator-2 exceptional sets", 1, c8},
        {9, "digit laws for d in {4,6,12}", 300, c9},
        {10, "4/3 sieve against brute force", 10, c10},
        {11, "prime stopping distribution for d = 3", 60, c11},
        {12, "corrected digit-restricted sets and lower bound", 120, c12},
        {13, "p-adic branching and dimension", 120, c13},
        {14, "floor shift identity", 60, c14},
    };
    int failures = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && secs > c.budget_seconds) {
            o.ok = false;
            o.detail = "over time budget";
        }
        if (!o.ok) ++failures;
        std::printf("%s %2d  %-62s %8.2fs / %.0fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
    return failures == 0 ? 0 : 1;
}
