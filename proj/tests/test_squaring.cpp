#include <doctest.h>

#include "ceildyn/map_spec.hpp"
#include "ceildyn/squaring.hpp"
#include "oracle.hpp"

using namespace ceildyn;

namespace {

Rational R(long n, long d) { return Rational::normalize(BigInt(n), BigInt(d)); }

}  // namespace

TEST_CASE("single steps") {
    CHECK(step(R(3, 2)) == Rational(3));
    CHECK(step(R(8, 7)) == R(16, 7));
    CHECK(step(R(6, 5)) == R(12, 5));
    CHECK(step_floor(R(3, 2)) == R(3, 2));
    CHECK(step_floor(R(5, 2)) == Rational(5));
    CHECK(step_floor(Rational(4)) == Rational(16));
}

TEST_CASE("trajectory of 6/5") {
    Trajectory t = trajectory(R(6, 5), Squaring{}, 5);
    REQUIRE(t.steps.size() == 5);
    CHECK(t.steps[0] == R(12, 5));
    CHECK(t.steps[1] == R(36, 5));
    CHECK(t.steps[2] == R(288, 5));
    CHECK(t.steps[3] == R(16704, 5));
    CHECK(t.steps[4] == R(55808064, 5));
    CHECK(t.truncated);
}

TEST_CASE("trichotomy") {
    Trajectory half = trajectory(R(1, 2), Squaring{}, 20);
    CHECK(half.truncated);
    for (const auto& x : half.steps) CHECK(x == R(1, 2));

    Trajectory neg = trajectory(R(-1, 2), Squaring{}, 20);
    REQUIRE(neg.steps.size() == 1);
    CHECK(neg.steps[0] == Rational(0));
    CHECK_FALSE(neg.truncated);

    for (long n = -40; n <= -2; ++n) {
        for (long d : {2L, 3L, 7L}) {
            const Rational q = R(n, d);
            if (q > Rational(-1)) continue;
            CHECK(step(q) >= Rational(1));
        }
    }
    for (long n = 1; n <= 30; ++n) CHECK(step(R(n, 31)) == R(n, 31));
}

TEST_CASE("stopping time examples") {
    auto r = stopping_time_exact(R(5, 2), 10);
    CHECK(r.steps() == 2);
    CHECK(*r.reached == 60);
    r = stopping_time_exact(R(8, 7), 10);
    CHECK(r.steps() == 3);
    CHECK(*r.reached == 48);
    r = stopping_time_exact(Rational(7), 10);
    CHECK(r.steps() == 0);
    CHECK(*r.reached == 7);
    r = stopping_time_exact(R(6, 5), 17);
    CHECK_FALSE(r.resolved());
    CHECK(std::get<Unresolved>(r.theta).window == 17);
}

TEST_CASE("stopping time of 6/5 has 57735 digits") {
    auto r = stopping_time_exact(R(6, 5), 30);
    REQUIRE(r.resolved());
    CHECK(r.steps() == 18);
    CHECK(*r.decimal_digits == 57735);
    CHECK(r.reached->get_str().size() == 57735);
}

TEST_CASE("exact engine agrees with the mpq oracle") {
    for (long d = 2; d <= 9; ++d) {
        for (long l = d + 1; l <= 200; ++l) {
            auto mine = stopping_time_exact(R(l, d), 10);
            auto ref = oracle::theta(mpq_class(l, d), 10);
            REQUIRE(mine.resolved() == ref.has_value());
            if (ref) {
                CHECK(mine.steps() == ref->steps);
                CHECK(*mine.reached == ref->value);
            }
        }
    }
}

TEST_CASE("denominators divide along trajectories and integers stay integers") {
    for (long d = 2; d <= 12; ++d) {
        for (long l = d + 1; l <= 120; ++l) {
            Rational x = R(l, d);
            BigInt prev = d;
            bool integral = false;
            for (int k = 0; k < 8; ++k) {
                CHECK(mpz_divisible_p(prev.get_mpz_t(), x.den().get_mpz_t()));
                if (integral) CHECK(x.is_integer());
                integral = x.is_integer();
                prev = x.den();
                x = step(x);
            }
        }
    }
}

TEST_CASE("closed form for denominator 2") {
    CHECK(theta_denominator2(BigInt(1)).steps == 1);
    CHECK(theta_denominator2(BigInt(1)).reached == 3);
    CHECK(theta_denominator2(BigInt(4)).steps == 3);
    CHECK(theta_denominator2(BigInt(4)).reached == 268065);
    CHECK(theta_denominator2(BigInt(8)).steps == 4);
    CHECK(theta_denominator2(BigInt(8)).reached == BigInt("1204154941925628"));
    for (long l = 1; l <= 600; ++l) {
        auto closed = theta_denominator2(BigInt(l));
        auto ref = oracle::theta(mpq_class(2 * l + 1, 2), 64);
        REQUIRE(ref);
        CHECK(closed.steps == ref->steps);
        CHECK(closed.reached == ref->value);
    }
}

TEST_CASE("map descriptions and predicates") {
    CHECK(counts_start(MapSpec{Squaring{}}));
    CHECK_FALSE(counts_start(MapSpec{ApproxMultiply{R(4, 3)}}));
    CHECK(apply_map(MapSpec{ApproxMultiply{R(4, 3)}}, Rational(1)) == R(4, 3));
    CHECK(apply_map(MapSpec{FloorMultiply{R(4, 3)}}, R(5, 3)) == R(4, 3));
    CHECK(apply_map(MapSpec{PadicSquaring{2}}, R(3, 2)) == Rational(3));
    CHECK(apply_map(MapSpec{PadicSquaring{2}}, R(5, 4)) == R(5, 2));
    CHECK_THROWS(apply_map(MapSpec{PadicSquaring{2}}, R(1, 3)));
    CHECK(reached(MapSpec{Squaring{}}, Rational(4)));
    CHECK_FALSE(describe(MapSpec{Squaring{}}).empty());
}

TEST_CASE("multiplication trajectories stop at k >= 1") {
    Trajectory t = trajectory(Rational(1), MapSpec{ApproxMultiply{R(4, 3)}}, 20);
    REQUIRE(t.steps.size() == 3);
    CHECK(t.steps.back() == Rational(4));
    CHECK_FALSE(t.truncated);
}
