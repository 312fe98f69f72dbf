// Exact radical arithmetic: ring axioms on random inputs, exact signs,
// quadratic-field division, and rational parsing.

#include "doctest.h"

#include "qnet/radical.hpp"

#include <random>

using qnet::Int;
using qnet::Rational;
using qnet::RadicalSum;

namespace {

// Small random rationals and radicands for property checks.
struct Gen {
    std::mt19937_64 rng{20240913};
    Rational rational() {
        std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
        return Rational(num(rng), den(rng));
    }
    RadicalSum radical() {
        std::uniform_int_distribution<int> rad(1, 30), pick(0, 2);
        RadicalSum x(rational());
        int terms = pick(rng);
        for (int i = 0; i < terms; ++i)
            x += RadicalSum(rational()) * RadicalSum::sqrt_of(Rational(rad(rng)));
        return x;
    }
};

}  // namespace

TEST_CASE("sqrt_of produces canonical square-free radicands") {
    CHECK(RadicalSum::sqrt_of(Rational(4)) == RadicalSum(2));
    CHECK(RadicalSum::sqrt_of(Rational(8)).str() == "2*sqrt(2)");
    CHECK(RadicalSum::sqrt_of(Rational(1, 2)).str() == "1/2*sqrt(2)");
    CHECK(RadicalSum::sqrt_of(Rational(9, 4)) == RadicalSum(Rational(3, 2)));
    CHECK(RadicalSum::sqrt_of(Rational(0)).is_zero());
    // 1/sqrt(6) * sqrt(2/3) = sqrt(2/18) = 1/3
    auto x = RadicalSum::sqrt_of(Rational(1, 6)) * RadicalSum::sqrt_of(Rational(2, 3));
    CHECK(x == RadicalSum(Rational(1, 3)));
}

TEST_CASE("sqrt squares back to its argument") {
    Gen g;
    for (int i = 0; i < 200; ++i) {
        Rational q = g.rational();
        if (q < 0) q = -q;
        auto r = RadicalSum::sqrt_of(q);
        CHECK((r * r).as_rational() == q);
        CHECK(r.sign() >= 0);
    }
}

TEST_CASE("ring axioms on random elements") {
    Gen g;
    for (int i = 0; i < 100; ++i) {
        RadicalSum a = g.radical(), b = g.radical(), c = g.radical();
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        CHECK(a + RadicalSum(0) == a);
        CHECK(a * RadicalSum(1) == a);
    }
}

TEST_CASE("sign matches numeric evaluation") {
    Gen g;
    for (int i = 0; i < 300; ++i) {
        RadicalSum a = g.radical();
        double v = a.to_double();
        if (std::abs(v) > 1e-9) CHECK(a.sign() == (v > 0 ? 1 : -1));
        CHECK((a - a).sign() == 0);
    }
    // A sign decision that needs the exact two-term rule: sqrt(2) vs 99/70.
    RadicalSum tight = RadicalSum::sqrt_of(Rational(2)) - RadicalSum(Rational(99, 70));
    CHECK(tight.sign() == -1);  // 99/70 > sqrt(2)
    RadicalSum tight2 = RadicalSum::sqrt_of(Rational(2)) - RadicalSum(Rational(140, 99));
    CHECK(tight2.sign() == 1);  // 140/99 < sqrt(2)
}

TEST_CASE("division inside a quadratic field") {
    Gen g;
    std::mt19937_64 rng{7};
    std::uniform_int_distribution<int> rad(2, 20);
    for (int i = 0; i < 100; ++i) {
        Rational a = g.rational(), b = g.rational();
        Int d = rad(rng);
        RadicalSum x = RadicalSum(a) + RadicalSum(b) * RadicalSum::sqrt_of(Rational(d));
        if (x.is_zero()) continue;
        RadicalSum y = g.radical();
        CHECK((y / x) * x == y);
    }
    CHECK_THROWS_AS(RadicalSum(1) / RadicalSum(0), std::domain_error);
    // Three irrational radicands in the denominator are out of scope.
    RadicalSum many = RadicalSum::sqrt_of(Rational(2)) + RadicalSum::sqrt_of(Rational(3)) +
                      RadicalSum::sqrt_of(Rational(5));
    CHECK_THROWS_AS(RadicalSum(1) / many, std::domain_error);
}

TEST_CASE("rational part extraction") {
    RadicalSum x = RadicalSum(Rational(3, 4)) + RadicalSum::sqrt_of(Rational(2));
    CHECK(x.rational_part() == Rational(3, 4));
    CHECK(!x.is_rational());
    CHECK_THROWS_AS(x.as_rational(), std::domain_error);
    CHECK(x.quadratic_radicand().has_value());
    CHECK(*x.quadratic_radicand() == 2);
    RadicalSum y = x + RadicalSum::sqrt_of(Rational(3));
    CHECK(!y.quadratic_radicand().has_value());
}

TEST_CASE("rational parsing") {
    using qnet::parse_rational;
    CHECK(parse_rational("0.8") == Rational(4, 5));
    CHECK(parse_rational("4/5") == Rational(4, 5));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("0.999") == Rational(999, 1000));
    CHECK(!qnet::try_parse_rational("abc").has_value());
    CHECK(!qnet::try_parse_rational("1/0").has_value());
    CHECK(!qnet::try_parse_rational("1.2.3").has_value());
    CHECK(qnet::to_fraction_string(Rational(-1, 30)) == "-1/30");
}

TEST_CASE("exact_sqrt detects perfect squares") {
    CHECK(qnet::exact_sqrt(Rational(9, 16)) == Rational(3, 4));
    CHECK(!qnet::exact_sqrt(Rational(2)).has_value());
    CHECK(!qnet::exact_sqrt(Rational(-4)).has_value());
}
