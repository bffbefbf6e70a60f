#include "doctest.h"
#include "oracles.hpp"

#include "lipgerm/errors.hpp"
#include "lipgerm/puiseux.hpp"

#include <random>

using namespace lipgerm;

static Rational R(const char* s) { return Rational::parse(s); }
static PuiseuxBranch B(const char* s) { return PuiseuxBranch::parse(s); }

TEST_CASE("rational basics") {
    CHECK(R("6/4") == Rational(3, 2));
    CHECK(R("-6/4").str() == "-3/2");
    CHECK(R(" 7 ").str() == "7");
    CHECK(R("7/4").frac() == Rational(3, 4));
    CHECK(R("-1/4").frac() == Rational(3, 4));
    CHECK(R("3/2") < R("5/3"));
    CHECK_THROWS(R("1/0"));
    CHECK_THROWS(R("x"));
}

TEST_CASE("branch literal round trip") {
    auto b = B("y = x^(3/2) + @a*x^(7/4) + O(x^2)");
    CHECK(b.terms().size() == 2);
    CHECK(b.truncation() == R("2"));
    CHECK(b.denominator() == 4);
    CHECK(B(b.str().c_str()).str() == b.str());
    auto c = B("y = -2*x + 3/5*x^2 - x^(5/2)");
    CHECK(c.terms()[0].coef.value == Rational(-2));
    CHECK(c.terms()[2].coef.value == Rational(-1));
    CHECK(B(c.str().c_str()).str() == c.str());
    CHECK_THROWS_AS(B("y = x^(1/2)"), ParseError);
    CHECK_THROWS_AS(B("y = x + x"), ParseError);
    CHECK_THROWS_AS(B("y = x^3 + O(x^2)"), ParseError);
}

TEST_CASE("multiplicity against the parametrization order") {
    CHECK(multiplicity(B("y = x^(3/2) + x^(7/4)")) == 4);
    CHECK(multiplicity(B("y = @a*x^2")) == 1);
    CHECK(multiplicity(B("y = x^(5/3)")) == 3);
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        std::vector<Term> ts;
        Rational e(1);
        for (int k = 0; k < 4; ++k) {
            e += Rational(long(1 + rng() % 5), long(1 + rng() % 12));
            ts.push_back({e, Coefficient::exact(Rational(long(1 + rng() % 3)))});
        }
        PuiseuxBranch b(ts);
        CHECK(multiplicity(b) == oracle::parametrization_order(b));
    }
}

TEST_CASE("characteristic exponents") {
    CHECK(characteristic_exponents(B("y = x^(3/2) + x^(7/4)")) == std::vector<Rational>{R("3/2"), R("7/4")});
    CHECK(characteristic_exponents(B("y = @a*x^2")).empty());
    CHECK(characteristic_exponents(B("y = x^(5/3) + x^(7/3)")) == std::vector<Rational>{R("5/3")});
    std::mt19937 rng(11);
    for (int it = 0; it < 200; ++it) {
        std::vector<Term> ts;
        Rational e(1);
        for (int k = 0; k < 4; ++k) {
            e += Rational(1 + rng() % 4, 1 + rng() % 10);
            ts.push_back({e, Coefficient::exact(Rational(1))});
        }
        PuiseuxBranch b(ts);
        CHECK(characteristic_exponents(b) == oracle::gcd_chain_exponents(b));
    }
}

TEST_CASE("contact examples") {
    auto c1 = contact(B("y = x^(3/2) + x^(7/4)"), B("y = x^(3/2) + 2*x^(7/4)"));
    CHECK(std::get<Rational>(c1) == R("7/4"));
    auto b = B("y = x^(3/2) + x^(7/4)");
    CHECK(is_infinite(contact(b, b)));
    CHECK(std::get<Rational>(contact(B("y = x^(3/2)"), B("y = 2*x^(3/2)"))) == R("3/2"));
    // conjugate sheets describe the same curve
    CHECK(is_infinite(contact(B("y = x^(3/2)"), B("y = -1*x^(3/2)"))));
    CHECK(is_infinite(contact(B("y = x^(3/2) + x^(7/4)"), B("y = x^(3/2) - x^(7/4)"))));
    CHECK(std::get<Rational>(contact(B("y = @a*x^(3/2)"), B("y = @b*x^(3/2)"))) == R("3/2"));
    CHECK(std::get<Rational>(contact(B("y = @a*x"), B("y = @a*x + @b*x^2"))) == R("2"));
}

TEST_CASE("contact truncation discipline") {
    auto a = B("y = x^(3/2) + O(x^2)");
    auto b = B("y = x^(3/2) + x^(5/2) + O(x^3)");
    CHECK_THROWS_AS(contact(a, b), TruncationTooShort);
    CHECK(is_infinite(contact(a, B("y = x^(3/2) + O(x^2)"))));
    // the difference is visible before either truncation
    CHECK(std::get<Rational>(contact(a, B("y = x^(3/2) + @c*x^(7/4) + O(x^3)"))) == R("7/4"));
}

TEST_CASE("slice contacts") {
    auto b = B("y = x^(3/2)");
    auto ss = slices(b);
    REQUIRE(ss.size() == 2);
    CHECK(std::get<Rational>(slice_contact(ss[0], ss[1])) == R("3/2"));
    CHECK(is_infinite(slice_contact(ss[0], ss[0])));
    auto b1 = B("y = x^(3/2)"), b2 = B("y = 2*x^(3/2)");
    for (auto& s : slices(b1))
        for (auto& t : slices(b2)) CHECK(std::get<Rational>(slice_contact(s, t)) == R("3/2"));
    CHECK(std::get<Rational>(complex_contact_via_slices(B("y = x^(3/2) + x^(7/4)"),
                                                        B("y = x^(3/2) + 2*x^(7/4)"))) == R("7/4"));
    CHECK(is_infinite(complex_contact_via_slices(b, b)));
    CHECK(std::get<Rational>(complex_contact_via_slices(B("y = x^(3/2)"), B("y = x^(5/3)"))) == R("3/2"));
    // symbols: a rotated symbol differs from itself
    auto s = B("y = @a*x^(3/2)");
    auto sl = slices(s);
    CHECK(std::get<Rational>(slice_contact(sl[0], sl[1])) == R("3/2"));
}

TEST_CASE("slice contact against floating roots of unity") {
    std::mt19937 rng(3);
    for (int it = 0; it < 150; ++it) {
        auto rand_branch = [&] {
            std::vector<Term> ts;
            Rational e(1);
            int k = 1 + rng() % 3;
            for (int i = 0; i < k; ++i) {
                e += Rational(1, 1 + rng() % 4);
                int c = int(rng() % 5) - 2;
                if (c == 0) c = 1;
                ts.push_back({e, Coefficient::exact(Rational(c))});
            }
            return PuiseuxBranch(ts);
        };
        auto b1 = rand_branch(), b2 = rand_branch();
        for (long k = 0; k < b1.denominator(); ++k)
            for (long l = 0; l < b2.denominator(); ++l) {
                auto exact = slice_contact({&b1, k}, {&b2, l});
                auto num = oracle::numeric_slice_contact(b1, k, b2, l);
                if (num) CHECK(std::get<Rational>(exact) == *num);
                else CHECK(is_infinite(exact));
            }
    }
}

TEST_CASE("pairwise slice contacts of one branch are characteristic exponents") {
    for (auto lit : {"y = x^(3/2) + x^(7/4)", "y = x^(5/3) + x^(7/3)", "y = @a*x^(4/3) + x^(3/2) + @b*x^(19/12)"}) {
        auto b = B(lit);
        auto ch = characteristic_exponents(b);
        auto ss = slices(b);
        for (size_t i = 0; i < ss.size(); ++i)
            for (size_t j = i + 1; j < ss.size(); ++j) {
                auto c = std::get<Rational>(slice_contact(ss[i], ss[j]));
                CHECK(std::find(ch.begin(), ch.end(), c) != ch.end());
            }
    }
}

TEST_CASE("contact is ultrametric on random triples") {
    std::mt19937 rng(5);
    int checked = 0;
    for (int it = 0; it < 300; ++it) {
        auto rb = [&] {
            std::vector<Term> ts;
            Rational e(1);
            for (int i = 0; i < 3; ++i) {
                e += Rational(1, 1 + rng() % 3);
                ts.push_back({e, Coefficient::exact(Rational(1 + int(rng() % 2)))});
            }
            return PuiseuxBranch(ts);
        };
        auto a = rb(), b = rb(), c = rb();
        auto ab = contact(a, b), bc = contact(b, c), ac = contact(a, c);
        if (is_infinite(ab) || is_infinite(bc) || is_infinite(ac)) continue;
        Rational x = std::get<Rational>(ab), y = std::get<Rational>(bc), z = std::get<Rational>(ac);
        CHECK(z >= std::min(x, y));
        if (x != y) CHECK(z == std::min(x, y));
        CHECK(contact(a, b) == contact(b, a));
        ++checked;
    }
    CHECK(checked > 50);
}
