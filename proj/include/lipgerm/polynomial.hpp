#pragma once

#include "lipgerm/rational.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace lipgerm {

// Exponent vector over the variables x, y, z.
using Monomial = std::array<int, 3>;

// Polynomial with rational coefficients in up to three variables x, y, z.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const Rational& c);
    static Polynomial var(int v);
    static Polynomial monomial(const Monomial& m, const Rational& c);
    // Accepts sums of terms like "3*x^2*y", "-z^5", "x*y*z"; integer or p/q coefficients.
    static Polynomial parse(const std::string& text);
    static int var_index(char name);

    const std::map<Monomial, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    int degree_in(int v) const;
    int total_degree() const;
    // Number of variables that occur.
    int arity() const;
    bool uses(int v) const { return degree_in(v) > 0; }

    Polynomial derivative(int v) const;
    // Coefficient of v^k, as a polynomial free of v.
    Polynomial coeff_in(int v, int k) const;
    Polynomial substitute(int v, const Rational& value) const;
    Rational evaluate(const std::array<Rational, 3>& point) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.t_ == b.t_; }

    // Leading term for lexicographic order x > y > z.
    std::pair<Monomial, Rational> lex_leading() const;

    // Integer coefficients with gcd 1, graded-lex leading coefficient positive.
    Polynomial normalized() const;
    std::string str() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> t_;
};

std::optional<Polynomial> exact_quotient(const Polynomial& a, const Polynomial& b);
Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b);
// Sylvester-matrix resultant with respect to v, fraction-free elimination.
Polynomial resultant(const Polynomial& f, const Polynomial& g, int v);
Polynomial square_free_part(const Polynomial& p);
Polynomial discriminant_of_projection(const Polynomial& f, int fiber_var);

}  // namespace lipgerm
