#pragma once

#include "lipgerm/rational.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lipgerm {

// Exact rational or an opaque generic nonzero constant "@name".
struct Coefficient {
    enum class Kind { Exact, Symbol };
    Kind kind = Kind::Exact;
    Rational value;
    std::string name;

    static Coefficient exact(const Rational& r) { return {Kind::Exact, r, {}}; }
    static Coefficient symbol(const std::string& n) { return {Kind::Symbol, Rational(0), n}; }

    bool is_symbol() const { return kind == Kind::Symbol; }
    std::string str() const { return is_symbol() ? "@" + name : value.str(); }
    friend bool operator==(const Coefficient& a, const Coefficient& b);
};

// A coefficient multiplied by exp(2*pi*i*phase). A null coefficient stands for a missing term.
struct Rotated {
    std::optional<Coefficient> c;
    Rational phase;  // in [0,1)
};

bool same_value(const Rotated& a, const Rotated& b);

struct Term {
    Rational exp;
    Coefficient coef;
};

// Infinite contact: the two inputs are the same curve (or slice).
struct Infinite {
    friend bool operator==(Infinite, Infinite) { return true; }
};
using Contact = std::variant<Rational, Infinite>;

bool is_infinite(const Contact& c);
std::string to_string(const Contact& c);
// Contact ordering with Infinite on top.
bool contact_less(const Contact& a, const Contact& b);

class PuiseuxBranch {
public:
    PuiseuxBranch() = default;
    // Terms are sorted; zero coefficients dropped. nullopt truncation = exact finite sum.
    PuiseuxBranch(std::vector<Term> terms, std::optional<Rational> truncation = std::nullopt);

    // Literal syntax: "y = c1*x^(p/q) + @a*x^2 - x^(3/2) + O(x^r)".
    static PuiseuxBranch parse(const std::string& literal);
    std::string str() const;

    const std::vector<Term>& terms() const { return terms_; }
    const std::optional<Rational>& truncation() const { return trunc_; }
    long denominator() const { return n_; }

    // Coefficient at an exponent, or nullopt if the term is absent.
    std::optional<Coefficient> coefficient_at(const Rational& e) const;
    // Terms with exponent strictly below / at most e.
    PuiseuxBranch prefix_below(const Rational& e) const;
    PuiseuxBranch prefix_upto(const Rational& e) const;
    std::optional<Rational> first_exponent_above(const Rational& e) const;

    // Known through this exponent (infinite if untruncated).
    bool known_through(const Rational& e) const { return !trunc_ || e <= *trunc_; }

    PuiseuxBranch with_term(const Rational& e, const Coefficient& c) const;
    PuiseuxBranch with_truncation(std::optional<Rational> t) const;

private:
    std::vector<Term> terms_;
    std::optional<Rational> trunc_;
    long n_ = 1;
};

struct SliceComponent {
    const PuiseuxBranch* branch;
    long sheet;
};

long multiplicity(const PuiseuxBranch& b);
std::vector<Rational> characteristic_exponents(const PuiseuxBranch& b);

// Conjugation-aware contact of the two complex branches.
Contact contact(const PuiseuxBranch& b1, const PuiseuxBranch& b2);

Contact slice_contact(const SliceComponent& s1, const SliceComponent& s2);
std::vector<SliceComponent> slices(const PuiseuxBranch& b);
// Max of slice_contact over all sheet pairs.
Contact complex_contact_via_slices(const PuiseuxBranch& b1, const PuiseuxBranch& b2);

PuiseuxBranch branch_from_segment(long p, long q, const std::string& symbol);

}  // namespace lipgerm
