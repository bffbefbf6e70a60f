#include "lipgerm/puiseux.hpp"

#include "lipgerm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace lipgerm {

bool operator==(const Coefficient& a, const Coefficient& b) {
    if (a.kind != b.kind) return false;
    return a.is_symbol() ? a.name == b.name : a.value == b.value;
}

bool same_value(const Rotated& a, const Rotated& b) {
    if (!a.c || !b.c) return !a.c && !b.c;
    if (a.c->kind != b.c->kind) return false;
    if (a.c->is_symbol()) return a.c->name == b.c->name && a.phase == b.phase;
    if (a.c->value == b.c->value && a.phase == b.phase) return true;
    // a*e(p) = -a*e(p + 1/2)
    return a.c->value == -b.c->value && a.phase == (b.phase + Rational(1, 2)).frac();
}

bool is_infinite(const Contact& c) { return std::holds_alternative<Infinite>(c); }

std::string to_string(const Contact& c) {
    return is_infinite(c) ? "inf" : std::get<Rational>(c).str();
}

bool contact_less(const Contact& a, const Contact& b) {
    if (is_infinite(a)) return false;
    if (is_infinite(b)) return true;
    return std::get<Rational>(a) < std::get<Rational>(b);
}

PuiseuxBranch::PuiseuxBranch(std::vector<Term> terms, std::optional<Rational> truncation)
    : trunc_(std::move(truncation)) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    mpz_class n = 1;
    for (auto& t : terms) {
        if (!t.coef.is_symbol() && t.coef.value.is_zero()) continue;
        if (t.exp < Rational(1)) throw ParseError("exponent " + t.exp.str() + " below 1");
        if (!terms_.empty() && terms_.back().exp == t.exp)
            throw ParseError("repeated exponent " + t.exp.str());
        if (trunc_ && t.exp > *trunc_)
            throw ParseError("term x^" + t.exp.str() + " beyond truncation " + trunc_->str());
        terms_.push_back(t);
        n = lcm(n, t.exp.den());
    }
    if (!n.fits_slong_p()) throw ParseError("denominator too large");
    n_ = n.get_si();
}

std::optional<Coefficient> PuiseuxBranch::coefficient_at(const Rational& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Rational& v) { return t.exp < v; });
    if (it != terms_.end() && it->exp == e) return it->coef;
    return std::nullopt;
}

PuiseuxBranch PuiseuxBranch::prefix_below(const Rational& e) const {
    std::vector<Term> ts;
    for (auto& t : terms_)
        if (t.exp < e) ts.push_back(t);
    return PuiseuxBranch(ts);
}

PuiseuxBranch PuiseuxBranch::prefix_upto(const Rational& e) const {
    std::vector<Term> ts;
    for (auto& t : terms_)
        if (t.exp <= e) ts.push_back(t);
    return PuiseuxBranch(ts);
}

std::optional<Rational> PuiseuxBranch::first_exponent_above(const Rational& e) const {
    for (auto& t : terms_)
        if (t.exp > e) return t.exp;
    return std::nullopt;
}

PuiseuxBranch PuiseuxBranch::with_term(const Rational& e, const Coefficient& c) const {
    auto ts = terms_;
    ts.push_back({e, c});
    auto tr = trunc_;
    if (tr && *tr < e) tr = e;
    return PuiseuxBranch(ts, tr);
}

PuiseuxBranch PuiseuxBranch::with_truncation(std::optional<Rational> t) const {
    return PuiseuxBranch(terms_, t);
}

namespace {

std::string exponent_str(const Rational& e) {
    if (e == Rational(1)) return "x";
    if (e.is_integer()) return "x^" + e.str();
    return "x^(" + e.str() + ")";
}

class LiteralReader {
public:
    explicit LiteralReader(const std::string& s) : s_(s) {}

    void blanks() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        blanks();
        if (i_ < s_.size() && s_[i_] == c) { ++i_; return true; }
        return false;
    }
    bool peek(char c) {
        blanks();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool done() {
        blanks();
        return i_ >= s_.size();
    }
    std::string digits() {
        blanks();
        size_t a = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (a == i_) fail("expected digits");
        return s_.substr(a, i_ - a);
    }
    Rational number() {
        std::string p = digits();
        if (eat('/')) return Rational::parse(p + "/" + digits());
        return Rational::parse(p);
    }
    std::string ident() {
        blanks();
        size_t a = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (a == i_) fail("expected identifier");
        return s_.substr(a, i_ - a);
    }
    Rational exponent() {
        if (!eat('^')) return Rational(1);
        if (eat('(')) {
            bool neg = eat('-');
            Rational r = number();
            if (!eat(')')) fail("expected ')'");
            return neg ? -r : r;
        }
        return number();
    }
    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("branch literal '" + s_ + "': " + why + " at offset " + std::to_string(i_));
    }

private:
    const std::string& s_;
    size_t i_ = 0;
};

}  // namespace

PuiseuxBranch PuiseuxBranch::parse(const std::string& literal) {
    LiteralReader rd(literal);
    if (!rd.eat('y') || !rd.eat('=')) rd.fail("expected 'y ='");
    std::vector<Term> terms;
    std::optional<Rational> trunc;
    std::set<Rational> seen;
    bool first = true;
    while (!rd.done()) {
        if (trunc) rd.fail("O(...) must be the last term");
        bool neg = false;
        if (rd.eat('-')) neg = true;
        else if (!rd.eat('+') && !first) rd.fail("expected '+' or '-'");
        first = false;
        if (rd.eat('O')) {
            if (neg || !rd.eat('(') || !rd.eat('x')) rd.fail("malformed O-term");
            trunc = rd.exponent();
            if (!rd.eat(')')) rd.fail("expected ')'");
            continue;
        }
        std::optional<Coefficient> coef;
        if (rd.eat('@')) {
            if (neg) rd.fail("negated symbols are not supported");
            coef = Coefficient::symbol(rd.ident());
        } else if (!rd.peek('x')) {
            Rational v = rd.number();
            if (v.is_zero() && rd.done() && terms.empty()) break;
            coef = Coefficient::exact(neg ? -v : v);
        }
        if (coef) {
            if (!rd.eat('*')) rd.fail("expected '*x'");
        } else {
            coef = Coefficient::exact(Rational(neg ? -1 : 1));
        }
        if (!rd.eat('x')) rd.fail("expected 'x'");
        Rational e = rd.exponent();
        if (e < Rational(1)) rd.fail("exponents must be at least 1");
        if (!seen.insert(e).second) rd.fail("repeated exponent " + e.str());
        terms.push_back({e, *coef});
    }
    return PuiseuxBranch(terms, trunc);
}

std::string PuiseuxBranch::str() const {
    std::string out = "y =";
    bool first = true;
    for (auto& t : terms_) {
        std::string body;
        bool neg = false;
        if (t.coef.is_symbol()) {
            body = "@" + t.coef.name + "*" + exponent_str(t.exp);
        } else {
            Rational v = t.coef.value;
            neg = v.sign() < 0;
            if (neg) v = -v;
            body = (v == Rational(1) ? "" : v.str() + "*") + exponent_str(t.exp);
        }
        if (first) out += neg ? " -" + body : " " + body;
        else out += neg ? " - " + body : " + " + body;
        first = false;
    }
    if (trunc_) out += (first ? " O(" : " + O(") + exponent_str(*trunc_) + ")";
    else if (first) out += " 0";
    return out;
}

long multiplicity(const PuiseuxBranch& b) { return b.denominator(); }

std::vector<Rational> characteristic_exponents(const PuiseuxBranch& b) {
    std::vector<Rational> out;
    mpz_class run = 1;
    for (auto& t : b.terms()) {
        mpz_class next = lcm(run, t.exp.den());
        if (next != run) out.push_back(t.exp);
        run = next;
    }
    return out;
}

namespace {

std::vector<Rational> compared_exponents(const PuiseuxBranch& a, const PuiseuxBranch& b) {
    std::set<Rational> s;
    for (auto& t : a.terms())
        if (b.known_through(t.exp)) s.insert(t.exp);
    for (auto& t : b.terms())
        if (a.known_through(t.exp)) s.insert(t.exp);
    return {s.begin(), s.end()};
}

Contact agree_to_the_end(const PuiseuxBranch& a, const PuiseuxBranch& b) {
    if (a.truncation() == b.truncation()) return Infinite{};
    Rational t = !a.truncation() ? *b.truncation()
               : !b.truncation() ? *a.truncation()
                                 : std::min(*a.truncation(), *b.truncation());
    throw TruncationTooShort("expansions agree through x^" + t.str() +
                             "; contact not determined by the given truncations");
}

}  // namespace

Contact slice_contact(const SliceComponent& s1, const SliceComponent& s2) {
    const auto& a = *s1.branch;
    const auto& b = *s2.branch;
    for (auto& e : compared_exponents(a, b)) {
        Rotated ra{a.coefficient_at(e), (Rational(s1.sheet) * e).frac()};
        Rotated rb{b.coefficient_at(e), (Rational(s2.sheet) * e).frac()};
        if (!same_value(ra, rb)) return e;
    }
    return agree_to_the_end(a, b);
}

std::vector<SliceComponent> slices(const PuiseuxBranch& b) {
    std::vector<SliceComponent> out;
    for (long k = 0; k < b.denominator(); ++k) out.push_back({&b, k});
    return out;
}

Contact contact(const PuiseuxBranch& b1, const PuiseuxBranch& b2) {
    // Sheet 0 of b1 against every rotation of b2, keeping the rotations that still agree.
    std::vector<long> alive;
    for (long l = 0; l < b2.denominator(); ++l) alive.push_back(l);
    for (auto& e : compared_exponents(b1, b2)) {
        Rotated r1{b1.coefficient_at(e), Rational(0)};
        auto c2 = b2.coefficient_at(e);
        std::vector<long> next;
        for (long l : alive)
            if (same_value(r1, {c2, (Rational(l) * e).frac()})) next.push_back(l);
        if (next.empty()) return e;
        alive = std::move(next);
    }
    return agree_to_the_end(b1, b2);
}

Contact complex_contact_via_slices(const PuiseuxBranch& b1, const PuiseuxBranch& b2) {
    Contact best = Rational(0);
    for (auto& s : slices(b1))
        for (auto& t : slices(b2)) {
            Contact c = slice_contact(s, t);
            if (contact_less(best, c)) best = c;
        }
    return best;
}

PuiseuxBranch branch_from_segment(long p, long q, const std::string& symbol) {
    return PuiseuxBranch({{Rational(q, p), Coefficient::symbol(symbol)}});
}

}  // namespace lipgerm
