#include "lipgerm/polynomial.hpp"

#include "lipgerm/errors.hpp"

#include <cctype>
#include <vector>

namespace lipgerm {

namespace {

const char kNames[3] = {'x', 'y', 'z'};

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
    int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
    if (da != db) return da > db;
    return a > b;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) { add_term({0, 0, 0}, c); }

Polynomial Polynomial::var(int v) {
    Monomial m{0, 0, 0};
    m[v] = 1;
    return monomial(m, Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
    Polynomial p;
    p.add_term(m, c);
    return p;
}

int Polynomial::var_index(char name) {
    for (int i = 0; i < 3; ++i)
        if (kNames[i] == name) return i;
    return -1;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

bool Polynomial::is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_.begin()->first == Monomial{0, 0, 0});
}

int Polynomial::degree_in(int v) const {
    int d = 0;
    for (auto& [m, c] : t_) d = std::max(d, m[v]);
    return d;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (auto& [m, c] : t_) d = std::max(d, m[0] + m[1] + m[2]);
    return d;
}

int Polynomial::arity() const {
    int a = 0;
    for (int v = 0; v < 3; ++v) a += uses(v);
    return a;
}

Polynomial Polynomial::derivative(int v) const {
    Polynomial p;
    for (auto& [m, c] : t_) {
        if (m[v] == 0) continue;
        Monomial n = m;
        --n[v];
        p.add_term(n, c * Rational(m[v]));
    }
    return p;
}

Polynomial Polynomial::coeff_in(int v, int k) const {
    Polynomial p;
    for (auto& [m, c] : t_) {
        if (m[v] != k) continue;
        Monomial n = m;
        n[v] = 0;
        p.add_term(n, c);
    }
    return p;
}

Polynomial Polynomial::substitute(int v, const Rational& value) const {
    Polynomial p;
    for (auto& [m, c] : t_) {
        Rational f = c;
        for (int i = 0; i < m[v]; ++i) f *= value;
        Monomial n = m;
        n[v] = 0;
        p.add_term(n, f);
    }
    return p;
}

Rational Polynomial::evaluate(const std::array<Rational, 3>& pt) const {
    Rational s(0);
    for (auto& [m, c] : t_) {
        Rational f = c;
        for (int v = 0; v < 3; ++v)
            for (int i = 0; i < m[v]; ++i) f *= pt[v];
        s += f;
    }
    return s;
}

Polynomial Polynomial::operator-() const {
    Polynomial p;
    for (auto& [m, c] : t_) p.t_.emplace(m, -c);
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (auto& [ma, ca] : a.t_)
        for (auto& [mb, cb] : b.t_) p.add_term(mono_mul(ma, mb), ca * cb);
    return p;
}

std::pair<Monomial, Rational> Polynomial::lex_leading() const {
    auto it = t_.rbegin();
    return {it->first, it->second};
}

Polynomial Polynomial::normalized() const {
    if (t_.empty()) return *this;
    mpz_class l = 1, g = 0;
    for (auto& [m, c] : t_) l = lcm(l, c.den());
    for (auto& [m, c] : t_) {
        mpz_class n = c.num() * (l / c.den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    const Monomial* lead = nullptr;
    for (auto& [m, c] : t_)
        if (!lead || grlex_greater(m, *lead)) lead = &m;
    Rational scale(mpq_class(l, g));
    if (t_.at(*lead).sign() < 0) scale = -scale;
    Polynomial p;
    for (auto& [m, c] : t_) p.t_.emplace(m, c * scale);
    return p;
}

std::string Polynomial::str() const {
    if (t_.empty()) return "0";
    std::string out;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string factors;
        for (int v = 0; v < 3; ++v) {
            if (m[v] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += kNames[v];
            if (m[v] > 1) factors += "^" + std::to_string(m[v]);
        }
        Rational a = c;
        bool neg = a.sign() < 0;
        if (neg) a = -a;
        std::string body = factors.empty() ? a.str()
                         : a == Rational(1) ? factors
                                            : a.str() + "*" + factors;
        if (neg) out += "-";
        else if (!out.empty()) out += "+";
        out += body;
    }
    return out;
}

Polynomial Polynomial::parse(const std::string& text) {
    size_t i = 0;
    auto fail = [&](const std::string& why) -> void {
        throw ParseError("polynomial '" + text + "': " + why + " at offset " + std::to_string(i));
    };
    auto blanks = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto digits = [&] {
        blanks();
        size_t a = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (a == i) fail("expected digits");
        return text.substr(a, i - a);
    };
    Polynomial p;
    bool first = true;
    blanks();
    if (i == text.size()) fail("empty polynomial");
    while (true) {
        blanks();
        if (i == text.size()) break;
        bool neg = false;
        if (text[i] == '-' || text[i] == '+') {
            neg = text[i] == '-';
            ++i;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        blanks();
        Rational coef(1);
        Monomial m{0, 0, 0};
        bool any = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::string n = digits();
            blanks();
            if (i < text.size() && text[i] == '/') {
                ++i;
                n += "/" + digits();
            }
            coef = Rational::parse(n);
            any = true;
            blanks();
            if (i < text.size() && text[i] == '*') ++i;
        }
        while (true) {
            blanks();
            if (i >= text.size()) break;
            int v = var_index(text[i]);
            if (v < 0) break;
            ++i;
            int e = 1;
            blanks();
            if (i < text.size() && text[i] == '^') {
                ++i;
                e = std::stoi(digits());
            }
            m[v] += e;
            any = true;
            blanks();
            if (i < text.size() && text[i] == '*') ++i;
            else break;
        }
        if (!any) fail("expected a term");
        p.add_term(m, neg ? -coef : coef);
    }
    return p;
}

std::optional<Polynomial> exact_quotient(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) return std::nullopt;
    auto [lb, cb] = b.lex_leading();
    Polynomial q, r = a;
    while (!r.is_zero()) {
        auto [lr, cr] = r.lex_leading();
        Monomial d{lr[0] - lb[0], lr[1] - lb[1], lr[2] - lb[2]};
        if (d[0] < 0 || d[1] < 0 || d[2] < 0) return std::nullopt;
        auto t = Polynomial::monomial(d, cr / cb);
        q += t;
        r -= t * b;
    }
    return q;
}

namespace {

Polynomial divide(const Polynomial& a, const Polynomial& b) {
    auto q = exact_quotient(a, b);
    if (!q) throw std::logic_error("inexact polynomial division");
    return *q;
}

int main_var(const Polynomial& a, const Polynomial& b) {
    for (int v = 0; v < 3; ++v)
        if (a.uses(v) || b.uses(v)) return v;
    return -1;
}

Polynomial content_in(const Polynomial& p, int v) {
    Polynomial g;
    for (int k = 0; k <= p.degree_in(v); ++k) {
        auto c = p.coeff_in(v, k);
        if (!c.is_zero()) g = polynomial_gcd(g, c);
    }
    return g;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int v) {
    int db = b.degree_in(v);
    auto lcb = b.coeff_in(v, db);
    Polynomial r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        int dr = r.degree_in(v);
        Monomial shift{0, 0, 0};
        shift[v] = dr - db;
        r = lcb * r - r.coeff_in(v, dr) * Polynomial::monomial(shift, Rational(1)) * b;
    }
    return r;
}

}  // namespace

Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    int v = main_var(a, b);
    if (v < 0) return Polynomial(Rational(1));
    auto ca = content_in(a, v), cb = content_in(b, v);
    Polynomial c = polynomial_gcd(ca, cb);
    Polynomial p = divide(a, ca).normalized(), q = divide(b, cb).normalized();
    if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
    while (!q.is_zero()) {
        if (q.degree_in(v) == 0) {
            p = Polynomial(Rational(1));
            break;
        }
        auto r = pseudo_remainder(p, q, v);
        p = q;
        q = r.is_zero() ? r : divide(r, content_in(r, v)).normalized();
    }
    if (p.degree_in(v) > 0) p = divide(p, content_in(p, v));
    return (c * p).normalized();
}

Polynomial resultant(const Polynomial& f, const Polynomial& g, int v) {
    int df = f.degree_in(v), dg = g.degree_in(v);
    int n = df + dg;
    if (n == 0) return Polynomial(Rational(1));
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n));
    for (int r = 0; r < dg; ++r)
        for (int k = 0; k <= df; ++k) m[r][r + k] = f.coeff_in(v, df - k);
    for (int r = 0; r < df; ++r)
        for (int k = 0; k <= dg; ++k) m[dg + r][r + k] = g.coeff_in(v, dg - k);
    // Bareiss fraction-free elimination; every division below is exact.
    Polynomial prev(Rational(1));
    bool flip = false;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k].is_zero()) {
            int p = k + 1;
            while (p < n && m[p][k].is_zero()) ++p;
            if (p == n) return Polynomial();
            std::swap(m[p], m[k]);
            flip = !flip;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = divide(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
            m[i][k] = Polynomial();
        }
        prev = m[k][k];
    }
    return flip ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

Polynomial square_free_part(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("square_free_part of zero");
    Polynomial g = p;
    for (int v = 0; v < 3; ++v)
        if (p.uses(v)) g = polynomial_gcd(g, p.derivative(v));
    return divide(p, g).normalized();
}

Polynomial discriminant_of_projection(const Polynomial& f, int fiber_var) {
    if (f.degree_in(fiber_var) == 0)
        throw std::invalid_argument("polynomial has degree 0 in the fiber variable");
    auto res = resultant(f, f.derivative(fiber_var), fiber_var);
    if (res.is_zero())
        throw ZeroResultant("resultant vanishes: polynomial is not reduced in the fiber variable");
    return square_free_part(res);
}

}  // namespace lipgerm
