#include "lipgerm/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace lipgerm {

Rational::Rational(long n, long d) {
    if (d == 0) throw std::domain_error("zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

static bool all_digits(const std::string& s, size_t from) {
    if (from >= s.size()) return false;
    for (size_t i = from; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rational Rational::parse(const std::string& text) {
    std::string s = trim(text);
    auto slash = s.find('/');
    std::string p = trim(s.substr(0, slash));
    std::string q = slash == std::string::npos ? "1" : trim(s.substr(slash + 1));
    size_t start = (!p.empty() && (p[0] == '-' || p[0] == '+')) ? 1 : 0;
    if (!all_digits(p, start) || !all_digits(q, 0))
        throw std::invalid_argument("not a rational: '" + text + "'");
    mpz_class n(p[0] == '+' ? p.substr(1) : p), d(q);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    mpq_class r(n, d);
    r.canonicalize();
    return Rational(r);
}

long Rational::num_long() const {
    if (!v_.get_num().fits_slong_p()) throw std::overflow_error("numerator too large");
    return v_.get_num().get_si();
}

long Rational::den_long() const {
    if (!v_.get_den().fits_slong_p()) throw std::overflow_error("denominator too large");
    return v_.get_den().get_si();
}

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational Rational::frac() const { return *this - floor(); }

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace lipgerm
