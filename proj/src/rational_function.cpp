#include "polyrat/rational_function.hpp"

#include <ostream>

namespace polyrat {

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw DomainError("rational function with zero denominator");
    if (den.constant_term().is_zero())
        throw DomainError("rational function denominator vanishes at 0; no series expansion");
    if (num.is_zero()) {
        num_ = Polynomial();
        den_ = Polynomial::one();
        return;
    }
    Polynomial g = poly_gcd(num, den);
    num = exact_div(num, g);
    den = exact_div(den, g);
    Rational scale = den.constant_term().reciprocal();
    num_ = num * scale;
    den_ = den * scale;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const Rational& s) const {
    return RationalFunction(num_ * s, den_);
}

std::string RationalFunction::str() const {
    if (den_ == Polynomial::one()) return num_.str();
    std::string n = num_.str();
    bool simple = true;  // single-term numerators are printed bare
    int nonzero = 0;
    for (const auto& c : num_.coeffs())
        if (!c.is_zero()) ++nonzero;
    simple = nonzero <= 1;
    std::string out = simple ? n : "(" + n + ")";
    out += "/(" + den_.str() + ")";
    return out;
}

std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.str(); }

std::vector<Rational> series_expand(const Polynomial& num, const Polynomial& den, std::size_t n) {
    if (den.is_zero() || den.constant_term().is_zero())
        throw DomainError("series expansion requires den(0) != 0");
    // With den = q0 + q1 x + ...: q0*u_n = p_n - sum_{j>=1} q_j u_{n-j}.
    Rational q0_inv = den.constant_term().reciprocal();
    std::vector<Rational> u;
    u.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational acc = num.at(i);
        std::size_t reach = std::min(i, static_cast<std::size_t>(den.degree()));
        for (std::size_t j = 1; j <= reach; ++j) acc -= den.at(j) * u[i - j];
        u.push_back(acc * q0_inv);
    }
    return u;
}

std::vector<Rational> series_expand(const RationalFunction& f, std::size_t n) {
    return series_expand(f.num(), f.den(), n);
}

}  // namespace polyrat
