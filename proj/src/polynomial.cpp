#include "polyrat/polynomial.hpp"

#include <algorithm>
#include <ostream>

namespace polyrat {

Polynomial Polynomial::monomial(const Rational& c, std::size_t k) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::binomial(const Rational& lambda, unsigned ell) {
    std::vector<Rational> v(ell + 1, Rational(0));
    v[0] = Rational(1);
    v[ell] = -lambda;
    return Polynomial(std::move(v));
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::operator-() const {
    std::vector<Rational> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = -c_[i];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i) + o.at(i);
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    }
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Rational& s) const {
    std::vector<Rational> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = c_[i] * s;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial acc = one();
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

Polynomial Polynomial::shifted_up(std::size_t k) const {
    if (is_zero()) return Polynomial();
    std::vector<Rational> v(c_.size() + k, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + k] = c_[i];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::truncated(std::size_t n) const {
    std::vector<Rational> v(c_.begin(), c_.begin() + std::min(n, c_.size()));
    return Polynomial(std::move(v));
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Polynomial(std::move(v));
}

std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        Rational a = c_[i];
        if (first) {
            if (a.sign() < 0) {
                out += "-";
                a = -a;
            }
            first = false;
        } else {
            out += a.sign() < 0 ? " - " : " + ";
            if (a.sign() < 0) a = -a;
        }
        bool unit_coeff = (a == Rational(1)) && i > 0;
        if (!unit_coeff) out += a.str();
        if (i > 0) {
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero polynomial");
    std::vector<Rational> rem(a.coeffs());
    int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - db) + 1, Rational(0));
    Rational lead_inv = b.leading().reciprocal();
    for (int i = a.degree(); i >= db; --i) {
        Rational c = rem[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        Rational q = c * lead_inv;
        quo[static_cast<std::size_t>(i - db)] = q;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(i - db + j)] -= q * b.at(static_cast<std::size_t>(j));
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw DomainError("polynomial division is not exact");
    return q;
}

bool divides(const Polynomial& d, const Polynomial& a) {
    if (d.is_zero()) return a.is_zero();
    return divmod(a, d).second.is_zero();
}

Polynomial normalize_unit(const Polynomial& p) {
    if (p.is_zero()) return p;
    Rational u = p.constant_term().is_zero() ? p.leading() : p.constant_term();
    return p * u.reciprocal();
}

namespace {

// Primitive integer image of a rational polynomial (content removed).
std::vector<Integer> primitive_integer_form(const Polynomial& p) {
    Integer den_lcm(1);
    for (const auto& c : p.coeffs()) {
        Integer d = c.denominator();
        den_lcm = den_lcm / gcd(den_lcm, d) * d;
    }
    std::vector<Integer> out;
    Integer content(0);
    for (const auto& c : p.coeffs()) {
        out.push_back(c.numerator() * (den_lcm / c.denominator()));
        content = gcd(content, out.back());
    }
    if (content != 0)
        for (auto& v : out) v /= content;
    return out;
}

void strip_zeros(std::vector<Integer>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

void make_primitive(std::vector<Integer>& v) {
    Integer content(0);
    for (const auto& x : v) content = gcd(content, x);
    if (content > 1)
        for (auto& x : v) x /= content;
}

// One pseudo-reduction step: lc(b)*a - lc(a) x^(da-db) b, repeated until
// deg a < deg b. The content is stripped afterwards, so the exact
// pseudo-remainder power is irrelevant.
std::vector<Integer> integer_prem(std::vector<Integer> a, const std::vector<Integer>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Integer la = a.back(), lb = b.back();
        std::size_t shift = a.size() - b.size();
        for (auto& x : a) x *= lb;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= la * b[i];
        strip_zeros(a);
        make_primitive(a);
    }
    return a;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return normalize_unit(b);
    if (b.is_zero()) return normalize_unit(a);
    // Primitive Euclidean algorithm over the integers; plain division over
    // the rationals blows up the coefficients.
    std::vector<Integer> x = primitive_integer_form(a);
    std::vector<Integer> y = primitive_integer_form(b);
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
        std::vector<Integer> r = integer_prem(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    std::vector<Rational> coeffs;
    coeffs.reserve(x.size());
    for (const auto& v : x) coeffs.emplace_back(v);
    return normalize_unit(Polynomial(std::move(coeffs)));
}

ExtendedGcd poly_ext_gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial r0 = a, r1 = b;
    Polynomial s0 = Polynomial::one(), s1 = Polynomial::zero();
    Polynomial t0 = Polynomial::zero(), t1 = Polynomial::one();
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1; r1 = r;
        Polynomial s = s0 - q * s1;
        s0 = s1; s1 = s;
        Polynomial t = t0 - q * t1;
        t0 = t1; t1 = t;
    }
    // Apply the same unit normalization as poly_gcd.
    Polynomial g = normalize_unit(r0);
    if (!r0.is_zero()) {
        Rational u = r0.constant_term().is_zero() ? r0.leading() : r0.constant_term();
        Rational inv = u.reciprocal();
        s0 = s0 * inv;
        t0 = t0 * inv;
    }
    return {g, s0, t0};
}

SquareFreeDecomposition square_free_decomposition(const Polynomial& p) {
    if (p.is_zero()) throw DomainError("square-free decomposition of zero polynomial");
    SquareFreeDecomposition out;
    out.unit = Rational(1);
    if (p.degree() == 0) {
        out.unit = p.constant_term();
        return out;
    }
    // Yun's algorithm over a characteristic-zero field.
    Polynomial g = poly_gcd(p, p.derivative());
    Polynomial b = exact_div(p, g);
    Polynomial c = exact_div(p.derivative(), g);
    Polynomial d = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        Polynomial s = poly_gcd(b, d);
        if (s.degree() > 0) out.parts.emplace_back(normalize_unit(s), i);
        b = exact_div(b, s);
        c = exact_div(d, s);
        d = c - b.derivative();
        ++i;
    }
    // Recover the constant unit from p = unit * prod parts^mult.
    Polynomial prod = Polynomial::one();
    for (const auto& [part, mult] : out.parts) prod = prod * part.pow(mult);
    Polynomial u = exact_div(p, prod);
    if (u.degree() != 0) throw DomainError("square-free decomposition internal error");
    out.unit = u.constant_term();
    return out;
}

namespace {

std::vector<Integer> positive_divisors(Integer n) {
    // Trial division; inputs are desk-scale.
    n = ::abs(n);
    std::vector<Integer> primes;
    std::vector<unsigned> mults;
    Integer d(2);
    while (d * d <= n) {
        if (n % d == 0) {
            primes.push_back(d);
            mults.push_back(0);
            while (n % d == 0) {
                n /= d;
                ++mults.back();
            }
        }
        d += 1;
    }
    if (n > 1) {
        primes.push_back(n);
        mults.push_back(1);
    }
    std::vector<Integer> divs{Integer(1)};
    for (std::size_t i = 0; i < primes.size(); ++i) {
        std::size_t base = divs.size();
        Integer pk(1);
        for (unsigned e = 1; e <= mults[i]; ++e) {
            pk *= primes[i];
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace

std::vector<Rational> rational_roots(const Polynomial& p) {
    if (p.is_zero()) throw DomainError("rational roots of the zero polynomial");
    std::vector<Rational> roots;
    // Strip the power of x; it contributes the root 0.
    std::size_t v = 0;
    while (p.at(v).is_zero()) ++v;
    if (v > 0) roots.push_back(Rational(0));
    Polynomial q(std::vector<Rational>(p.coeffs().begin() + static_cast<long>(v), p.coeffs().end()));
    if (q.degree() < 1) return roots;
    // Primitive integer form: clear denominators, drop the content.
    Integer den_lcm(1);
    for (const auto& c : q.coeffs()) {
        Integer d = c.denominator();
        den_lcm = den_lcm / gcd(den_lcm, d) * d;
    }
    std::vector<Integer> ic;
    Integer content(0);
    for (const auto& c : q.coeffs()) {
        Integer n = c.numerator() * (den_lcm / c.denominator());
        ic.push_back(n);
        content = gcd(content, n);
    }
    for (auto& n : ic) n /= content;
    const Integer& a0 = ic.front();
    const Integer& ad = ic.back();
    for (const Integer& pn : positive_divisors(a0)) {
        for (const Integer& qd : positive_divisors(ad)) {
            if (gcd(pn, qd) != 1) continue;
            for (int s : {1, -1}) {
                Rational cand(s > 0 ? pn : Integer(-pn), qd);
                if (q.eval(cand).is_zero()) roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

Rational resultant(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Rational(0);
    if (a.degree() == 0) return a.leading().pow(static_cast<unsigned long>(b.degree()));
    if (b.degree() == 0) return b.leading().pow(static_cast<unsigned long>(a.degree()));
    // Res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * Res(b, r), r = a mod b.
    Polynomial r = divmod(a, b).second;
    if (r.is_zero()) return Rational(0);
    Rational sign = (a.degree() % 2 == 1 && b.degree() % 2 == 1) ? Rational(-1) : Rational(1);
    Rational scale = b.leading().pow(static_cast<unsigned long>(a.degree() - r.degree()));
    return sign * scale * resultant(b, r);
}

Polynomial resultant_in_constant(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) throw DomainError("resultant_in_constant with zero polynomial");
    // Degree in c is deg(a); evaluate and interpolate.
    int points_needed = a.degree() + 1;
    std::vector<std::pair<Rational, Rational>> points;
    for (int i = 0; i < points_needed; ++i) {
        Rational c(static_cast<long>(i));
        points.emplace_back(c, resultant(a, b - Polynomial(c)));
    }
    return lagrange_interpolate(points);
}

Polynomial x_pow_mod(unsigned long e, const Polynomial& m) {
    if (m.degree() < 1) throw DomainError("x_pow_mod modulus must be nonconstant");
    Polynomial acc = Polynomial::one();
    Polynomial base = divmod(Polynomial::monomial(Rational(1), 1), m).second;
    while (e > 0) {
        if (e & 1ul) acc = divmod(acc * base, m).second;
        base = divmod(base * base, m).second;
        e >>= 1ul;
    }
    return acc;
}

Polynomial lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
    Polynomial out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Polynomial basis = Polynomial::one();
        Rational denom(1);
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            basis = basis * Polynomial{-points[j].first, Rational(1)};
            denom *= points[i].first - points[j].first;
        }
        out = out + basis * (points[i].second / denom);
    }
    return out;
}

}  // namespace polyrat
