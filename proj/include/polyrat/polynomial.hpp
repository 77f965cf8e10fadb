#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "polyrat/rational.hpp"

namespace polyrat {

/// Dense univariate polynomial over the rationals, coefficient of x^i at
/// index i. Trailing zero coefficients are stripped; the zero polynomial has
/// an empty coefficient list and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }
    explicit Polynomial(const Rational& constant) : c_{constant} { normalize(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return Polynomial(Rational(1)); }
    /// c * x^k
    static Polynomial monomial(const Rational& c, std::size_t k);
    /// 1 - lambda * x^ell
    static Polynomial binomial(const Rational& lambda, unsigned ell);

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }

    /// Coefficient of x^i, zero beyond the degree.
    Rational at(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
    Rational constant_term() const { return at(0); }

    Rational eval(const Rational& x) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& s) const;
    Polynomial pow(unsigned e) const;

    bool operator==(const Polynomial& o) const { return c_ == o.c_; }
    bool operator!=(const Polynomial& o) const { return c_ != o.c_; }

    /// Multiply by x^k.
    Polynomial shifted_up(std::size_t k) const;
    /// Truncate below x^n.
    Polynomial truncated(std::size_t n) const;
    Polynomial derivative() const;

    /// Human-readable form, lowest degree first: "1 - x - x^2".
    std::string str(const std::string& var = "x") const;

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// Quotient and remainder of a / b over the field of rationals.
/// Throws DomainError when b is the zero polynomial.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

/// Exact quotient; throws DomainError when the remainder is nonzero.
Polynomial exact_div(const Polynomial& a, const Polynomial& b);

bool divides(const Polynomial& d, const Polynomial& a);

/// Unit normalization used throughout: scale so the constant term is 1 when
/// it is nonzero, otherwise make the polynomial monic.
Polynomial normalize_unit(const Polynomial& p);

/// Euclidean gcd, unit-normalized (gcd(1 - x^2, 1 - x) = 1 - x).
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// g = s*a + t*b with g = poly_gcd(a, b).
struct ExtendedGcd {
    Polynomial g, s, t;
};
ExtendedGcd poly_ext_gcd(const Polynomial& a, const Polynomial& b);

/// Yun square-free decomposition: p = unit * prod parts[i].first ^ parts[i].second,
/// with the parts squarefree, pairwise coprime and unit-normalized.
struct SquareFreeDecomposition {
    Rational unit;
    std::vector<std::pair<Polynomial, unsigned>> parts;
};
SquareFreeDecomposition square_free_decomposition(const Polynomial& p);

/// All rational roots of p (p nonzero), ascending. Uses the rational-root
/// theorem on the primitive integer form of p; integer divisors come from
/// trial division.
std::vector<Rational> rational_roots(const Polynomial& p);

/// Resultant of two concrete polynomials, by the Euclidean remainder formula.
Rational resultant(const Polynomial& a, const Polynomial& b);

/// Res_x(a(x), b(x) - c) as a polynomial in c, computed by evaluation at
/// deg(a) + 1 points and Lagrange interpolation.
Polynomial resultant_in_constant(const Polynomial& a, const Polynomial& b);

/// x^e mod m (m nonconstant), by square and multiply.
Polynomial x_pow_mod(unsigned long e, const Polynomial& m);

/// Interpolating polynomial through distinct points.
Polynomial lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points);

}  // namespace polyrat
