#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polyrat/polynomial.hpp"

namespace polyrat {

/// Rational generating function P/Q in canonical form: Q(0) = 1, gcd(P, Q) = 1.
/// Q(0) != 0 is required so the power series expansion at 0 exists.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::one()) {}
    RationalFunction(Polynomial num, Polynomial den);
    explicit RationalFunction(const Rational& c)
        : num_(Polynomial(c)), den_(Polynomial::one()) {}

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator*(const Rational& s) const;

    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    /// "x/(1 - x - x^2)"; numerator parenthesized only when it has several terms.
    std::string str() const;

private:
    Polynomial num_, den_;
};

std::ostream& operator<<(std::ostream& os, const RationalFunction& f);

/// First n coefficients of the power series num/den (den(0) != 0), computed by
/// the linear recurrence the denominator induces on the coefficients.
std::vector<Rational> series_expand(const Polynomial& num, const Polynomial& den, std::size_t n);
std::vector<Rational> series_expand(const RationalFunction& f, std::size_t n);

}  // namespace polyrat
