#pragma once

#include <iosfwd>
#include <vector>

#include "polyrat/rational_function.hpp"

namespace polyrat {

/// One factor (1 - lambda * x^ell)^k of a denominator.
struct BinomialFactor {
    Rational lambda;
    unsigned ell = 1;
    unsigned k = 1;

    Polynomial base() const { return Polynomial::binomial(lambda, ell); }
    Polynomial power() const { return base().pow(k); }
    bool operator==(const BinomialFactor& o) const {
        return lambda == o.lambda && ell == o.ell && k == o.k;
    }
};

std::ostream& operator<<(std::ostream& os, const BinomialFactor& f);

/// q = residual * prod (1 - lambda_i x^ell_i)^k_i, with the residual free of
/// binomial divisors up to the exponent bound used to build the certificate.
struct BinomialCertificate {
    std::vector<BinomialFactor> factors;
    Polynomial residual = Polynomial::one();

    Polynomial factor_product() const;
    Polynomial product() const { return residual * factor_product(); }
    bool complete() const { return residual == Polynomial::one(); }
};

/// A series rewritten over a pure binomial-power denominator:
///   num / prod (1 - lambda_i x^ell_i)^k_i.
/// The fraction is intentionally not reduced; reducing it can destroy the
/// binomial shape of the denominator.
struct BinomialExtension {
    Polynomial num;
    std::vector<BinomialFactor> factors;

    Polynomial denominator() const;
};

/// The residual factor that could not be covered by any (1 - lambda x^ell)
/// with ell up to the bound.
struct NotPolyRationalError : std::runtime_error {
    Polynomial witness;
    unsigned long max_ell;
    NotPolyRationalError(Polynomial w, unsigned long bound)
        : std::runtime_error("not poly-rational up to exponent bound " + std::to_string(bound) +
                             "; stuck factor " + w.str()),
          witness(std::move(w)),
          max_ell(bound) {}
};

/// Default exponent search bound 2*deg(q)^2: large enough for the minimal
/// exponent of any root of unity of degree <= deg(q) (phi(m) >= sqrt(m/2)).
unsigned long default_max_ell(const Polynomial& q);

/// Greedily strip factors (1 - lambda x^ell), ell from min(deg, max_ell) down
/// to 1; candidates lambda are found by grouping coefficients by residue mod
/// ell and taking rational roots of the group gcd. Requires q(0) != 0.
BinomialCertificate binomial_factorize(const Polynomial& q, unsigned long max_ell);
BinomialCertificate binomial_factorize(const Polynomial& q);

/// Rewrite f over a denominator that is exactly a product of binomial powers,
/// multiplying numerator and denominator by the cofactors the residual needs.
/// Throws NotPolyRationalError (with the stuck factor) when the residual has a
/// factor that divides no (1 - lambda x^ell) with ell <= max_ell.
BinomialExtension binomial_multiple_extend(const RationalFunction& f, unsigned long max_ell);
BinomialExtension binomial_multiple_extend(const RationalFunction& f);

/// Two binomial bases share a root iff lambda1^(L/ell1) == lambda2^(L/ell2)
/// with L = lcm(ell1, ell2).
bool bases_coprime(const BinomialFactor& a, const BinomialFactor& b);

/// Merge every pair of non-coprime bases into their common binomial multiple
/// (1 - Lambda x^L)^k, extending the numerator by the exact cofactor, until
/// the bases are pairwise coprime. Keeps every base a binomial.
BinomialExtension refine_coprime(BinomialExtension ext);

struct PartialFractionTerm {
    Polynomial num;  // degree < ell * k
    Rational lambda;
    unsigned ell = 1;
    unsigned k = 1;
};

struct PartialFractionDecomposition {
    Polynomial poly_part;
    std::vector<PartialFractionTerm> terms;

    /// Recombine over the common denominator; equals the input exactly.
    RationalFunction recombine() const;
};

/// Partial fractions over pairwise-coprime binomial-power bases. One term per
/// base, plus an explicit polynomial part when deg num >= deg den.
/// Throws DomainError when the bases are not pairwise coprime.
PartialFractionDecomposition partial_fractions(const BinomialExtension& ext);

/// Convenience overload per the certificate interface: requires cert.residual
/// to be 1 and f.den() to divide the certificate product.
PartialFractionDecomposition partial_fractions(const RationalFunction& f,
                                               const BinomialCertificate& cert);

}  // namespace polyrat
