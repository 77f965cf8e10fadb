#pragma once

#include <optional>
#include <vector>

#include "polyrat/binomial.hpp"
#include "polyrat/seqexpr.hpp"

namespace polyrat {

/// Linear recurrence sequence u_{n+k} = a_1 u_{n+k-1} + ... + a_k u_n, given
/// by the coefficients a_1..a_k and the first k values. k = 0 is the zero
/// sequence. Minimality of the order is not required.
struct Lrs {
    std::vector<Rational> coeffs;  // a_1 .. a_k
    std::vector<Rational> init;    // u_0 .. u_{k-1}

    std::size_t order() const { return coeffs.size(); }
};

Rational eval_lrs(const Lrs& l, std::size_t n);
std::vector<Rational> eval_lrs_prefix(const Lrs& l, std::size_t n);

/// x^k - a_1 x^(k-1) - ... - a_k.
Polynomial char_poly(const Lrs& l);

/// Generating function P / (1 - a_1 x - ... - a_k x^k), reduced.
RationalFunction lrs_to_series(const Lrs& l);

/// Inverse: read the recurrence off the reduced denominator, padding the
/// order when deg num >= deg den; the initial values are the series prefix.
Lrs series_to_lrs(const RationalFunction& f);

/// classify_polyrat verdict: poly-rational iff the reduced generating
/// function extends over a pure binomial-power denominator within the
/// exponent bound; negatives carry the stuck residual factor.
struct PolyRatVerdict {
    bool is_polyrat = false;
    std::vector<BinomialFactor> certificate;  // denominator factors when positive
    std::optional<Polynomial> witness;        // stuck factor when negative
    unsigned long max_ell = 0;                // bound used for the search
};

PolyRatVerdict classify_polyrat(const Lrs& l, unsigned long max_ell);
PolyRatVerdict classify_polyrat(const Lrs& l);

/// Full pipeline series -> binomial extension -> coprime refinement ->
/// partial fractions -> sum of binomial term expressions.
/// Throws NotPolyRationalError when the sequence is not poly-rational within
/// the bound.
SeqExprPtr lrs_to_expr(const Lrs& l, unsigned long max_ell);
SeqExprPtr lrs_to_expr(const Lrs& l);

/// Same pipeline from a generating function.
SeqExprPtr series_to_expr(const RationalFunction& f, unsigned long max_ell);

}  // namespace polyrat
