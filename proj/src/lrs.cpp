#include "polyrat/lrs.hpp"

namespace polyrat {

std::vector<Rational> eval_lrs_prefix(const Lrs& l, std::size_t n) {
    std::size_t k = l.order();
    if (l.init.size() != k) throw DomainError("lrs: init length must equal the order");
    std::vector<Rational> u;
    u.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < k) {
            u.push_back(l.init[i]);
            continue;
        }
        Rational acc(0);
        for (std::size_t j = 0; j < k; ++j) acc += l.coeffs[j] * u[i - 1 - j];
        u.push_back(acc);
    }
    return u;
}

Rational eval_lrs(const Lrs& l, std::size_t n) { return eval_lrs_prefix(l, n + 1)[n]; }

Polynomial char_poly(const Lrs& l) {
    std::size_t k = l.order();
    std::vector<Rational> c(k + 1, Rational(0));
    c[k] = Rational(1);
    for (std::size_t j = 0; j < k; ++j) c[k - 1 - j] = -l.coeffs[j];
    return Polynomial(std::move(c));
}

RationalFunction lrs_to_series(const Lrs& l) {
    std::size_t k = l.order();
    // Reversed characteristic polynomial 1 - a_1 x - ... - a_k x^k.
    std::vector<Rational> d(k + 1, Rational(0));
    d[0] = Rational(1);
    for (std::size_t j = 0; j < k; ++j) d[j + 1] = -l.coeffs[j];
    Polynomial den(std::move(d));
    Polynomial prefix{std::vector<Rational>(l.init.begin(), l.init.end())};
    Polynomial num = (prefix * den).truncated(k);
    if (k == 0) return RationalFunction();
    return RationalFunction(num, den);
}

Lrs series_to_lrs(const RationalFunction& f) {
    std::size_t k = static_cast<std::size_t>(std::max(
        f.den().degree(), f.num().degree() + 1));
    Lrs out;
    out.coeffs.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) out.coeffs.push_back(-f.den().at(j));
    out.init = series_expand(f, k);
    return out;
}

PolyRatVerdict classify_polyrat(const Lrs& l, unsigned long max_ell) {
    PolyRatVerdict v;
    v.max_ell = max_ell;
    RationalFunction f = lrs_to_series(l);
    try {
        BinomialExtension ext = binomial_multiple_extend(f, max_ell);
        v.is_polyrat = true;
        v.certificate = ext.factors;
    } catch (const NotPolyRationalError& e) {
        v.is_polyrat = false;
        v.witness = e.witness;
    }
    return v;
}

PolyRatVerdict classify_polyrat(const Lrs& l) {
    return classify_polyrat(l, default_max_ell(lrs_to_series(l).den()));
}

SeqExprPtr series_to_expr(const RationalFunction& f, unsigned long max_ell) {
    BinomialExtension ext = refine_coprime(binomial_multiple_extend(f, max_ell));
    return decomposition_expr(partial_fractions(ext));
}

SeqExprPtr lrs_to_expr(const Lrs& l, unsigned long max_ell) {
    return series_to_expr(lrs_to_series(l), max_ell);
}

SeqExprPtr lrs_to_expr(const Lrs& l) {
    return lrs_to_expr(l, default_max_ell(lrs_to_series(l).den()));
}

}  // namespace polyrat
