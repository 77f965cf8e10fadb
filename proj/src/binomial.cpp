#include "polyrat/binomial.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>

namespace polyrat {

namespace {

bool factor_order(const BinomialFactor& a, const BinomialFactor& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.ell < b.ell;
}

void merge_and_sort(std::vector<BinomialFactor>& factors) {
    std::sort(factors.begin(), factors.end(), factor_order);
    std::vector<BinomialFactor> merged;
    for (const auto& f : factors) {
        if (!merged.empty() && merged.back().lambda == f.lambda && merged.back().ell == f.ell)
            merged.back().k += f.k;
        else
            merged.push_back(f);
    }
    factors = std::move(merged);
}

// Candidate order: ascending |num| + den, positive before negative on ties.
bool lambda_order(const Rational& a, const Rational& b) {
    Integer wa = abs(a.numerator()) + a.denominator();
    Integer wb = abs(b.numerator()) + b.denominator();
    if (wa != wb) return wa < wb;
    if (a.sign() != b.sign()) return a.sign() > b.sign();
    return a < b;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const BinomialFactor& f) {
    os << "(" << f.base().str() << ")";
    if (f.k > 1) os << "^" << f.k;
    return os;
}

Polynomial BinomialCertificate::factor_product() const {
    Polynomial p = Polynomial::one();
    for (const auto& f : factors) p = p * f.power();
    return p;
}

Polynomial BinomialExtension::denominator() const {
    Polynomial p = Polynomial::one();
    for (const auto& f : factors) p = p * f.power();
    return p;
}

unsigned long default_max_ell(const Polynomial& q) {
    long d = std::max(q.degree(), 1);
    return 2ul * static_cast<unsigned long>(d) * static_cast<unsigned long>(d);
}

BinomialCertificate binomial_factorize(const Polynomial& q, unsigned long max_ell) {
    if (q.is_zero() || q.constant_term().is_zero())
        throw DomainError("binomial_factorize requires q(0) != 0");
    BinomialCertificate cert;
    Polynomial work = q;
    unsigned long start = std::min<unsigned long>(static_cast<unsigned long>(work.degree()), max_ell);
    // Largest ell first: stripping a small factor of a large binomial (for
    // example 1 - x out of 1 - x^3) would strand the non-binomial cofactor.
    for (unsigned long ell = start; ell >= 1; --ell) {
        if (static_cast<long>(ell) > work.degree()) continue;
        // work(x) = sum_r x^r G_r(x^ell); (x^ell - mu) divides work iff mu is
        // a common root of the groups G_r.
        Polynomial group_gcd;
        for (unsigned long r = 0; r < ell; ++r) {
            std::vector<Rational> g;
            for (std::size_t j = r; j <= static_cast<std::size_t>(work.degree()); j += ell)
                g.push_back(work.at(j));
            group_gcd = poly_gcd(group_gcd, Polynomial(std::move(g)));
        }
        if (group_gcd.degree() < 1) continue;
        std::vector<Rational> lambdas;
        for (const Rational& mu : rational_roots(group_gcd))
            if (!mu.is_zero()) lambdas.push_back(mu.reciprocal());
        std::sort(lambdas.begin(), lambdas.end(), lambda_order);
        for (const Rational& lambda : lambdas) {
            Polynomial base = Polynomial::binomial(lambda, static_cast<unsigned>(ell));
            unsigned k = 0;
            while (divides(base, work)) {
                work = exact_div(work, base);
                ++k;
            }
            if (k > 0) cert.factors.push_back({lambda, static_cast<unsigned>(ell), k});
        }
    }
    merge_and_sort(cert.factors);
    cert.residual = work;
    return cert;
}

BinomialCertificate binomial_factorize(const Polynomial& q) {
    return binomial_factorize(q, default_max_ell(q));
}

namespace {

// S squarefree with S(0) = 1: find binomials whose product is S times an
// exact cofactor. Splits S by gcd with x^ell - c when no single binomial
// covers it; candidate constants c are rational roots of Res_x(S, x^ell - c).
struct BinomialCover {
    std::vector<std::pair<Rational, unsigned>> binomials;  // (lambda, ell)
    Polynomial cofactor;
};

BinomialCover resolve_binomial_cover(const Polynomial& s, unsigned long max_ell) {
    if (s.degree() < 1) return {{}, Polynomial::one()};
    for (unsigned long ell = 1; ell <= max_ell; ++ell) {
        Polynomial r = x_pow_mod(ell, s);
        if (!r.is_constant()) continue;
        Rational c = r.constant_term();
        if (c.is_zero()) continue;  // would need x | s, impossible with s(0) != 0
        Rational lambda = c.reciprocal();
        Polynomial base = Polynomial::binomial(lambda, static_cast<unsigned>(ell));
        return {{{lambda, static_cast<unsigned>(ell)}}, exact_div(base, s)};
    }
    Polynomial xp = Polynomial::monomial(Rational(1), 1);
    for (unsigned long ell = 1; ell <= max_ell; ++ell) {
        Polynomial res_c = resultant_in_constant(s, xp.pow(static_cast<unsigned>(ell)));
        if (res_c.is_zero()) continue;
        for (const Rational& c0 : rational_roots(res_c)) {
            if (c0.is_zero()) continue;
            Polynomial g = poly_gcd(s, Polynomial::monomial(Rational(1), ell) - Polynomial(c0));
            if (g.degree() < 1 || g.degree() >= s.degree()) continue;
            Polynomial h = exact_div(s, g);
            BinomialCover left = resolve_binomial_cover(g, max_ell);
            BinomialCover right = resolve_binomial_cover(h, max_ell);
            left.binomials.insert(left.binomials.end(), right.binomials.begin(),
                                  right.binomials.end());
            return {std::move(left.binomials), left.cofactor * right.cofactor};
        }
    }
    throw NotPolyRationalError(s, max_ell);
}

}  // namespace

BinomialExtension binomial_multiple_extend(const RationalFunction& f, unsigned long max_ell) {
    BinomialCertificate cert = binomial_factorize(f.den(), max_ell);
    BinomialExtension ext{f.num(), cert.factors};
    if (cert.residual.degree() > 0) {
        SquareFreeDecomposition sq = square_free_decomposition(cert.residual);
        if (sq.unit != Rational(1))
            throw DomainError("binomial_multiple_extend internal error: residual unit != 1");
        for (const auto& [part, mult] : sq.parts) {
            BinomialCover cover = resolve_binomial_cover(part, max_ell);
            ext.num = ext.num * cover.cofactor.pow(mult);
            for (const auto& [lambda, ell] : cover.binomials)
                ext.factors.push_back({lambda, ell, mult});
        }
    }
    merge_and_sort(ext.factors);
    return ext;
}

BinomialExtension binomial_multiple_extend(const RationalFunction& f) {
    return binomial_multiple_extend(f, default_max_ell(f.den()));
}

bool bases_coprime(const BinomialFactor& a, const BinomialFactor& b) {
    unsigned long l = std::lcm<unsigned long>(a.ell, b.ell);
    return a.lambda.pow(l / a.ell) != b.lambda.pow(l / b.ell);
}

namespace {

// First non-coprime pair (i, j), or nullopt when all bases are coprime.
std::optional<std::pair<std::size_t, std::size_t>> find_collision(
    const std::vector<BinomialFactor>& factors) {
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            if (!bases_coprime(factors[i], factors[j])) return std::make_pair(i, j);
    return std::nullopt;
}

}  // namespace

BinomialExtension refine_coprime(BinomialExtension ext) {
    merge_and_sort(ext.factors);
    while (auto hit = find_collision(ext.factors)) {
        auto [i, j] = *hit;
        BinomialFactor a = ext.factors[i];
        BinomialFactor b = ext.factors[j];
        unsigned long l = std::lcm<unsigned long>(a.ell, b.ell);
        BinomialFactor merged{a.lambda.pow(l / a.ell), static_cast<unsigned>(l), 0};
        Polynomial pair_product = a.power() * b.power();
        // Smallest power of the common binomial both factors divide.
        for (unsigned k = std::max(a.k, b.k); k <= a.k + b.k; ++k) {
            Polynomial candidate = merged.base().pow(k);
            if (divides(pair_product, candidate)) {
                merged.k = k;
                ext.num = ext.num * exact_div(candidate, pair_product);
                break;
            }
        }
        if (merged.k == 0)
            throw DomainError("refine_coprime internal error: no common multiple found");
        ext.factors.erase(ext.factors.begin() + static_cast<long>(j));
        ext.factors.erase(ext.factors.begin() + static_cast<long>(i));
        ext.factors.push_back(merged);
        merge_and_sort(ext.factors);
    }
    return ext;
}

RationalFunction PartialFractionDecomposition::recombine() const {
    RationalFunction acc(poly_part, Polynomial::one());
    for (const auto& t : terms)
        acc = acc + RationalFunction(t.num, Polynomial::binomial(t.lambda, t.ell).pow(t.k));
    return acc;
}

PartialFractionDecomposition partial_fractions(const BinomialExtension& ext) {
    for (std::size_t i = 0; i < ext.factors.size(); ++i)
        for (std::size_t j = i + 1; j < ext.factors.size(); ++j)
            if (!bases_coprime(ext.factors[i], ext.factors[j]))
                throw DomainError(
                    "partial_fractions requires pairwise coprime bases; refine the certificate");
    PartialFractionDecomposition out;
    if (ext.factors.empty()) {
        out.poly_part = ext.num;
        return out;
    }
    std::vector<Polynomial> powers;
    powers.reserve(ext.factors.size());
    for (const auto& f : ext.factors) powers.push_back(f.power());
    Polynomial work = ext.num;
    for (std::size_t i = 0; i + 1 < ext.factors.size(); ++i) {
        Polynomial rest = Polynomial::one();
        for (std::size_t j = i + 1; j < ext.factors.size(); ++j) rest = rest * powers[j];
        ExtendedGcd eg = poly_ext_gcd(powers[i], rest);
        if (eg.g.degree() != 0)
            throw DomainError("partial_fractions internal error: bases share a factor");
        // work/(D*rest) = work*t/D + work*s/rest with s*D + t*rest = 1.
        auto [q, r] = divmod(work * eg.t, powers[i]);
        out.terms.push_back({r, ext.factors[i].lambda, ext.factors[i].ell, ext.factors[i].k});
        work = work * eg.s + q * rest;
    }
    auto [q, r] = divmod(work, powers.back());
    out.poly_part = q;
    out.terms.push_back(
        {r, ext.factors.back().lambda, ext.factors.back().ell, ext.factors.back().k});
    return out;
}

PartialFractionDecomposition partial_fractions(const RationalFunction& f,
                                               const BinomialCertificate& cert) {
    if (!cert.complete()) throw DomainError("partial_fractions: certificate residual is not 1");
    Polynomial target = cert.factor_product();
    if (!divides(f.den(), target))
        throw DomainError("partial_fractions: certificate does not cover the denominator");
    BinomialExtension ext{f.num() * exact_div(target, f.den()), cert.factors};
    return partial_fractions(ext);
}

}  // namespace polyrat
