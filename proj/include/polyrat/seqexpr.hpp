#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyrat/binomial.hpp"
#include "polyrat/rational.hpp"

namespace polyrat {

enum class SeqKind { Arith, Geo, Fin, Sum, Hadamard, Cauchy, Star, Shift, Shuffle };

class SeqExpr;
using SeqExprPtr = std::shared_ptr<const SeqExpr>;

/// Immutable AST of a rational-expression sequence. Atoms are arithmetic,
/// geometric and finite-support sequences; operators are componentwise sum,
/// Hadamard product, Cauchy product, Kleene star, shift and shuffle.
class SeqExpr {
public:
    static SeqExprPtr arith(Rational a, Rational b);
    static SeqExprPtr geo(Rational a, Rational lambda);
    static SeqExprPtr fin(std::vector<Rational> values);
    static SeqExprPtr sum(SeqExprPtr l, SeqExprPtr r);
    static SeqExprPtr hadamard(SeqExprPtr l, SeqExprPtr r);
    static SeqExprPtr cauchy(SeqExprPtr l, SeqExprPtr r);
    static SeqExprPtr star(SeqExprPtr e);
    static SeqExprPtr shift(Rational a, SeqExprPtr e);
    static SeqExprPtr shuffle(std::vector<SeqExprPtr> children);

    SeqKind kind() const { return kind_; }
    /// Arith(a, .) / Geo(a, .) / Shift(a, .) head constant.
    const Rational& a() const { return a_; }
    /// Arith(., b) difference / Geo(., lambda) ratio.
    const Rational& b() const { return b_; }
    const std::vector<Rational>& values() const { return values_; }
    const std::vector<SeqExprPtr>& children() const { return children_; }

    bool operator==(const SeqExpr& o) const;

private:
    SeqExpr() = default;

    SeqKind kind_ = SeqKind::Fin;
    Rational a_, b_;
    std::vector<Rational> values_;
    std::vector<SeqExprPtr> children_;
};

/// Parse the concrete syntax; grammar:
///   expr := term (('+' | '*' | '.') term)*    '.' > '*' > '+', left-assoc
///   term := 'arith(' rat ',' rat ')' | 'geo(' rat ',' rat ')'
///         | 'fin[' rat (',' rat)* ']' | 'star(' expr ')'
///         | 'shift(' rat ',' expr ')' | 'shuffle(' expr (',' expr)* ')'
///         | '(' expr ')'
SeqExprPtr parse_seqexpr(const std::string& text);

/// Inverse of the parser on ASTs: parse(print(e)) == e.
std::string print_seqexpr(const SeqExpr& e);
std::ostream& operator<<(std::ostream& os, const SeqExpr& e);

/// First n terms. Throws StarUndefinedError when a starred child has a
/// nonzero first term.
std::vector<Rational> eval_seqexpr(const SeqExpr& e, std::size_t n);

/// Syntactic fragments an expression falls into. PolyRat excludes Cauchy and
/// star; the deterministic fragment allows only Geo atoms with one common
/// ratio under shift and shuffle; the finitely-ambiguous fragment adds sums
/// and arbitrary ratios; the linear-CCRA fragment allows Arith and Geo atoms
/// under sum, shift and shuffle.
struct FragmentSet {
    bool polyrat = false;
    bool rat = true;
    bool finwa = false;
    bool linear_ccra = false;
    std::optional<Rational> det_lambda;  // engaged iff in the deterministic fragment

    std::vector<std::string> names() const;
};

FragmentSet fragment_of(const SeqExpr& e);

/// PolyRat expression whose sequence has generating function
/// R / (1 - lambda x^ell)^k: the coefficient C(n+k-1, k-1) is expanded as a
/// polynomial in n via Hadamard products of arithmetic atoms, multiplied by
/// the geometric part, interleaved with ell-1 zero sequences, and shifted per
/// the numerator R.
SeqExprPtr binomial_term_expr(const Polynomial& r, const Rational& lambda, unsigned ell,
                              unsigned k);

/// Sum expression for a full partial-fraction decomposition.
SeqExprPtr decomposition_expr(const PartialFractionDecomposition& pf);

}  // namespace polyrat
