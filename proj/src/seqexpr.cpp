#include "polyrat/seqexpr.hpp"

#include <cctype>
#include <ostream>

#include "polyrat/errors.hpp"

namespace polyrat {

SeqExprPtr SeqExpr::arith(Rational a, Rational b) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Arith;
    e->a_ = std::move(a);
    e->b_ = std::move(b);
    return e;
}

SeqExprPtr SeqExpr::geo(Rational a, Rational lambda) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Geo;
    e->a_ = std::move(a);
    e->b_ = std::move(lambda);
    return e;
}

SeqExprPtr SeqExpr::fin(std::vector<Rational> values) {
    if (values.empty()) throw DomainError("fin requires at least one value");
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Fin;
    e->values_ = std::move(values);
    return e;
}

SeqExprPtr SeqExpr::sum(SeqExprPtr l, SeqExprPtr r) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Sum;
    e->children_ = {std::move(l), std::move(r)};
    return e;
}

SeqExprPtr SeqExpr::hadamard(SeqExprPtr l, SeqExprPtr r) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Hadamard;
    e->children_ = {std::move(l), std::move(r)};
    return e;
}

SeqExprPtr SeqExpr::cauchy(SeqExprPtr l, SeqExprPtr r) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Cauchy;
    e->children_ = {std::move(l), std::move(r)};
    return e;
}

SeqExprPtr SeqExpr::star(SeqExprPtr child) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Star;
    e->children_ = {std::move(child)};
    return e;
}

SeqExprPtr SeqExpr::shift(Rational a, SeqExprPtr child) {
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Shift;
    e->a_ = std::move(a);
    e->children_ = {std::move(child)};
    return e;
}

SeqExprPtr SeqExpr::shuffle(std::vector<SeqExprPtr> children) {
    if (children.empty()) throw DomainError("shuffle requires at least one child");
    auto e = std::shared_ptr<SeqExpr>(new SeqExpr());
    e->kind_ = SeqKind::Shuffle;
    e->children_ = std::move(children);
    return e;
}

bool SeqExpr::operator==(const SeqExpr& o) const {
    if (kind_ != o.kind_ || a_ != o.a_ || b_ != o.b_ || values_ != o.values_ ||
        children_.size() != o.children_.size())
        return false;
    for (std::size_t i = 0; i < children_.size(); ++i)
        if (!(*children_[i] == *o.children_[i])) return false;
    return true;
}

// --- parser -----------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    SeqExprPtr parse() {
        SeqExprPtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    // expr := sum_level; '.' binds tighter than '*', which binds tighter than '+'.
    SeqExprPtr expr() { return sum_level(); }

    SeqExprPtr sum_level() {
        SeqExprPtr e = hadamard_level();
        while (peek() == '+') {
            ++pos_;
            e = SeqExpr::sum(e, hadamard_level());
        }
        return e;
    }

    SeqExprPtr hadamard_level() {
        SeqExprPtr e = cauchy_level();
        while (peek() == '*') {
            ++pos_;
            e = SeqExpr::hadamard(e, cauchy_level());
        }
        return e;
    }

    SeqExprPtr cauchy_level() {
        SeqExprPtr e = term();
        while (peek() == '.') {
            ++pos_;
            e = SeqExpr::cauchy(e, term());
        }
        return e;
    }

    SeqExprPtr term() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            SeqExprPtr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name = ident();
            if (name == "arith") {
                expect('(');
                Rational a = rational();
                expect(',');
                Rational b = rational();
                expect(')');
                return SeqExpr::arith(a, b);
            }
            if (name == "geo") {
                expect('(');
                Rational a = rational();
                expect(',');
                Rational l = rational();
                expect(')');
                return SeqExpr::geo(a, l);
            }
            if (name == "fin") {
                expect('[');
                std::vector<Rational> vals{rational()};
                while (peek() == ',') {
                    ++pos_;
                    vals.push_back(rational());
                }
                expect(']');
                return SeqExpr::fin(std::move(vals));
            }
            if (name == "star") {
                expect('(');
                SeqExprPtr e = expr();
                expect(')');
                return SeqExpr::star(e);
            }
            if (name == "shift") {
                expect('(');
                Rational a = rational();
                expect(',');
                SeqExprPtr e = expr();
                expect(')');
                return SeqExpr::shift(a, e);
            }
            if (name == "shuffle") {
                expect('(');
                std::vector<SeqExprPtr> kids{expr()};
                while (peek() == ',') {
                    ++pos_;
                    kids.push_back(expr());
                }
                expect(')');
                return SeqExpr::shuffle(std::move(kids));
            }
            throw ParseError("unknown atom '" + name + "'", pos_);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string ident() {
        std::string out;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            out += text_[pos_++];
        return out;
    }

    Rational rational() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ == start) throw ParseError("expected rational", pos_);
        try {
            return Rational::parse(text_.substr(start, pos_ - start));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), start);
        }
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

int precedence(SeqKind k) {
    switch (k) {
        case SeqKind::Sum: return 1;
        case SeqKind::Hadamard: return 2;
        case SeqKind::Cauchy: return 3;
        default: return 4;
    }
}

void print_rec(const SeqExpr& e, std::string& out) {
    auto child = [&](const SeqExpr& c, bool right_side) {
        // Parenthesize when the child binds looser, or equally on the right
        // (the operators are left-associative).
        bool need = precedence(c.kind()) < precedence(e.kind()) ||
                    (right_side && precedence(c.kind()) == precedence(e.kind()));
        if (need) out += "(";
        print_rec(c, out);
        if (need) out += ")";
    };
    switch (e.kind()) {
        case SeqKind::Arith:
            out += "arith(" + e.a().str() + ", " + e.b().str() + ")";
            break;
        case SeqKind::Geo:
            out += "geo(" + e.a().str() + ", " + e.b().str() + ")";
            break;
        case SeqKind::Fin: {
            out += "fin[";
            for (std::size_t i = 0; i < e.values().size(); ++i) {
                if (i > 0) out += ", ";
                out += e.values()[i].str();
            }
            out += "]";
            break;
        }
        case SeqKind::Sum:
            child(*e.children()[0], false);
            out += " + ";
            child(*e.children()[1], true);
            break;
        case SeqKind::Hadamard:
            child(*e.children()[0], false);
            out += " * ";
            child(*e.children()[1], true);
            break;
        case SeqKind::Cauchy:
            child(*e.children()[0], false);
            out += " . ";
            child(*e.children()[1], true);
            break;
        case SeqKind::Star:
            out += "star(";
            print_rec(*e.children()[0], out);
            out += ")";
            break;
        case SeqKind::Shift:
            out += "shift(" + e.a().str() + ", ";
            print_rec(*e.children()[0], out);
            out += ")";
            break;
        case SeqKind::Shuffle: {
            out += "shuffle(";
            for (std::size_t i = 0; i < e.children().size(); ++i) {
                if (i > 0) out += ", ";
                print_rec(*e.children()[i], out);
            }
            out += ")";
            break;
        }
    }
}

}  // namespace

SeqExprPtr parse_seqexpr(const std::string& text) { return Parser(text).parse(); }

std::string print_seqexpr(const SeqExpr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

std::ostream& operator<<(std::ostream& os, const SeqExpr& e) { return os << print_seqexpr(e); }

// --- evaluation --------------------------------------------------------------

std::vector<Rational> eval_seqexpr(const SeqExpr& e, std::size_t n) {
    std::vector<Rational> out;
    out.reserve(n);
    switch (e.kind()) {
        case SeqKind::Arith: {
            Rational v = e.a();
            for (std::size_t i = 0; i < n; ++i, v += e.b()) out.push_back(v);
            break;
        }
        case SeqKind::Geo: {
            Rational v = e.a();
            for (std::size_t i = 0; i < n; ++i, v *= e.b()) out.push_back(v);
            break;
        }
        case SeqKind::Fin:
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(i < e.values().size() ? e.values()[i] : Rational(0));
            break;
        case SeqKind::Sum: {
            auto l = eval_seqexpr(*e.children()[0], n);
            auto r = eval_seqexpr(*e.children()[1], n);
            for (std::size_t i = 0; i < n; ++i) out.push_back(l[i] + r[i]);
            break;
        }
        case SeqKind::Hadamard: {
            auto l = eval_seqexpr(*e.children()[0], n);
            auto r = eval_seqexpr(*e.children()[1], n);
            for (std::size_t i = 0; i < n; ++i) out.push_back(l[i] * r[i]);
            break;
        }
        case SeqKind::Cauchy: {
            auto l = eval_seqexpr(*e.children()[0], n);
            auto r = eval_seqexpr(*e.children()[1], n);
            for (std::size_t i = 0; i < n; ++i) {
                Rational acc(0);
                for (std::size_t p = 0; p <= i; ++p) acc += l[p] * r[i - p];
                out.push_back(acc);
            }
            break;
        }
        case SeqKind::Star: {
            auto u = eval_seqexpr(*e.children()[0], n);
            if (!u.empty() && !u[0].is_zero())
                throw StarUndefinedError("star of a sequence with nonzero first term");
            // s_0 = 1, s_n = sum_{i=1..n} u_i s_{n-i}.
            for (std::size_t i = 0; i < n; ++i) {
                if (i == 0) {
                    out.push_back(Rational(1));
                    continue;
                }
                Rational acc(0);
                for (std::size_t j = 1; j <= i; ++j) acc += u[j] * out[i - j];
                out.push_back(acc);
            }
            break;
        }
        case SeqKind::Shift: {
            if (n == 0) break;
            out.push_back(e.a());
            auto tail = eval_seqexpr(*e.children()[0], n - 1);
            out.insert(out.end(), tail.begin(), tail.end());
            break;
        }
        case SeqKind::Shuffle: {
            std::size_t k = e.children().size();
            std::vector<std::vector<Rational>> parts;
            parts.reserve(k);
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t need = n > j ? (n - j + k - 1) / k : 0;
                parts.push_back(eval_seqexpr(*e.children()[j], need));
            }
            for (std::size_t i = 0; i < n; ++i) out.push_back(parts[i % k][i / k]);
            break;
        }
    }
    return out;
}

// --- fragments ---------------------------------------------------------------

namespace {

struct FragmentScan {
    bool has_arith = false, has_fin = false, has_cauchy = false, has_star = false;
    bool has_sum = false, has_hadamard = false;
    std::vector<Rational> geo_lambdas;
};

void scan(const SeqExpr& e, FragmentScan& s) {
    switch (e.kind()) {
        case SeqKind::Arith: s.has_arith = true; break;
        case SeqKind::Geo: s.geo_lambdas.push_back(e.b()); break;
        case SeqKind::Fin: s.has_fin = true; break;
        case SeqKind::Sum: s.has_sum = true; break;
        case SeqKind::Hadamard: s.has_hadamard = true; break;
        case SeqKind::Cauchy: s.has_cauchy = true; break;
        case SeqKind::Star: s.has_star = true; break;
        case SeqKind::Shift:
        case SeqKind::Shuffle: break;
    }
    for (const auto& c : e.children()) scan(*c, s);
}

}  // namespace

FragmentSet fragment_of(const SeqExpr& e) {
    FragmentScan s;
    scan(e, s);
    FragmentSet out;
    out.polyrat = !s.has_cauchy && !s.has_star;
    bool geo_only_atoms = !s.has_arith && !s.has_fin;
    bool shift_shuffle_ops = !s.has_cauchy && !s.has_star && !s.has_sum && !s.has_hadamard;
    out.finwa = geo_only_atoms && !s.has_cauchy && !s.has_star && !s.has_hadamard;
    out.linear_ccra = !s.has_fin && !s.has_cauchy && !s.has_star && !s.has_hadamard;
    if (geo_only_atoms && shift_shuffle_ops && !s.geo_lambdas.empty()) {
        bool same = true;
        for (const auto& l : s.geo_lambdas)
            if (l != s.geo_lambdas.front()) same = false;
        if (same) out.det_lambda = s.geo_lambdas.front();
    }
    return out;
}

std::vector<std::string> FragmentSet::names() const {
    std::vector<std::string> out;
    if (det_lambda) out.push_back("DetFragment(lambda=" + det_lambda->str() + ")");
    if (finwa) out.push_back("FinWaFragment");
    if (linear_ccra) out.push_back("LinearCcraFragment");
    if (polyrat) out.push_back("PolyRatFragment");
    if (rat) out.push_back("RatFragment");
    return out;
}

// --- binomial terms ----------------------------------------------------------

namespace {

SeqExprPtr constant_expr(const Rational& c) { return SeqExpr::geo(c, Rational(1)); }

SeqExprPtr zero_expr() { return SeqExpr::geo(Rational(0), Rational(1)); }

// <c(n)> for a polynomial c, as sums of Hadamard powers of arith(0, 1).
SeqExprPtr polynomial_in_n_expr(const Polynomial& c) {
    SeqExprPtr acc;
    for (std::size_t p = 0; p < c.coeffs().size(); ++p) {
        Rational coeff = c.at(p);
        if (coeff.is_zero()) continue;
        SeqExprPtr term;
        if (p == 0) {
            term = constant_expr(coeff);
        } else {
            term = SeqExpr::arith(Rational(0), Rational(1));
            for (std::size_t i = 1; i < p; ++i)
                term = SeqExpr::hadamard(term, SeqExpr::arith(Rational(0), Rational(1)));
            if (coeff != Rational(1)) term = SeqExpr::hadamard(constant_expr(coeff), term);
        }
        acc = acc ? SeqExpr::sum(acc, term) : term;
    }
    return acc ? acc : zero_expr();
}

}  // namespace

SeqExprPtr binomial_term_expr(const Polynomial& r, const Rational& lambda, unsigned ell,
                              unsigned k) {
    if (lambda.is_zero()) throw DomainError("binomial_term_expr requires lambda != 0");
    if (ell < 1 || k < 1) throw DomainError("binomial_term_expr requires ell, k >= 1");
    if (r.is_zero()) return zero_expr();
    // 1/(1 - lambda x^ell)^k = sum_n C(n+k-1, k-1) lambda^n x^(ell n).
    SeqExprPtr base;
    if (k == 1) {
        base = SeqExpr::geo(Rational(1), lambda);
    } else {
        Polynomial coeff = Polynomial::one();
        for (unsigned i = 1; i <= k - 1; ++i)
            coeff = coeff * Polynomial{Rational(static_cast<long>(i)), Rational(1)};
        Rational fact(1);
        for (unsigned i = 2; i <= k - 1; ++i) fact *= Rational(static_cast<long>(i));
        coeff = coeff * fact.reciprocal();
        base = SeqExpr::hadamard(polynomial_in_n_expr(coeff), SeqExpr::geo(Rational(1), lambda));
    }
    if (ell > 1) {
        std::vector<SeqExprPtr> kids{base};
        for (unsigned i = 1; i < ell; ++i) kids.push_back(zero_expr());
        base = SeqExpr::shuffle(std::move(kids));
    }
    // Numerator: r_j x^j scales and delays the base sequence by j.
    SeqExprPtr acc;
    for (std::size_t j = 0; j < r.coeffs().size(); ++j) {
        Rational rj = r.at(j);
        if (rj.is_zero()) continue;
        SeqExprPtr term = base;
        if (rj != Rational(1)) term = SeqExpr::hadamard(constant_expr(rj), term);
        for (std::size_t s = 0; s < j; ++s) term = SeqExpr::shift(Rational(0), term);
        acc = acc ? SeqExpr::sum(acc, term) : term;
    }
    return acc ? acc : zero_expr();
}

SeqExprPtr decomposition_expr(const PartialFractionDecomposition& pf) {
    SeqExprPtr acc;
    if (!pf.poly_part.is_zero()) {
        std::vector<Rational> vals = pf.poly_part.coeffs();
        acc = SeqExpr::fin(std::move(vals));
    }
    for (const auto& t : pf.terms) {
        if (t.num.is_zero()) continue;
        SeqExprPtr term = binomial_term_expr(t.num, t.lambda, t.ell, t.k);
        acc = acc ? SeqExpr::sum(acc, term) : term;
    }
    return acc ? acc : zero_expr();
}

}  // namespace polyrat
