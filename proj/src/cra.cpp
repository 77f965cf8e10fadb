#include "polyrat/cra.hpp"

#include <algorithm>
#include <cctype>

#include "polyrat/errors.hpp"

namespace polyrat {

RegisterExprPtr RegisterExpr::var(std::size_t index) {
    auto e = std::shared_ptr<RegisterExpr>(new RegisterExpr());
    e->kind_ = RegKind::Var;
    e->index_ = index;
    return e;
}

RegisterExprPtr RegisterExpr::constant(Rational value) {
    auto e = std::shared_ptr<RegisterExpr>(new RegisterExpr());
    e->kind_ = RegKind::Const;
    e->value_ = std::move(value);
    return e;
}

RegisterExprPtr RegisterExpr::add(RegisterExprPtr l, RegisterExprPtr r) {
    auto e = std::shared_ptr<RegisterExpr>(new RegisterExpr());
    e->kind_ = RegKind::Add;
    e->children_[0] = std::move(l);
    e->children_[1] = std::move(r);
    return e;
}

RegisterExprPtr RegisterExpr::mul(RegisterExprPtr l, RegisterExprPtr r) {
    auto e = std::shared_ptr<RegisterExpr>(new RegisterExpr());
    e->kind_ = RegKind::Mul;
    e->children_[0] = std::move(l);
    e->children_[1] = std::move(r);
    return e;
}

Rational RegisterExpr::eval(const std::vector<Rational>& valuation) const {
    switch (kind_) {
        case RegKind::Var: return valuation[index_];
        case RegKind::Const: return value_;
        case RegKind::Add: return children_[0]->eval(valuation) + children_[1]->eval(valuation);
        case RegKind::Mul: return children_[0]->eval(valuation) * children_[1]->eval(valuation);
    }
    throw DomainError("unreachable register expression kind");
}

void RegisterExpr::collect_vars(std::vector<std::size_t>& counts) const {
    switch (kind_) {
        case RegKind::Var: ++counts[index_]; return;
        case RegKind::Const: return;
        case RegKind::Add:
        case RegKind::Mul:
            children_[0]->collect_vars(counts);
            children_[1]->collect_vars(counts);
            return;
    }
}

std::string print_register_expr(const RegisterExpr& e, const std::vector<std::string>& names) {
    switch (e.kind()) {
        case RegKind::Var: return names[e.index()];
        case RegKind::Const: return e.value().str();
        case RegKind::Add:
            return print_register_expr(*e.left(), names) + "+" +
                   print_register_expr(*e.right(), names);
        case RegKind::Mul: {
            auto wrap = [&](const RegisterExpr& c) {
                std::string s = print_register_expr(c, names);
                return c.kind() == RegKind::Add ? "(" + s + ")" : s;
            };
            return wrap(*e.left()) + "*" + wrap(*e.right());
        }
    }
    throw DomainError("unreachable register expression kind");
}

namespace {

class RegExprParser {
public:
    RegExprParser(const std::string& text, const std::vector<std::string>& names)
        : text_(text), names_(names) {}

    RegisterExprPtr parse() {
        RegisterExprPtr e = sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    RegisterExprPtr sum() {
        RegisterExprPtr e = product();
        while (peek() == '+') {
            ++pos_;
            e = RegisterExpr::add(e, product());
        }
        return e;
    }

    RegisterExprPtr product() {
        RegisterExprPtr e = factor();
        while (peek() == '*') {
            ++pos_;
            e = RegisterExpr::mul(e, factor());
        }
        return e;
    }

    RegisterExprPtr factor() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RegisterExprPtr e = sum();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            std::size_t start = pos_;
            if (c == '-' || c == '+') ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
            try {
                return RegisterExpr::constant(Rational::parse(text_.substr(start, pos_ - start)));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), start);
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            for (std::size_t i = 0; i < names_.size(); ++i)
                if (names_[i] == name) return RegisterExpr::var(i);
            throw ParseError("unknown register '" + name + "'", start);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    const std::string& text_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

// Canonical multivariate form of a register expression: exponent vector over
// the machine's registers mapped to its coefficient. Used for substitution
// composition and for detecting symbolic stabilization.
using Monomial = std::vector<unsigned>;
using RegPoly = std::map<Monomial, Rational>;

void rp_add_term(RegPoly& p, const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

RegPoly rp_constant(const Rational& c, std::size_t n_regs) {
    RegPoly p;
    rp_add_term(p, Monomial(n_regs, 0), c);
    return p;
}

RegPoly rp_add(const RegPoly& a, const RegPoly& b) {
    RegPoly out = a;
    for (const auto& [m, c] : b) rp_add_term(out, m, c);
    return out;
}

RegPoly rp_mul(const RegPoly& a, const RegPoly& b) {
    RegPoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            rp_add_term(out, m, ca * cb);
        }
    return out;
}

RegPoly rp_of_expr(const RegisterExpr& e, std::size_t n_regs) {
    switch (e.kind()) {
        case RegKind::Var: {
            RegPoly p;
            Monomial m(n_regs, 0);
            m[e.index()] = 1;
            rp_add_term(p, m, Rational(1));
            return p;
        }
        case RegKind::Const: return rp_constant(e.value(), n_regs);
        case RegKind::Add:
            return rp_add(rp_of_expr(*e.left(), n_regs), rp_of_expr(*e.right(), n_regs));
        case RegKind::Mul:
            return rp_mul(rp_of_expr(*e.left(), n_regs), rp_of_expr(*e.right(), n_regs));
    }
    throw DomainError("unreachable register expression kind");
}

RegPoly rp_pow(const RegPoly& base, unsigned e, std::size_t n_regs) {
    RegPoly acc = rp_constant(Rational(1), n_regs);
    for (unsigned i = 0; i < e; ++i) acc = rp_mul(acc, base);
    return acc;
}

// p with register i replaced by images[i].
RegPoly rp_substitute(const RegPoly& p, const std::vector<RegPoly>& images, std::size_t n_regs) {
    RegPoly out;
    for (const auto& [m, c] : p) {
        RegPoly term = rp_constant(c, n_regs);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) term = rp_mul(term, rp_pow(images[i], m[i], n_regs));
        out = rp_add(out, term);
    }
    return out;
}

bool rp_is_constant(const RegPoly& p) {
    if (p.empty()) return true;
    if (p.size() > 1) return false;
    const Monomial& m = p.begin()->first;
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
}

Rational rp_constant_value(const RegPoly& p) {
    return p.empty() ? Rational(0) : p.begin()->second;
}

Rational rp_eval(const RegPoly& p, const std::vector<Rational>& valuation) {
    Rational acc(0);
    for (const auto& [m, c] : p) {
        Rational term = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned e = 0; e < m[i]; ++e) term *= valuation[i];
        acc += term;
    }
    return acc;
}

RegisterExprPtr rp_to_expr(const RegPoly& p) {
    if (p.empty()) return RegisterExpr::constant(Rational(0));
    RegisterExprPtr acc;
    for (const auto& [m, c] : p) {
        RegisterExprPtr term;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned e = 0; e < m[i]; ++e) {
                RegisterExprPtr v = RegisterExpr::var(i);
                term = term ? RegisterExpr::mul(term, v) : v;
            }
        if (!term) {
            term = RegisterExpr::constant(c);
        } else if (c != Rational(1)) {
            term = RegisterExpr::mul(RegisterExpr::constant(c), term);
        }
        acc = acc ? RegisterExpr::add(acc, term) : term;
    }
    return acc;
}

std::vector<RegPoly> rp_images(const Substitution& s, std::size_t n_regs) {
    std::vector<RegPoly> out;
    out.reserve(n_regs);
    for (const auto& img : s.images) out.push_back(rp_of_expr(*img, n_regs));
    return out;
}

std::vector<RegPoly> rp_identity(std::size_t n_regs) {
    std::vector<RegPoly> out;
    for (std::size_t i = 0; i < n_regs; ++i)
        out.push_back(rp_of_expr(*RegisterExpr::var(i), n_regs));
    return out;
}

// (first then next): substitute first's images into next's.
std::vector<RegPoly> rp_compose(const std::vector<RegPoly>& first,
                                const std::vector<RegPoly>& next, std::size_t n_regs) {
    std::vector<RegPoly> out;
    out.reserve(n_regs);
    for (const auto& img : next) out.push_back(rp_substitute(img, first, n_regs));
    return out;
}

}  // namespace

RegisterExprPtr parse_register_expr(const std::string& text,
                                    const std::vector<std::string>& names) {
    return RegExprParser(text, names).parse();
}

Substitution Substitution::identity(std::size_t n_regs) {
    Substitution s;
    s.images.reserve(n_regs);
    for (std::size_t i = 0; i < n_regs; ++i) s.images.push_back(RegisterExpr::var(i));
    return s;
}

namespace {

RegisterExprPtr substitute_structural(const RegisterExpr& e,
                                      const std::vector<RegisterExprPtr>& images) {
    switch (e.kind()) {
        case RegKind::Var: return images[e.index()];
        case RegKind::Const: return RegisterExpr::constant(e.value());
        case RegKind::Add:
            return RegisterExpr::add(substitute_structural(*e.left(), images),
                                     substitute_structural(*e.right(), images));
        case RegKind::Mul:
            return RegisterExpr::mul(substitute_structural(*e.left(), images),
                                     substitute_structural(*e.right(), images));
    }
    throw DomainError("unreachable register expression kind");
}

bool expr_is_linear(const RegisterExpr& e);

}  // namespace

Substitution compose_substitutions(const Substitution& s1, const Substitution& s2) {
    if (s1.images.size() != s2.images.size())
        throw DomainError("compose_substitutions: register sets differ");
    std::size_t n = s1.images.size();
    Substitution out;
    out.images.reserve(n);
    for (const auto& img : s2.images) {
        RegisterExprPtr composed = substitute_structural(*img, s1.images);
        // Expanding a nonlinear image would duplicate registers ((x+y)*z
        // becomes x*z + y*z), so only linear images are put in canonical
        // a_1 x_1 + ... + b form.
        if (expr_is_linear(*composed)) composed = rp_to_expr(rp_of_expr(*composed, n));
        out.images.push_back(std::move(composed));
    }
    return out;
}

std::vector<Rational> eval_cra_prefix(const Cra& c, std::size_t n) {
    if (c.nu0.size() != c.n_registers()) throw DomainError("cra: nu0 size mismatch");
    std::vector<Rational> out;
    out.reserve(n);
    std::vector<Rational> val = c.nu0;
    std::size_t state = c.initial_state;
    for (std::size_t step = 0; step < n; ++step) {
        auto it = c.mu.find(state);
        if (it == c.mu.end())
            throw OutputUndefinedError("cra output undefined at state " + std::to_string(state));
        out.push_back(it->second->eval(val));
        const auto& [next, sub] = c.delta.at(state);
        std::vector<Rational> nval(c.n_registers());
        for (std::size_t i = 0; i < c.n_registers(); ++i) nval[i] = sub.images[i]->eval(val);
        val = std::move(nval);
        state = next;
    }
    return out;
}

Rational eval_cra(const Cra& c, std::size_t n) { return eval_cra_prefix(c, n + 1)[n]; }

CopylessReport check_copyless(const Cra& c) {
    for (std::size_t q = 0; q < c.n_states; ++q) {
        std::vector<std::size_t> counts(c.n_registers(), 0);
        for (const auto& img : c.delta[q].second.images) img->collect_vars(counts);
        for (std::size_t r = 0; r < counts.size(); ++r)
            if (counts[r] >= 2) return CopylessReport{false, r, q};
    }
    return CopylessReport{};
}

namespace {

bool expr_is_linear(const RegisterExpr& e) {
    switch (e.kind()) {
        case RegKind::Var:
        case RegKind::Const: return true;
        case RegKind::Add: return expr_is_linear(*e.left()) && expr_is_linear(*e.right());
        case RegKind::Mul:
            return (e.left()->kind() == RegKind::Const && expr_is_linear(*e.right())) ||
                   (e.right()->kind() == RegKind::Const && expr_is_linear(*e.left()));
    }
    return false;
}

}  // namespace

bool check_linear(const Cra& c) {
    for (const auto& [next, sub] : c.delta)
        for (const auto& img : sub.images)
            if (!expr_is_linear(*img)) return false;
    for (const auto& [state, out] : c.mu)
        if (!expr_is_linear(*out)) return false;
    return true;
}

NormalFormReport check_normal_form(const Cra& c) {
    std::size_t n = c.n_registers();
    // Edge x -> y when some image sigma(x) uses y != x; the order must place
    // x before y.
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    for (std::size_t q = 0; q < c.n_states; ++q)
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<std::size_t> counts(n, 0);
            c.delta[q].second.images[x]->collect_vars(counts);
            for (std::size_t y = 0; y < n; ++y)
                if (y != x && counts[y] > 0) edge[x][y] = true;
        }
    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (edge[x][y]) ++indeg[y];
    NormalFormReport report;
    std::vector<std::size_t> order;
    std::vector<bool> placed(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = SIZE_MAX;
        for (std::size_t x = 0; x < n; ++x)
            if (!placed[x] && indeg[x] == 0) {
                pick = x;
                break;
            }
        if (pick == SIZE_MAX) break;
        placed[pick] = true;
        order.push_back(pick);
        for (std::size_t y = 0; y < n; ++y)
            if (edge[pick][y]) --indeg[y];
    }
    if (order.size() == n) {
        report.order = std::move(order);
        return report;
    }
    // Every remaining register has an unplaced predecessor, so walking
    // predecessors must revisit a node; that closes a dependency cycle.
    std::size_t start = 0;
    while (placed[start]) ++start;
    std::vector<std::size_t> path{start};
    std::vector<std::size_t> pos(n, SIZE_MAX);
    pos[start] = 0;
    for (;;) {
        std::size_t cur = path.back(), pred = SIZE_MAX;
        for (std::size_t x = 0; x < n; ++x)
            if (!placed[x] && edge[x][cur]) {
                pred = x;
                break;
            }
        if (pos[pred] != SIZE_MAX) {
            report.cycle.assign(path.begin() + static_cast<long>(pos[pred]), path.end());
            std::reverse(report.cycle.begin(), report.cycle.end());
            return report;
        }
        pos[pred] = path.size();
        path.push_back(pred);
    }
}

// --- CCRA to PolyRat expression ------------------------------------------------

namespace {

struct LoopAnalysis {
    std::size_t n_regs;
    std::vector<RegPoly> sigma;            // composed loop substitution
    std::vector<std::vector<Rational>> w;  // w[i] = nu0' after i loop steps
    std::vector<std::optional<std::pair<std::size_t, Rational>>> stable;  // memo
    std::vector<SeqExprPtr> reg_expr;                                     // memo

    // Steps until sigma^n(x) becomes a constant, and that constant.
    std::pair<std::size_t, Rational> stabilize(std::size_t x) {
        if (stable[x]) return *stable[x];
        RegPoly p = rp_of_expr(*RegisterExpr::var(x), n_regs);
        std::size_t steps = 0;
        while (!rp_is_constant(p)) {
            p = rp_substitute(p, sigma, n_regs);
            if (++steps > n_regs + 1)
                throw DomainError("register stabilization bound exceeded (not a normal-form CCRA?)");
        }
        stable[x] = {steps, rp_constant_value(p)};
        return *stable[x];
    }

    SeqExprPtr translate_reg(std::size_t x) {
        if (reg_expr[x]) return reg_expr[x];
        const RegPoly& image = sigma[x];
        bool self = false;
        std::vector<std::size_t> others;
        {
            std::vector<bool> seen(n_regs, false);
            for (const auto& [m, c] : image)
                for (std::size_t i = 0; i < n_regs; ++i)
                    if (m[i] > 0 && !seen[i]) {
                        seen[i] = true;
                        if (i == x)
                            self = true;
                        else
                            others.push_back(i);
                    }
        }
        SeqExprPtr out;
        if (!self) {
            auto [steps, constant] = stabilize(x);
            out = SeqExpr::geo(constant, Rational(1));
            for (std::size_t i = steps; i-- > 0;) out = SeqExpr::shift(w[i][x], out);
        } else {
            // Substitute the stabilized constants of the other registers;
            // the image is multilinear in x, so this leaves a*x + b.
            std::size_t n_stab = 0;
            std::vector<RegPoly> partial = rp_identity(n_regs);
            for (std::size_t y : others) {
                auto [steps, constant] = stabilize(y);
                n_stab = std::max(n_stab, steps);
                partial[y] = rp_constant(constant, n_regs);
            }
            RegPoly affine = rp_substitute(image, partial, n_regs);
            Rational a(0), b(0);
            for (const auto& [m, c] : affine) {
                unsigned total = 0;
                for (unsigned e : m) total += e;
                if (total == 0) {
                    b = c;
                } else if (total == 1 && m[x] == 1) {
                    a = c;
                } else {
                    throw DomainError("ccra_to_expr: image not affine after stabilization");
                }
            }
            Rational u0 = w[n_stab][x];
            SeqExprPtr core;
            if (a == Rational(1)) {
                core = SeqExpr::arith(u0, b);
            } else if (a.is_zero()) {
                core = SeqExpr::shift(u0, SeqExpr::geo(b, Rational(1)));
            } else {
                Rational offset = b / (a - Rational(1));
                core = SeqExpr::sum(SeqExpr::geo(u0 + offset, a), SeqExpr::geo(-offset, Rational(1)));
            }
            for (std::size_t i = n_stab; i-- > 0;) core = SeqExpr::shift(w[i][x], core);
            out = core;
        }
        reg_expr[x] = out;
        return out;
    }

    SeqExprPtr translate_poly(const RegPoly& p) {
        if (p.empty()) return SeqExpr::geo(Rational(0), Rational(1));
        SeqExprPtr acc;
        for (const auto& [m, c] : p) {
            SeqExprPtr term;
            for (std::size_t i = 0; i < n_regs; ++i)
                for (unsigned e = 0; e < m[i]; ++e) {
                    SeqExprPtr v = translate_reg(i);
                    term = term ? SeqExpr::hadamard(term, v) : v;
                }
            if (!term) {
                term = SeqExpr::geo(c, Rational(1));
            } else if (c != Rational(1)) {
                term = SeqExpr::hadamard(SeqExpr::geo(c, Rational(1)), term);
            }
            acc = acc ? SeqExpr::sum(acc, term) : term;
        }
        return acc;
    }
};

}  // namespace

SeqExprPtr ccra_to_expr(const Cra& c) {
    CopylessReport cl = check_copyless(c);
    if (!cl.copyless) throw NotCopylessError(c.registers[*cl.witness_register]);
    NormalFormReport nf = check_normal_form(c);
    if (!nf.order) {
        std::vector<std::string> cycle;
        for (std::size_t r : nf.cycle) cycle.push_back(c.registers[r]);
        throw NoNormalFormOrderError(std::move(cycle));
    }
    std::size_t n_regs = c.n_registers();

    // The deterministic state walk is a lasso: tail then loop.
    std::vector<std::size_t> walk{c.initial_state};
    std::vector<std::size_t> seen(c.n_states, SIZE_MAX);
    seen[c.initial_state] = 0;
    std::size_t tail = 0, loop = 0;
    for (;;) {
        std::size_t next = c.delta.at(walk.back()).first;
        if (seen[next] != SIZE_MAX) {
            tail = seen[next];
            loop = walk.size() - seen[next];
            break;
        }
        seen[next] = walk.size();
        walk.push_back(next);
    }

    // Head values and the valuation after the tail.
    std::vector<Rational> head = eval_cra_prefix(c, tail);
    std::vector<Rational> nu = c.nu0;
    for (std::size_t t = 0; t < tail; ++t) {
        const Substitution& sub = c.delta.at(walk[t]).second;
        std::vector<Rational> nval(n_regs);
        for (std::size_t i = 0; i < n_regs; ++i) nval[i] = sub.images[i]->eval(nu);
        nu = std::move(nval);
    }

    LoopAnalysis an;
    an.n_regs = n_regs;
    an.sigma = rp_identity(n_regs);
    for (std::size_t j = 0; j < loop; ++j)
        an.sigma = rp_compose(an.sigma, rp_images(c.delta.at(walk[tail + j]).second, n_regs), n_regs);
    an.w.push_back(nu);
    for (std::size_t i = 0; i <= n_regs + 1; ++i) {
        std::vector<Rational> next(n_regs);
        for (std::size_t r = 0; r < n_regs; ++r) next[r] = rp_eval(an.sigma[r], an.w.back());
        an.w.push_back(std::move(next));
    }
    an.stable.assign(n_regs, std::nullopt);
    an.reg_expr.assign(n_regs, nullptr);

    // Phase sequences u[l'](n) = nu0' . sigma^n . e_l' with
    // e_l' = sigma_{k+1} .. sigma_{k+l'} . mu(p_l').
    std::vector<SeqExprPtr> phases;
    std::vector<RegPoly> prefix = rp_identity(n_regs);
    for (std::size_t lp = 0; lp < loop; ++lp) {
        std::size_t state = walk[tail + lp];
        auto it = c.mu.find(state);
        if (it == c.mu.end())
            throw OutputUndefinedError("cra output undefined at state " + std::to_string(state));
        RegPoly e = rp_substitute(rp_of_expr(*it->second, n_regs), prefix, n_regs);
        phases.push_back(an.translate_poly(e));
        prefix = rp_compose(prefix, rp_images(c.delta.at(state).second, n_regs), n_regs);
    }

    SeqExprPtr core = loop == 1 ? phases[0] : SeqExpr::shuffle(std::move(phases));
    for (std::size_t i = tail; i-- > 0;) core = SeqExpr::shift(head[i], core);
    return core;
}

// --- PolyRat expression to CCRA --------------------------------------------------

namespace {

RegisterExprPtr remap_expr(const RegisterExpr& e, std::size_t offset) {
    switch (e.kind()) {
        case RegKind::Var: return RegisterExpr::var(e.index() + offset);
        case RegKind::Const: return RegisterExpr::constant(e.value());
        case RegKind::Add:
            return RegisterExpr::add(remap_expr(*e.left(), offset), remap_expr(*e.right(), offset));
        case RegKind::Mul:
            return RegisterExpr::mul(remap_expr(*e.left(), offset), remap_expr(*e.right(), offset));
    }
    throw DomainError("unreachable register expression kind");
}

std::vector<std::string> fresh_register_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

Cra one_register_atom(const Rational& init, RegisterExprPtr image) {
    Cra c;
    c.registers = {"x0"};
    c.n_states = 1;
    c.initial_state = 0;
    c.nu0 = {init};
    Substitution s;
    s.images = {std::move(image)};
    c.delta = {{0, std::move(s)}};
    c.mu[0] = RegisterExpr::var(0);
    return c;
}

Cra fin_machine(const std::vector<Rational>& values) {
    Cra c;
    c.n_states = values.size() + 1;
    c.initial_state = 0;
    for (std::size_t i = 0; i < c.n_states; ++i) {
        std::size_t next = std::min(i + 1, c.n_states - 1);
        c.delta.emplace_back(next, Substitution::identity(0));
        c.mu[i] = RegisterExpr::constant(i < values.size() ? values[i] : Rational(0));
    }
    return c;
}

// Run two machines in lockstep on disjoint registers; only the states on the
// single reachable walk are materialized.
Cra lockstep_product(const Cra& l, const Cra& r, bool product_output) {
    std::size_t off = l.n_registers();
    Cra out;
    out.registers = fresh_register_names(l.n_registers() + r.n_registers());
    out.nu0 = l.nu0;
    out.nu0.insert(out.nu0.end(), r.nu0.begin(), r.nu0.end());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
    std::pair<std::size_t, std::size_t> cur{l.initial_state, r.initial_state};
    ids[cur] = 0;
    out.initial_state = 0;
    std::vector<std::pair<std::size_t, std::size_t>> states{cur};
    for (std::size_t qi = 0; qi < states.size(); ++qi) {
        auto [a, b] = states[qi];
        const auto& [an, as] = l.delta.at(a);
        const auto& [bn, bs] = r.delta.at(b);
        std::pair<std::size_t, std::size_t> next{an, bn};
        auto it = ids.find(next);
        if (it == ids.end()) {
            it = ids.emplace(next, states.size()).first;
            states.push_back(next);
        }
        Substitution s;
        for (const auto& img : as.images) s.images.push_back(img);
        for (const auto& img : bs.images) s.images.push_back(remap_expr(*img, off));
        out.delta.emplace_back(it->second, std::move(s));
        RegisterExprPtr lm = l.mu.at(a);
        RegisterExprPtr rm = remap_expr(*r.mu.at(b), off);
        out.mu[qi] = product_output ? RegisterExpr::mul(lm, rm) : RegisterExpr::add(lm, rm);
    }
    out.n_states = states.size();
    return out;
}

Cra shift_machine(const Rational& a, const Cra& child) {
    Cra out;
    out.registers = child.registers;
    out.nu0 = child.nu0;
    out.n_states = child.n_states + 1;
    out.initial_state = 0;
    out.delta.emplace_back(child.initial_state + 1, Substitution::identity(child.n_registers()));
    for (const auto& [next, sub] : child.delta) out.delta.emplace_back(next + 1, sub);
    out.mu[0] = RegisterExpr::constant(a);
    for (const auto& [q, e] : child.mu) out.mu[q + 1] = e;
    return out;
}

Cra shuffle_machine(const std::vector<Cra>& children) {
    std::size_t k = children.size();
    std::vector<std::size_t> reg_offset(k, 0);
    std::size_t total_regs = 0;
    for (std::size_t i = 0; i < k; ++i) {
        reg_offset[i] = total_regs;
        total_regs += children[i].n_registers();
    }
    Cra out;
    out.registers = fresh_register_names(total_regs);
    for (const auto& c : children) out.nu0.insert(out.nu0.end(), c.nu0.begin(), c.nu0.end());
    out.initial_state = 0;

    // Machine state: child states plus the phase (the child about to output).
    using Key = std::vector<std::size_t>;
    std::map<Key, std::size_t> ids;
    Key cur;
    for (const auto& c : children) cur.push_back(c.initial_state);
    cur.push_back(0);
    ids[cur] = 0;
    std::vector<Key> states{cur};
    for (std::size_t qi = 0; qi < states.size(); ++qi) {
        Key key = states[qi];
        std::size_t phase = key.back();
        const Cra& child = children[phase];
        const auto& [cn, cs] = child.delta.at(key[phase]);
        Key next = key;
        next[phase] = cn;
        next.back() = (phase + 1) % k;
        auto it = ids.find(next);
        if (it == ids.end()) {
            it = ids.emplace(next, states.size()).first;
            states.push_back(next);
        }
        Substitution s = Substitution::identity(total_regs);
        for (std::size_t r = 0; r < child.n_registers(); ++r)
            s.images[reg_offset[phase] + r] = remap_expr(*cs.images[r], reg_offset[phase]);
        out.delta.emplace_back(it->second, std::move(s));
        out.mu[qi] = remap_expr(*child.mu.at(key[phase]), reg_offset[phase]);
    }
    out.n_states = states.size();
    return out;
}

}  // namespace

Cra compile_expr_to_ccra(const SeqExpr& e) {
    switch (e.kind()) {
        case SeqKind::Geo: {
            RegisterExprPtr image =
                e.b() == Rational(1)
                    ? RegisterExpr::var(0)
                    : RegisterExpr::mul(RegisterExpr::constant(e.b()), RegisterExpr::var(0));
            return one_register_atom(e.a(), image);
        }
        case SeqKind::Arith:
            return one_register_atom(
                e.a(), RegisterExpr::add(RegisterExpr::var(0), RegisterExpr::constant(e.b())));
        case SeqKind::Fin: return fin_machine(e.values());
        case SeqKind::Sum:
            return lockstep_product(compile_expr_to_ccra(*e.children()[0]),
                                    compile_expr_to_ccra(*e.children()[1]), false);
        case SeqKind::Hadamard:
            return lockstep_product(compile_expr_to_ccra(*e.children()[0]),
                                    compile_expr_to_ccra(*e.children()[1]), true);
        case SeqKind::Shift: return shift_machine(e.a(), compile_expr_to_ccra(*e.children()[0]));
        case SeqKind::Shuffle: {
            std::vector<Cra> kids;
            kids.reserve(e.children().size());
            for (const auto& c : e.children()) kids.push_back(compile_expr_to_ccra(*c));
            return shuffle_machine(kids);
        }
        case SeqKind::Cauchy:
            throw FragmentError("Cauchy product is outside the PolyRat fragment");
        case SeqKind::Star: throw FragmentError("Kleene star is outside the PolyRat fragment");
    }
    throw DomainError("unreachable expression kind");
}

}  // namespace polyrat
