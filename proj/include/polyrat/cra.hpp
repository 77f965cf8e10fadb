#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyrat/seqexpr.hpp"

namespace polyrat {

enum class RegKind { Var, Const, Add, Mul };

class RegisterExpr;
using RegisterExprPtr = std::shared_ptr<const RegisterExpr>;

/// Register expression e ::= x | r | e+e | e*e. Variables are indices into
/// the owning machine's register list.
class RegisterExpr {
public:
    static RegisterExprPtr var(std::size_t index);
    static RegisterExprPtr constant(Rational value);
    static RegisterExprPtr add(RegisterExprPtr l, RegisterExprPtr r);
    static RegisterExprPtr mul(RegisterExprPtr l, RegisterExprPtr r);

    RegKind kind() const { return kind_; }
    std::size_t index() const { return index_; }
    const Rational& value() const { return value_; }
    const RegisterExprPtr& left() const { return children_[0]; }
    const RegisterExprPtr& right() const { return children_[1]; }

    Rational eval(const std::vector<Rational>& valuation) const;
    void collect_vars(std::vector<std::size_t>& counts) const;  // with multiplicity

private:
    RegisterExpr() = default;

    RegKind kind_ = RegKind::Const;
    std::size_t index_ = 0;
    Rational value_;
    RegisterExprPtr children_[2];
};

/// Infix form with '+', '*' and rationals "a/b", e.g. "2*x+1".
std::string print_register_expr(const RegisterExpr& e, const std::vector<std::string>& names);
RegisterExprPtr parse_register_expr(const std::string& text,
                                    const std::vector<std::string>& names);

/// Total substitution: one image per register, index-aligned.
struct Substitution {
    std::vector<RegisterExprPtr> images;

    static Substitution identity(std::size_t n_regs);
};

/// (s1 then s2): images of s2 with every register replaced by its s1 image,
/// expanded to canonical form. Satisfies nu . compose(s1, s2) = (nu . s1) . s2.
Substitution compose_substitutions(const Substitution& s1, const Substitution& s2);

/// Cost-register automaton on a one-letter alphabet: deterministic states,
/// blind register updates, partial output map. Value at n is
/// nu0 . sigma_1 . ... . sigma_n . mu(q_n).
struct Cra {
    std::vector<std::string> registers;
    std::size_t n_states = 0;
    std::size_t initial_state = 0;
    std::vector<Rational> nu0;                            // per register
    std::vector<std::pair<std::size_t, Substitution>> delta;  // per state
    std::map<std::size_t, RegisterExprPtr> mu;            // partial

    std::size_t n_registers() const { return registers.size(); }
};

Rational eval_cra(const Cra& c, std::size_t n);
std::vector<Rational> eval_cra_prefix(const Cra& c, std::size_t n);

struct CopylessReport {
    bool copyless = true;
    std::optional<std::size_t> witness_register;
    std::optional<std::size_t> witness_state;
};

/// A substitution is copyless when each register occurs at most once across
/// all of its images; the machine is copyless when every transition is.
CopylessReport check_copyless(const Cra& c);

/// Linear: every multiplication has a constant operand, in transition images
/// and in the output expressions.
bool check_linear(const Cra& c);

struct NormalFormReport {
    std::optional<std::vector<std::size_t>> order;  // registers, ascending
    std::vector<std::size_t> cycle;                 // dependency cycle witness
};

/// One register order valid for all substitutions at once: sigma(x) may only
/// use registers >= x (self-use allowed). Found by topological sort of the
/// cross-register dependency graph.
NormalFormReport check_normal_form(const Cra& c);

/// Copyless normal-form CRA to a PolyRat expression, by the lasso run shape:
/// tail values are shifted onto a shuffle of the per-phase sequences
/// nu0' . sigma^n . e, each translated by structural recursion with register
/// stabilization (registers not using themselves become constants after at
/// most #registers steps; self-using registers reduce to a*x + b).
/// Throws NotCopylessError / NoNormalFormOrderError / OutputUndefinedError.
SeqExprPtr ccra_to_expr(const Cra& c);

/// Compile a PolyRat expression to a copyless CRA (atoms use one register;
/// sums and products run children in lockstep on disjoint registers; shuffle
/// advances child i only on steps congruent to i). The machine is trimmed to
/// the reachable state walk and always passes check_copyless.
Cra compile_expr_to_ccra(const SeqExpr& e);

}  // namespace polyrat
