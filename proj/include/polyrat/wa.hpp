#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyrat/rational_function.hpp"
#include "polyrat/seqexpr.hpp"

namespace polyrat {

/// Weighted automaton over (Q, +, *) on a one-letter alphabet.
/// Transitions are kept sparse; a zero-weight entry is an absent edge, so the
/// support graph is exactly the edge list. A state q is initial iff I[q] != 0
/// and final iff F[q] != 0. The value at n is I^t M^n F.
struct WeightedAutomaton {
    struct Edge {
        std::size_t to;
        Rational weight;
    };

    std::size_t n_states = 0;
    std::vector<std::vector<Edge>> edges;  // edges[p] sorted by target
    std::vector<Rational> I, F;

    static WeightedAutomaton empty() { return WeightedAutomaton{}; }
    static WeightedAutomaton with_states(std::size_t n);

    void add_edge(std::size_t from, std::size_t to, const Rational& w);
    Rational weight(std::size_t from, std::size_t to) const;
};

Rational eval_matrix(const WeightedAutomaton& a, std::size_t n);
/// Terms 0..n-1 in one pass.
std::vector<Rational> eval_matrix_prefix(const WeightedAutomaton& a, std::size_t n);

/// Oracle: enumerate every accepting run of length n in the support graph and
/// sum the run values. Throws BudgetExceededError past `budget` run extensions.
Rational eval_runs(const WeightedAutomaton& a, std::size_t n, std::size_t budget = 5'000'000);

/// Drop states that lie on no initial-to-final support path. Preserves the
/// recognised sequence; may return the empty automaton.
WeightedAutomaton trim(const WeightedAutomaton& a);

/// Number of accepting runs of length n, by dynamic programming.
Integer count_runs(const WeightedAutomaton& a, std::size_t n);

enum class AmbiguityClass { Deterministic, FinitelyAmbiguous, PolynomiallyAmbiguous, ExponentiallyAmbiguous };

struct AmbiguityReport {
    AmbiguityClass cls;
    unsigned long k = 0;       // exact bound for the finitely ambiguous class
    unsigned long degree = 0;  // polynomial degree, >= 1
    /// Exponential witness: a trimmed state lying on two cycles.
    std::optional<std::size_t> witness_state;
    /// Polynomial witness: trimmed path through the maximal number of cycles.
    std::vector<std::size_t> witness_path;

    std::string describe() const;
};

/// Classify the ambiguity of trim(a). Deterministic: at most one initial
/// state, all out-degrees <= 1. Exponential: some state on two cycles.
/// Otherwise every SCC is a simple cycle or a singleton and the degree is
/// (max cycles on an initial-to-final path) - 1; finite when that max is <= 1,
/// with the exact k taken over one period past the preamble.
AmbiguityReport classify_ambiguity(const WeightedAutomaton& a);

/// Compile a PolyRat-fragment expression: atom automata plus union, tensor
/// product, shift and stretch-interleave constructions. The result is always
/// polynomially ambiguous and agrees with eval_seqexpr term-wise.
/// Throws FragmentError on Cauchy or star nodes.
WeightedAutomaton compile_expr_to_wa(const SeqExpr& e);

/// A simple path q_0 .. q_{k-1} whose states each carry at most one cycle,
/// flattened to (weight product, length). Unique initial state q_0 with
/// weight initial_weight; unique final state q_{k-1} with final weight 1.
struct ChainedLoop {
    struct Loop {
        Rational weight;      // product of the cycle weights
        unsigned length = 1;  // cycle length
    };

    Rational initial_weight;
    std::vector<std::size_t> path_states;       // trimmed-automaton state ids
    std::vector<Rational> path_weights;         // edge i -> i+1
    std::vector<std::optional<Loop>> loops;     // one slot per path state
};

/// Decompose a polynomially ambiguous automaton into an equivalent union of
/// chained loops (run multisets in value-preserving bijection). A path state
/// carries its SCC cycle only when no earlier path state shares the SCC;
/// otherwise iterating it would revisit an earlier path state and double-count
/// runs. Throws ClassMismatchError on exponentially ambiguous input and
/// BudgetExceededError when the enumeration exceeds `max_loops`.
std::vector<ChainedLoop> decompose_chained_loops(const WeightedAutomaton& a,
                                                 std::size_t max_loops = 200'000);

/// S = initial_weight * prod_i (w_i x) * prod_loops 1/(1 - lambda x^ell).
RationalFunction chained_loop_series(const ChainedLoop& c);

/// Reduced generating function of the automaton: the minimal recurrence is
/// fitted from the first 2*n_states + 2 terms (Cayley-Hamilton bounds the
/// order by n_states), then P = (prefix * Q) truncated.
RationalFunction wa_series(const WeightedAutomaton& a);

/// Exact equivalence: the difference satisfies a recurrence of order at most
/// n_A + n_B, so comparing that many terms decides. Cross-checked against
/// wa_series equality; disagreement raises CrossCheckError.
bool equiv(const WeightedAutomaton& a, const WeightedAutomaton& b);

/// Deterministic automaton to an expression: shuffle of Geo atoms with the
/// common loop ratio, then one shift per tail value.
SeqExprPtr lasso_to_expr(const WeightedAutomaton& a);

/// Finitely ambiguous automaton to an expression: sum over the chained-loop
/// decomposition (each chained loop is a lasso here).
SeqExprPtr finwa_to_expr(const WeightedAutomaton& a);

}  // namespace polyrat
