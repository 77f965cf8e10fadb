#include "polyrat/wa.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "polyrat/errors.hpp"

namespace polyrat {

WeightedAutomaton WeightedAutomaton::with_states(std::size_t n) {
    WeightedAutomaton a;
    a.n_states = n;
    a.edges.resize(n);
    a.I.assign(n, Rational(0));
    a.F.assign(n, Rational(0));
    return a;
}

void WeightedAutomaton::add_edge(std::size_t from, std::size_t to, const Rational& w) {
    if (w.is_zero()) return;
    auto& row = edges[from];
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const Edge& e, std::size_t t) { return e.to < t; });
    if (it != row.end() && it->to == to) {
        it->weight += w;
        if (it->weight.is_zero()) row.erase(it);
    } else {
        row.insert(it, Edge{to, w});
    }
}

Rational WeightedAutomaton::weight(std::size_t from, std::size_t to) const {
    for (const auto& e : edges[from])
        if (e.to == to) return e.weight;
    return Rational(0);
}

std::vector<Rational> eval_matrix_prefix(const WeightedAutomaton& a, std::size_t n) {
    std::vector<Rational> out;
    out.reserve(n);
    std::vector<Rational> v = a.I;
    for (std::size_t step = 0; step < n; ++step) {
        Rational val(0);
        for (std::size_t q = 0; q < a.n_states; ++q)
            if (!v[q].is_zero() && !a.F[q].is_zero()) val += v[q] * a.F[q];
        out.push_back(val);
        if (step + 1 == n) break;
        std::vector<Rational> next(a.n_states, Rational(0));
        for (std::size_t p = 0; p < a.n_states; ++p) {
            if (v[p].is_zero()) continue;
            for (const auto& e : a.edges[p]) next[e.to] += v[p] * e.weight;
        }
        v = std::move(next);
    }
    return out;
}

Rational eval_matrix(const WeightedAutomaton& a, std::size_t n) {
    auto prefix = eval_matrix_prefix(a, n + 1);
    return prefix[n];
}

namespace {

void runs_dfs(const WeightedAutomaton& a, std::size_t state, std::size_t remaining,
              const Rational& acc, Rational& total, std::size_t& steps, std::size_t budget) {
    if (++steps > budget) throw BudgetExceededError("eval_runs exceeded its enumeration budget");
    if (remaining == 0) {
        if (!a.F[state].is_zero()) total += acc * a.F[state];
        return;
    }
    for (const auto& e : a.edges[state])
        runs_dfs(a, e.to, remaining - 1, acc * e.weight, total, steps, budget);
}

}  // namespace

Rational eval_runs(const WeightedAutomaton& a, std::size_t n, std::size_t budget) {
    Rational total(0);
    std::size_t steps = 0;
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.I[q].is_zero()) runs_dfs(a, q, n, a.I[q], total, steps, budget);
    return total;
}

WeightedAutomaton trim(const WeightedAutomaton& a) {
    std::vector<bool> fwd(a.n_states, false), bwd(a.n_states, false);
    std::vector<std::size_t> stack;
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.I[q].is_zero()) {
            fwd[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        std::size_t p = stack.back();
        stack.pop_back();
        for (const auto& e : a.edges[p])
            if (!fwd[e.to]) {
                fwd[e.to] = true;
                stack.push_back(e.to);
            }
    }
    std::vector<std::vector<std::size_t>> rev(a.n_states);
    for (std::size_t p = 0; p < a.n_states; ++p)
        for (const auto& e : a.edges[p]) rev[e.to].push_back(p);
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.F[q].is_zero()) {
            bwd[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        std::size_t p = stack.back();
        stack.pop_back();
        for (std::size_t r : rev[p])
            if (!bwd[r]) {
                bwd[r] = true;
                stack.push_back(r);
            }
    }
    std::vector<std::size_t> remap(a.n_states, SIZE_MAX);
    std::size_t kept = 0;
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (fwd[q] && bwd[q]) remap[q] = kept++;
    WeightedAutomaton out = WeightedAutomaton::with_states(kept);
    for (std::size_t q = 0; q < a.n_states; ++q) {
        if (remap[q] == SIZE_MAX) continue;
        out.I[remap[q]] = a.I[q];
        out.F[remap[q]] = a.F[q];
        for (const auto& e : a.edges[q])
            if (remap[e.to] != SIZE_MAX) out.add_edge(remap[q], remap[e.to], e.weight);
    }
    return out;
}

Integer count_runs(const WeightedAutomaton& a, std::size_t n) {
    std::vector<Integer> c(a.n_states, Integer(0));
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.I[q].is_zero()) c[q] = 1;
    for (std::size_t step = 0; step < n; ++step) {
        std::vector<Integer> next(a.n_states, Integer(0));
        for (std::size_t p = 0; p < a.n_states; ++p) {
            if (c[p] == 0) continue;
            for (const auto& e : a.edges[p]) next[e.to] += c[p];
        }
        c = std::move(next);
    }
    Integer total(0);
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.F[q].is_zero()) total += c[q];
    return total;
}

// --- SCC analysis -------------------------------------------------------------

namespace {

struct SccInfo {
    std::vector<std::size_t> comp;                  // state -> component id
    std::vector<std::vector<std::size_t>> members;  // component id -> states
};

// Iterative Tarjan; components are emitted sinks-first, so for an edge u -> v
// across components, comp[v] < comp[u].
SccInfo scc_decompose(const WeightedAutomaton& a) {
    SccInfo info;
    info.comp.assign(a.n_states, SIZE_MAX);
    std::vector<std::size_t> index(a.n_states, SIZE_MAX), low(a.n_states, 0);
    std::vector<bool> on_stack(a.n_states, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;

    struct Frame {
        std::size_t state;
        std::size_t edge_pos;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < a.n_states; ++root) {
        if (index[root] != SIZE_MAX) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge_pos < a.edges[f.state].size()) {
                std::size_t w = a.edges[f.state][f.edge_pos++].to;
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.state] = std::min(low[f.state], index[w]);
                }
            } else {
                if (low[f.state] == index[f.state]) {
                    std::size_t cid = info.members.size();
                    info.members.emplace_back();
                    for (;;) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        info.comp[w] = cid;
                        info.members[cid].push_back(w);
                        if (w == f.state) break;
                    }
                    std::sort(info.members[cid].begin(), info.members[cid].end());
                }
                std::size_t done = f.state;
                call.pop_back();
                if (!call.empty())
                    low[call.back().state] = std::min(low[call.back().state], low[done]);
            }
        }
    }
    return info;
}

struct CycleStructure {
    SccInfo scc;
    std::vector<bool> cyclic;              // per component
    std::vector<Rational> cycle_weight;    // per component, cyclic only
    std::vector<unsigned> cycle_length;    // per component, cyclic only
    std::optional<std::size_t> two_cycle_state;  // a state with 2 in-component successors
};

CycleStructure analyze_cycles(const WeightedAutomaton& a) {
    CycleStructure cs{scc_decompose(a), {}, {}, {}, std::nullopt};
    std::size_t n_comps = cs.scc.members.size();
    cs.cyclic.assign(n_comps, false);
    cs.cycle_weight.assign(n_comps, Rational(1));
    cs.cycle_length.assign(n_comps, 0);
    for (std::size_t c = 0; c < n_comps; ++c) {
        const auto& states = cs.scc.members[c];
        bool cyc = states.size() > 1;
        if (states.size() == 1 && !a.weight(states[0], states[0]).is_zero()) cyc = true;
        cs.cyclic[c] = cyc;
        if (!cyc) continue;
        // A state with two successors inside its component lies on two cycles.
        Rational product(1);
        for (std::size_t q : states) {
            std::size_t inside = 0;
            for (const auto& e : a.edges[q])
                if (cs.scc.comp[e.to] == c) {
                    ++inside;
                    product *= e.weight;
                }
            if (inside >= 2 && !cs.two_cycle_state) cs.two_cycle_state = q;
        }
        // With all inside-degrees 1, the component is one simple cycle
        // covering all its states; the product above is the cycle weight.
        cs.cycle_weight[c] = product;
        cs.cycle_length[c] = static_cast<unsigned>(states.size());
    }
    return cs;
}

}  // namespace

std::string AmbiguityReport::describe() const {
    switch (cls) {
        case AmbiguityClass::Deterministic: return "deterministic";
        case AmbiguityClass::FinitelyAmbiguous:
            return "finitely ambiguous, k = " + std::to_string(k);
        case AmbiguityClass::PolynomiallyAmbiguous:
            return "polynomially ambiguous, degree " + std::to_string(degree);
        case AmbiguityClass::ExponentiallyAmbiguous: return "exponentially ambiguous";
    }
    return "unknown";
}

AmbiguityReport classify_ambiguity(const WeightedAutomaton& input) {
    WeightedAutomaton a = trim(input);
    AmbiguityReport report{AmbiguityClass::Deterministic, 0, 0, std::nullopt, {}};

    std::size_t initials = 0;
    bool branching = false;
    for (std::size_t q = 0; q < a.n_states; ++q) {
        if (!a.I[q].is_zero()) ++initials;
        if (a.edges[q].size() > 1) branching = true;
    }
    if (initials <= 1 && !branching) return report;

    CycleStructure cs = analyze_cycles(a);
    if (cs.two_cycle_state) {
        report.cls = AmbiguityClass::ExponentiallyAmbiguous;
        report.witness_state = cs.two_cycle_state;
        return report;
    }

    // Longest initial-to-final path in the condensation, counting cyclic
    // components. Components are sinks-first, so process ids descending.
    std::size_t n_comps = cs.scc.members.size();
    std::vector<long> best(n_comps, -1);
    std::vector<long> parent(n_comps, -1);  // predecessor component, -1 = path start
    std::vector<bool> has_initial(n_comps, false), has_final(n_comps, false);
    for (std::size_t q = 0; q < a.n_states; ++q) {
        if (!a.I[q].is_zero()) has_initial[cs.scc.comp[q]] = true;
        if (!a.F[q].is_zero()) has_final[cs.scc.comp[q]] = true;
    }
    for (std::size_t c = n_comps; c-- > 0;) {
        if (has_initial[c]) {
            long start = cs.cyclic[c] ? 1 : 0;
            if (start > best[c]) {
                best[c] = start;
                parent[c] = -1;
            }
        }
        if (best[c] < 0) continue;
        for (std::size_t q : cs.scc.members[c])
            for (const auto& e : a.edges[q]) {
                std::size_t d = cs.scc.comp[e.to];
                if (d == c) continue;
                long cand = best[c] + (cs.cyclic[d] ? 1 : 0);
                if (cand > best[d]) {
                    best[d] = cand;
                    parent[d] = static_cast<long>(c);
                }
            }
    }
    long max_cycles = 0;
    long best_comp = -1;
    for (std::size_t c = 0; c < n_comps; ++c)
        if (has_final[c] && best[c] > max_cycles) {
            max_cycles = best[c];
            best_comp = static_cast<long>(c);
        }

    if (max_cycles >= 2) {
        report.cls = AmbiguityClass::PolynomiallyAmbiguous;
        report.degree = static_cast<unsigned long>(max_cycles - 1);
        for (long c = best_comp; c >= 0; c = parent[static_cast<std::size_t>(c)])
            report.witness_path.push_back(cs.scc.members[static_cast<std::size_t>(c)].front());
        std::reverse(report.witness_path.begin(), report.witness_path.end());
        return report;
    }

    // Finitely ambiguous: run counts are eventually periodic with period
    // lcm(cycle lengths) and preamble at most the state count; the exact k is
    // the maximum over the preamble plus one period.
    report.cls = AmbiguityClass::FinitelyAmbiguous;
    unsigned long period = 1;
    for (std::size_t c = 0; c < n_comps; ++c)
        if (cs.cyclic[c]) period = std::lcm(period, static_cast<unsigned long>(cs.cycle_length[c]));
    unsigned long preamble = a.n_states + 1;
    Integer k(0);
    for (unsigned long n = 0; n < preamble + period; ++n) k = std::max(k, count_runs(a, n));
    report.k = k.get_ui();
    return report;
}

// --- compilation of PolyRat expressions ---------------------------------------

namespace {

WeightedAutomaton wa_union(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    WeightedAutomaton out = WeightedAutomaton::with_states(a.n_states + b.n_states);
    for (std::size_t q = 0; q < a.n_states; ++q) {
        out.I[q] = a.I[q];
        out.F[q] = a.F[q];
        for (const auto& e : a.edges[q]) out.add_edge(q, e.to, e.weight);
    }
    for (std::size_t q = 0; q < b.n_states; ++q) {
        out.I[a.n_states + q] = b.I[q];
        out.F[a.n_states + q] = b.F[q];
        for (const auto& e : b.edges[q]) out.add_edge(a.n_states + q, a.n_states + e.to, e.weight);
    }
    return out;
}

WeightedAutomaton wa_tensor(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    WeightedAutomaton out = WeightedAutomaton::with_states(a.n_states * b.n_states);
    auto id = [&](std::size_t p, std::size_t q) { return p * b.n_states + q; };
    for (std::size_t p = 0; p < a.n_states; ++p)
        for (std::size_t q = 0; q < b.n_states; ++q) {
            out.I[id(p, q)] = a.I[p] * b.I[q];
            out.F[id(p, q)] = a.F[p] * b.F[q];
        }
    for (std::size_t p = 0; p < a.n_states; ++p)
        for (const auto& ea : a.edges[p])
            for (std::size_t q = 0; q < b.n_states; ++q)
                for (const auto& eb : b.edges[q])
                    out.add_edge(id(p, q), id(ea.to, eb.to), ea.weight * eb.weight);
    return out;
}

// New initial state wired to the old initial states; for a != 0 one extra
// state that is both initial and final carries the head value.
WeightedAutomaton wa_shift(const Rational& a, const WeightedAutomaton& child) {
    bool head = !a.is_zero();
    WeightedAutomaton out = WeightedAutomaton::with_states(child.n_states + 1 + (head ? 1 : 0));
    out.I[0] = Rational(1);
    for (std::size_t q = 0; q < child.n_states; ++q) {
        out.F[1 + q] = child.F[q];
        if (!child.I[q].is_zero()) out.add_edge(0, 1 + q, child.I[q]);
        for (const auto& e : child.edges[q]) out.add_edge(1 + q, 1 + e.to, e.weight);
    }
    if (head) {
        std::size_t s = child.n_states + 1;
        out.I[s] = Rational(1);
        out.F[s] = a;
    }
    return out;
}

// A[k]: elements separated by k-1 zeros. States (q, i); real transitions go
// from layer 0 to layer 1, waiting transitions cycle back to layer 0.
WeightedAutomaton wa_stretch(const WeightedAutomaton& a, std::size_t k) {
    WeightedAutomaton out = WeightedAutomaton::with_states(a.n_states * k);
    auto id = [&](std::size_t q, std::size_t layer) { return q * k + layer; };
    for (std::size_t q = 0; q < a.n_states; ++q) {
        out.I[id(q, 0)] = a.I[q];
        out.F[id(q, 0)] = a.F[q];
        for (const auto& e : a.edges[q]) out.add_edge(id(q, 0), id(e.to, 1 % k), e.weight);
        for (std::size_t layer = 1; layer < k; ++layer)
            out.add_edge(id(q, layer), id(q, (layer + 1) % k), Rational(1));
    }
    return out;
}

WeightedAutomaton compile_rec(const SeqExpr& e) {
    switch (e.kind()) {
        case SeqKind::Arith: {
            // Path state feeding a counting state: value a + n*b.
            WeightedAutomaton a = WeightedAutomaton::with_states(2);
            a.I[0] = Rational(1);
            a.F[0] = e.a();
            a.F[1] = e.b();
            a.add_edge(0, 0, Rational(1));
            a.add_edge(0, 1, Rational(1));
            a.add_edge(1, 1, Rational(1));
            return trim(a);
        }
        case SeqKind::Geo: {
            WeightedAutomaton a = WeightedAutomaton::with_states(1);
            a.I[0] = e.a();
            a.F[0] = Rational(1);
            a.add_edge(0, 0, e.b());
            return trim(a);
        }
        case SeqKind::Fin: {
            std::size_t m = e.values().size();
            WeightedAutomaton a = WeightedAutomaton::with_states(m);
            a.I[0] = Rational(1);
            for (std::size_t i = 0; i < m; ++i) {
                a.F[i] = e.values()[i];
                if (i + 1 < m) a.add_edge(i, i + 1, Rational(1));
            }
            return trim(a);
        }
        case SeqKind::Sum:
            return wa_union(compile_rec(*e.children()[0]), compile_rec(*e.children()[1]));
        case SeqKind::Hadamard:
            return trim(
                wa_tensor(compile_rec(*e.children()[0]), compile_rec(*e.children()[1])));
        case SeqKind::Shift:
            return wa_shift(e.a(), compile_rec(*e.children()[0]));
        case SeqKind::Shuffle: {
            std::size_t k = e.children().size();
            WeightedAutomaton acc;
            for (std::size_t i = 0; i < k; ++i) {
                WeightedAutomaton part = wa_stretch(compile_rec(*e.children()[i]), k);
                for (std::size_t s = 0; s < i; ++s) part = wa_shift(Rational(0), part);
                part = trim(part);
                acc = i == 0 ? part : wa_union(acc, part);
            }
            return acc;
        }
        case SeqKind::Cauchy:
            throw FragmentError("Cauchy product is outside the PolyRat fragment");
        case SeqKind::Star:
            throw FragmentError("Kleene star is outside the PolyRat fragment");
    }
    throw DomainError("unreachable expression kind");
}

}  // namespace

WeightedAutomaton compile_expr_to_wa(const SeqExpr& e) { return compile_rec(e); }

// --- chained loops ------------------------------------------------------------

namespace {

struct DecomposeState {
    const WeightedAutomaton& a;
    const CycleStructure& cs;
    std::vector<ChainedLoop>& out;
    std::vector<bool> on_path;
    std::vector<std::size_t> path;
    std::vector<Rational> weights;        // edge weights along the path
    std::vector<bool> carried;            // whether path state i carries its cycle
    std::vector<std::size_t> comp_count;  // path states per component
    std::size_t budget_steps = 0;
    std::size_t max_loops;

    void emit() {
        if (out.size() >= max_loops)
            throw BudgetExceededError("chained-loop decomposition exceeded its budget");
        ChainedLoop c;
        c.initial_weight = a.I[path.front()] * a.F[path.back()];
        c.path_states = path;
        c.path_weights = weights;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (carried[i]) {
                std::size_t comp = cs.scc.comp[path[i]];
                c.loops.push_back(
                    ChainedLoop::Loop{cs.cycle_weight[comp], cs.cycle_length[comp]});
            } else {
                c.loops.push_back(std::nullopt);
            }
        }
        out.push_back(std::move(c));
    }

    void dfs(std::size_t q) {
        if (++budget_steps > 32 * max_loops)
            throw BudgetExceededError("chained-loop decomposition exceeded its budget");
        std::size_t comp = cs.scc.comp[q];
        bool carry = cs.cyclic[comp] && comp_count[comp] == 0;
        on_path[q] = true;
        path.push_back(q);
        carried.push_back(carry);
        ++comp_count[comp];
        if (!a.F[q].is_zero()) emit();
        for (const auto& e : a.edges[q]) {
            if (on_path[e.to]) continue;
            weights.push_back(e.weight);
            dfs(e.to);
            weights.pop_back();
        }
        --comp_count[comp];
        carried.pop_back();
        path.pop_back();
        on_path[q] = false;
    }
};

}  // namespace

std::vector<ChainedLoop> decompose_chained_loops(const WeightedAutomaton& input,
                                                 std::size_t max_loops) {
    WeightedAutomaton a = trim(input);
    CycleStructure cs = analyze_cycles(a);
    if (cs.two_cycle_state)
        throw ClassMismatchError("exponentially ambiguous automaton (state " +
                                 std::to_string(*cs.two_cycle_state) + " lies on two cycles)");
    std::vector<ChainedLoop> out;
    DecomposeState st{a, cs, out, std::vector<bool>(a.n_states, false), {}, {}, {},
                      std::vector<std::size_t>(cs.scc.members.size(), 0), 0, max_loops};
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.I[q].is_zero()) st.dfs(q);
    return out;
}

RationalFunction chained_loop_series(const ChainedLoop& c) {
    Rational coeff = c.initial_weight;
    for (const auto& w : c.path_weights) coeff *= w;
    Polynomial num = Polynomial::monomial(coeff, c.path_weights.size());
    Polynomial den = Polynomial::one();
    for (const auto& loop : c.loops)
        if (loop) den = den * Polynomial::binomial(loop->weight, loop->length);
    return RationalFunction(num, den);
}

// --- generating function and equivalence --------------------------------------

namespace {

// Minimal-recurrence fit from the first 2*n_states + 2 terms; the sequence
// satisfies a recurrence of order <= n_states (Cayley-Hamilton), so this
// prefix pins the minimal one.
RationalFunction wa_series_from_terms(const WeightedAutomaton& a) {
    std::size_t n_terms = 2 * a.n_states + 2;
    std::vector<Rational> u = eval_matrix_prefix(a, n_terms);
    std::vector<Rational> c{Rational(1)}, b{Rational(1)};
    std::size_t len = 0, m = 1;
    Rational last_disc(1);
    for (std::size_t n = 0; n < n_terms; ++n) {
        Rational disc = u[n];
        for (std::size_t i = 1; i <= len && i < c.size(); ++i) disc += c[i] * u[n - i];
        if (disc.is_zero()) {
            ++m;
        } else if (2 * len <= n) {
            std::vector<Rational> t = c;
            Rational f = disc / last_disc;
            if (c.size() < b.size() + m) c.resize(b.size() + m, Rational(0));
            for (std::size_t i = 0; i < b.size(); ++i) c[i + m] -= f * b[i];
            len = n + 1 - len;
            b = std::move(t);
            last_disc = disc;
            m = 1;
        } else {
            Rational f = disc / last_disc;
            if (c.size() < b.size() + m) c.resize(b.size() + m, Rational(0));
            for (std::size_t i = 0; i < b.size(); ++i) c[i + m] -= f * b[i];
            ++m;
        }
    }
    Polynomial den{std::vector<Rational>(c)};
    std::vector<Rational> num_coeffs;
    for (std::size_t t = 0; t < len; ++t) {
        Rational acc(0);
        for (std::size_t i = 0; i < c.size() && i <= t; ++i) acc += c[i] * u[t - i];
        num_coeffs.push_back(acc);
    }
    Polynomial num{std::vector<Rational>(num_coeffs)};
    // The fitted recurrence must reproduce the whole prefix.
    for (std::size_t t = len; t < n_terms; ++t) {
        Rational acc(0);
        for (std::size_t i = 0; i < c.size() && i <= t; ++i) acc += c[i] * u[t - i];
        if (!acc.is_zero())
            throw CrossCheckError("wa_series: recurrence fit does not reproduce the prefix");
    }
    return RationalFunction(num, den);
}

}  // namespace

RationalFunction wa_series(const WeightedAutomaton& a) {
    // Polynomially ambiguous automata get the structural route: the sum of
    // the chained-loop series. Exponentially ambiguous ones are desk-scale
    // and go through the term fit; fitting a large automaton is ruinous
    // because the term magnitudes grow exponentially.
    WeightedAutomaton t = trim(a);
    CycleStructure cs = analyze_cycles(t);
    if (cs.two_cycle_state) return wa_series_from_terms(t);
    RationalFunction total;
    for (const ChainedLoop& c : decompose_chained_loops(t))
        total = total + chained_loop_series(c);
    return total;
}

bool equiv(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    std::size_t terms = a.n_states + b.n_states;
    auto ua = eval_matrix_prefix(a, terms);
    auto ub = eval_matrix_prefix(b, terms);
    bool by_terms = ua == ub;
    bool by_series = wa_series(a) == wa_series(b);
    if (by_terms != by_series)
        throw CrossCheckError("equiv: term comparison and series comparison disagree");
    return by_terms;
}

// --- expression extraction for the deterministic and finite classes -----------

SeqExprPtr lasso_to_expr(const WeightedAutomaton& input) {
    WeightedAutomaton a = trim(input);
    AmbiguityReport report = classify_ambiguity(a);
    if (report.cls != AmbiguityClass::Deterministic)
        throw ClassMismatchError("lasso_to_expr requires a deterministic automaton, got " +
                                 report.describe());
    if (a.n_states == 0) return SeqExpr::geo(Rational(0), Rational(1));

    std::size_t start = SIZE_MAX;
    for (std::size_t q = 0; q < a.n_states; ++q)
        if (!a.I[q].is_zero()) start = q;
    // Walk the unique run; the trimmed deterministic support is a lasso.
    std::vector<std::size_t> walk{start};
    std::vector<std::size_t> seen(a.n_states, SIZE_MAX);
    seen[start] = 0;
    std::vector<Rational> values;
    Rational acc = a.I[start];
    std::size_t tail = 0, cycle_len = 0;
    for (;;) {
        std::size_t q = walk.back();
        values.push_back(acc * a.F[q]);
        if (a.edges[q].empty()) {
            tail = walk.size();
            break;
        }
        const auto& e = a.edges[q].front();
        acc *= e.weight;
        if (seen[e.to] != SIZE_MAX) {
            tail = seen[e.to];
            cycle_len = walk.size() - tail;
            break;
        }
        seen[e.to] = walk.size();
        walk.push_back(e.to);
    }

    SeqExprPtr core;
    if (cycle_len == 0) {
        core = SeqExpr::geo(Rational(0), Rational(1));
    } else {
        Rational lambda(1);
        for (std::size_t i = tail; i < tail + cycle_len; ++i) {
            std::size_t q = walk[i];
            std::size_t nxt = walk[i + 1 == tail + cycle_len ? tail : i + 1];
            lambda *= a.weight(q, nxt);
        }
        std::vector<SeqExprPtr> kids;
        for (std::size_t i = 0; i < cycle_len; ++i)
            kids.push_back(SeqExpr::geo(values[tail + i], lambda));
        core = cycle_len == 1 ? kids[0] : SeqExpr::shuffle(std::move(kids));
    }
    for (std::size_t i = tail; i-- > 0;) core = SeqExpr::shift(values[i], core);
    return core;
}

SeqExprPtr finwa_to_expr(const WeightedAutomaton& input) {
    WeightedAutomaton a = trim(input);
    AmbiguityReport report = classify_ambiguity(a);
    if (report.cls != AmbiguityClass::Deterministic &&
        report.cls != AmbiguityClass::FinitelyAmbiguous)
        throw ClassMismatchError("finwa_to_expr requires a finitely ambiguous automaton, got " +
                                 report.describe());
    std::vector<ChainedLoop> loops = decompose_chained_loops(a);
    SeqExprPtr acc;
    for (const auto& c : loops) {
        Rational head = c.initial_weight;
        for (const auto& w : c.path_weights) head *= w;
        std::optional<ChainedLoop::Loop> the_loop;
        for (const auto& l : c.loops)
            if (l) {
                if (the_loop)
                    throw ClassMismatchError("finwa_to_expr: chained loop with two cycles");
                the_loop = l;
            }
        SeqExprPtr part;
        if (!the_loop) {
            part = SeqExpr::geo(head, Rational(0));  // single spike at the path length
        } else {
            std::vector<SeqExprPtr> kids{SeqExpr::geo(head, the_loop->weight)};
            for (unsigned i = 1; i < the_loop->length; ++i)
                kids.push_back(SeqExpr::geo(Rational(0), the_loop->weight));
            part = kids.size() == 1 ? kids[0] : SeqExpr::shuffle(std::move(kids));
        }
        for (std::size_t i = 0; i < c.path_weights.size(); ++i)
            part = SeqExpr::shift(Rational(0), part);
        acc = acc ? SeqExpr::sum(acc, part) : part;
    }
    return acc ? acc : SeqExpr::geo(Rational(0), Rational(1));
}

}  // namespace polyrat
