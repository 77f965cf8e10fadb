#pragma once

#include <string>

#include "polyrat/formats.hpp"

namespace polyrat {

enum class ReprKind { Expr, Wa, Ccra, Lrs, Series };

ReprKind repr_kind_from_name(const std::string& name);  // expr|wa|ccra|lrs|series
std::string repr_kind_name(ReprKind kind);

/// Tagged union over the five representations.
struct Representation {
    ReprKind kind = ReprKind::Expr;
    SeqExprPtr expr;
    WeightedAutomaton wa;
    Cra cra;
    Lrs lrs;
    RationalFunction series;

    static Representation of(SeqExprPtr e);
    static Representation of(WeightedAutomaton a);
    static Representation of(Cra c);
    static Representation of(Lrs l);
    static Representation of(RationalFunction f);
};

Representation load_representation(ReprKind kind, const std::string& text);

/// Deterministic serialization; `json_format` selects JSON for the expr and
/// series kinds (machines always serialize as JSON).
std::string serialize_representation(const Representation& r, bool json_format);

std::vector<Rational> eval_representation(const Representation& r, std::size_t n);

/// Convert through the series hub (expr -> wa -> series -> lrs -> expr, plus
/// the direct expr <-> ccra edges), then verify source and target agree on
/// `check_terms` terms; disagreement raises CrossCheckError.
Representation convert_representation(const Representation& r, ReprKind target,
                                      unsigned long max_ell, std::size_t check_terms);

struct ClassifyOutput {
    std::string text;
    std::string json;
};

ClassifyOutput classify_representation(const Representation& r, unsigned long max_ell);

/// Exact equivalence of two representations via the series hub; for two
/// automata the prefix-based decision is cross-checked as well.
bool equiv_representations(const Representation& a, const Representation& b);

struct DecomposeOutput {
    std::vector<ChainedLoop> loops;
    std::string text;
    std::string json;
};

DecomposeOutput decompose_representation(const Representation& r);

struct PfracOutput {
    PartialFractionDecomposition decomposition;
    std::string text;
    std::string json;
};

PfracOutput pfrac_representation(const Representation& r, unsigned long max_ell);

}  // namespace polyrat
