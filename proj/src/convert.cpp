#include "polyrat/convert.hpp"

#include "json.hpp"

namespace polyrat {

using nlohmann::ordered_json;

ReprKind repr_kind_from_name(const std::string& name) {
    if (name == "expr") return ReprKind::Expr;
    if (name == "wa") return ReprKind::Wa;
    if (name == "ccra") return ReprKind::Ccra;
    if (name == "lrs") return ReprKind::Lrs;
    if (name == "series") return ReprKind::Series;
    throw ParseError("unknown representation '" + name + "'", 0);
}

std::string repr_kind_name(ReprKind kind) {
    switch (kind) {
        case ReprKind::Expr: return "expr";
        case ReprKind::Wa: return "wa";
        case ReprKind::Ccra: return "ccra";
        case ReprKind::Lrs: return "lrs";
        case ReprKind::Series: return "series";
    }
    return "?";
}

Representation Representation::of(SeqExprPtr e) {
    Representation r;
    r.kind = ReprKind::Expr;
    r.expr = std::move(e);
    return r;
}

Representation Representation::of(WeightedAutomaton a) {
    Representation r;
    r.kind = ReprKind::Wa;
    r.wa = std::move(a);
    return r;
}

Representation Representation::of(Cra c) {
    Representation r;
    r.kind = ReprKind::Ccra;
    r.cra = std::move(c);
    return r;
}

Representation Representation::of(Lrs l) {
    Representation r;
    r.kind = ReprKind::Lrs;
    r.lrs = std::move(l);
    return r;
}

Representation Representation::of(RationalFunction f) {
    Representation r;
    r.kind = ReprKind::Series;
    r.series = std::move(f);
    return r;
}

Representation load_representation(ReprKind kind, const std::string& text) {
    switch (kind) {
        case ReprKind::Expr: return Representation::of(parse_seqexpr(text));
        case ReprKind::Wa: return Representation::of(wa_from_json(text));
        case ReprKind::Ccra: return Representation::of(cra_from_json(text));
        case ReprKind::Lrs: return Representation::of(lrs_from_json(text));
        case ReprKind::Series: return Representation::of(series_from_any(text));
    }
    throw DomainError("unreachable representation kind");
}

std::string serialize_representation(const Representation& r, bool json_format) {
    switch (r.kind) {
        case ReprKind::Expr:
            if (json_format) {
                ordered_json j;
                j["expr"] = print_seqexpr(*r.expr);
                return j.dump();
            }
            return print_seqexpr(*r.expr);
        case ReprKind::Wa: return wa_to_json(r.wa);
        case ReprKind::Ccra: return cra_to_json(r.cra);
        case ReprKind::Lrs: return lrs_to_json(r.lrs);
        case ReprKind::Series: return json_format ? series_to_json(r.series) : r.series.str();
    }
    throw DomainError("unreachable representation kind");
}

std::vector<Rational> eval_representation(const Representation& r, std::size_t n) {
    switch (r.kind) {
        case ReprKind::Expr: return eval_seqexpr(*r.expr, n);
        case ReprKind::Wa: return eval_matrix_prefix(r.wa, n);
        case ReprKind::Ccra: return eval_cra_prefix(r.cra, n);
        case ReprKind::Lrs: return eval_lrs_prefix(r.lrs, n);
        case ReprKind::Series: return series_expand(r.series, n);
    }
    throw DomainError("unreachable representation kind");
}

namespace {

RationalFunction to_series(const Representation& r) {
    switch (r.kind) {
        case ReprKind::Series: return r.series;
        case ReprKind::Wa: return wa_series(r.wa);
        case ReprKind::Lrs: return lrs_to_series(r.lrs);
        case ReprKind::Expr: {
            const FragmentSet frag = fragment_of(*r.expr);
            if (!frag.polyrat)
                throw FragmentError(
                    "expression uses Cauchy or star; only PolyRat expressions convert");
            return wa_series(compile_expr_to_wa(*r.expr));
        }
        case ReprKind::Ccra: return wa_series(compile_expr_to_wa(*ccra_to_expr(r.cra)));
    }
    throw DomainError("unreachable representation kind");
}

SeqExprPtr to_expr(const Representation& r, unsigned long max_ell) {
    switch (r.kind) {
        case ReprKind::Expr: return r.expr;
        case ReprKind::Ccra: return ccra_to_expr(r.cra);
        default: {
            RationalFunction f = to_series(r);
            unsigned long bound = max_ell > 0 ? max_ell : default_max_ell(f.den());
            return series_to_expr(f, bound);
        }
    }
}

}  // namespace

Representation convert_representation(const Representation& r, ReprKind target,
                                      unsigned long max_ell, std::size_t check_terms) {
    Representation out;
    switch (target) {
        case ReprKind::Expr: out = Representation::of(to_expr(r, max_ell)); break;
        case ReprKind::Series: out = Representation::of(to_series(r)); break;
        case ReprKind::Lrs: out = Representation::of(series_to_lrs(to_series(r))); break;
        case ReprKind::Wa:
            out = Representation::of(compile_expr_to_wa(*to_expr(r, max_ell)));
            break;
        case ReprKind::Ccra:
            out = Representation::of(compile_expr_to_ccra(*to_expr(r, max_ell)));
            break;
    }
    if (eval_representation(r, check_terms) != eval_representation(out, check_terms))
        throw CrossCheckError("conversion changed the sequence within the checked prefix");
    return out;
}

ClassifyOutput classify_representation(const Representation& r, unsigned long max_ell) {
    ordered_json j;
    std::string text;
    switch (r.kind) {
        case ReprKind::Expr: {
            FragmentSet f = fragment_of(*r.expr);
            ordered_json names = ordered_json::array();
            for (const auto& n : f.names()) names.push_back(n);
            j["fragments"] = names;
            text = "fragments:";
            for (const auto& n : f.names()) text += " " + n;
            break;
        }
        case ReprKind::Wa: {
            AmbiguityReport rep = classify_ambiguity(r.wa);
            RationalFunction s = wa_series(r.wa);
            j["class"] = rep.describe();
            if (rep.cls == AmbiguityClass::FinitelyAmbiguous) j["k"] = rep.k;
            if (rep.cls == AmbiguityClass::PolynomiallyAmbiguous) j["degree"] = rep.degree;
            if (rep.witness_state) j["witness_state"] = *rep.witness_state;
            j["series"] = s.str();
            text = rep.describe() + "; series " + s.str();
            break;
        }
        case ReprKind::Lrs:
        case ReprKind::Series: {
            RationalFunction f =
                r.kind == ReprKind::Lrs ? lrs_to_series(r.lrs) : r.series;
            unsigned long bound = max_ell > 0 ? max_ell : default_max_ell(f.den());
            Lrs l = r.kind == ReprKind::Lrs ? r.lrs : series_to_lrs(f);
            PolyRatVerdict v = classify_polyrat(l, bound);
            j["is_polyrat"] = v.is_polyrat;
            j["max_ell"] = bound;
            if (v.is_polyrat) {
                ordered_json factors = ordered_json::array();
                std::string flist;
                for (const auto& fac : v.certificate) {
                    factors.push_back({fac.lambda.str(), fac.ell, fac.k});
                    flist += " (" + fac.base().str() + ")";
                    if (fac.k > 1) flist += "^" + std::to_string(fac.k);
                }
                j["certificate"] = factors;
                text = "poly-rational; denominator" + (flist.empty() ? " 1" : flist);
            } else {
                j["witness"] = v.witness->str();
                text = "not poly-rational up to exponent bound " + std::to_string(bound) +
                       "; witness " + v.witness->str();
            }
            break;
        }
        case ReprKind::Ccra: {
            CopylessReport cl = check_copyless(r.cra);
            bool linear = check_linear(r.cra);
            NormalFormReport nf = check_normal_form(r.cra);
            j["copyless"] = cl.copyless;
            if (!cl.copyless) j["copyless_witness"] = r.cra.registers[*cl.witness_register];
            j["linear"] = linear;
            text = std::string("copyless: ") + (cl.copyless ? "yes" : "no");
            if (!cl.copyless) text += " (register " + r.cra.registers[*cl.witness_register] + ")";
            text += std::string("; linear: ") + (linear ? "yes" : "no");
            if (nf.order) {
                ordered_json order = ordered_json::array();
                std::string olist;
                for (std::size_t i : *nf.order) {
                    order.push_back(r.cra.registers[i]);
                    olist += (olist.empty() ? "" : " < ") + r.cra.registers[i];
                }
                j["normal_form_order"] = order;
                text += "; normal form order: " + olist;
            } else {
                ordered_json cyc = ordered_json::array();
                std::string clist;
                for (std::size_t i : nf.cycle) {
                    cyc.push_back(r.cra.registers[i]);
                    clist += (clist.empty() ? "" : " -> ") + r.cra.registers[i];
                }
                j["normal_form_cycle"] = cyc;
                text += "; no normal-form order (cycle " + clist + ")";
            }
            break;
        }
    }
    return {text, j.dump()};
}

bool equiv_representations(const Representation& a, const Representation& b) {
    bool by_series = to_series(a) == to_series(b);
    if (a.kind == ReprKind::Wa && b.kind == ReprKind::Wa) {
        if (equiv(a.wa, b.wa) != by_series)
            throw CrossCheckError("equiv: prefix decision disagrees with series equality");
    }
    return by_series;
}

DecomposeOutput decompose_representation(const Representation& r) {
    if (r.kind != ReprKind::Wa)
        throw DomainError("decompose expects a weighted automaton input");
    DecomposeOutput out;
    out.loops = decompose_chained_loops(r.wa);
    ordered_json j = ordered_json::array();
    RationalFunction total;
    for (const auto& c : out.loops) {
        RationalFunction s = chained_loop_series(c);
        total = total + s;
        ordered_json entry;
        entry["initial_weight"] = c.initial_weight.str();
        entry["path"] = c.path_states;
        ordered_json weights = ordered_json::array();
        for (const auto& w : c.path_weights) weights.push_back(w.str());
        entry["path_weights"] = weights;
        ordered_json loops = ordered_json::array();
        for (const auto& l : c.loops) {
            if (l)
                loops.push_back({l->weight.str(), l->length});
            else
                loops.push_back(nullptr);
        }
        entry["loops"] = loops;
        entry["series"] = s.str();
        j.push_back(entry);

        std::string line = "chained loop: initial weight " + c.initial_weight.str() + ", path";
        for (std::size_t i = 0; i < c.path_states.size(); ++i) {
            line += " q" + std::to_string(c.path_states[i]);
            if (c.loops[i])
                line += "[loop " + c.loops[i]->weight.str() + ", len " +
                        std::to_string(c.loops[i]->length) + "]";
            if (i + 1 < c.path_states.size()) line += " -" + c.path_weights[i].str() + "->";
        }
        line += "; series " + s.str();
        out.text += line + "\n";
    }
    out.text += "sum of series: " + total.str();
    ordered_json root;
    root["chained_loops"] = j;
    root["sum_of_series"] = total.str();
    out.json = root.dump();
    return out;
}

PfracOutput pfrac_representation(const Representation& r, unsigned long max_ell) {
    if (r.kind != ReprKind::Series && r.kind != ReprKind::Lrs)
        throw DomainError("pfrac expects a series or lrs input");
    RationalFunction f = r.kind == ReprKind::Series ? r.series : lrs_to_series(r.lrs);
    unsigned long bound = max_ell > 0 ? max_ell : default_max_ell(f.den());
    BinomialExtension ext = refine_coprime(binomial_multiple_extend(f, bound));
    PfracOutput out;
    out.decomposition = partial_fractions(ext);
    ordered_json j;
    ordered_json terms = ordered_json::array();
    if (!out.decomposition.poly_part.is_zero()) {
        out.text += "polynomial part: " + out.decomposition.poly_part.str() + "\n";
        j["poly_part"] = out.decomposition.poly_part.str();
    }
    for (const auto& t : out.decomposition.terms) {
        std::string den = "(" + Polynomial::binomial(t.lambda, t.ell).str() + ")";
        if (t.k > 1) den += "^" + std::to_string(t.k);
        out.text += "(" + t.num.str() + ") / " + den + "\n";
        terms.push_back({t.num.str(), t.lambda.str(), t.ell, t.k});
    }
    j["terms"] = terms;
    if (!out.text.empty() && out.text.back() == '\n') out.text.pop_back();
    out.json = j.dump();
    return out;
}

}  // namespace polyrat
