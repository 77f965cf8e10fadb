#pragma once

#include <string>

#include "polyrat/cra.hpp"
#include "polyrat/lrs.hpp"
#include "polyrat/wa.hpp"

namespace polyrat {

// JSON formats, rationals as strings "a/b":
//   automaton: {"states": n, "initial": [[q, "w"], ...], "final": [[q, "w"], ...],
//               "transitions": [[p, q, "w"], ...]}
//   machine:   {"registers": ["x"], "states": n, "initial_state": 0,
//               "nu0": {"x": "0"}, "delta": [[next, {"x": "2*x+1"}], ...],
//               "mu": {"0": "x"}}
//   lrs:       {"coeffs": ["1","1"], "init": ["0","1"]}
//   series:    {"num": ["0","1"], "den": ["1","-1","-1"]}  (coefficients low degree first)

WeightedAutomaton wa_from_json(const std::string& text);
std::string wa_to_json(const WeightedAutomaton& a);

Cra cra_from_json(const std::string& text);
std::string cra_to_json(const Cra& c);

Lrs lrs_from_json(const std::string& text);
std::string lrs_to_json(const Lrs& l);

RationalFunction series_from_json(const std::string& text);
std::string series_to_json(const RationalFunction& f);

/// Text form "x/(1 - x - x^2)". The denominator, when present, is one or more
/// parenthesized factors after a top-level '/'. Accepts products of
/// parenthesized groups, "^" powers on x, and rational coefficients.
RationalFunction series_from_text(const std::string& text);

/// Sniffs JSON ('{' first) vs text form.
RationalFunction series_from_any(const std::string& text);

}  // namespace polyrat
