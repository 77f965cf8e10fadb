#pragma once

// Shared deterministic random generators for the test suites.

#include <random>
#include <vector>

#include "polyrat/seqexpr.hpp"

namespace polyrat::testgen {

inline Rational random_rational(std::mt19937_64& rng, long max_abs_num = 5, long max_den = 5) {
    std::uniform_int_distribution<long> num(-max_abs_num, max_abs_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return Rational(num(rng), den(rng));
}

// Random PolyRat-fragment expression of depth <= max_depth, rationals with
// |num|, den <= 5.
inline SeqExprPtr random_polyrat_expr(std::mt19937_64& rng, int max_depth) {
    std::uniform_int_distribution<int> pick(0, 5);
    auto atom = [&]() -> SeqExprPtr {
        switch (pick(rng) % 3) {
            case 0: return SeqExpr::arith(random_rational(rng), random_rational(rng));
            case 1: return SeqExpr::geo(random_rational(rng), random_rational(rng));
            default: {
                std::uniform_int_distribution<int> len(1, 3);
                std::vector<Rational> vals;
                for (int i = 0, n = len(rng); i < n; ++i) vals.push_back(random_rational(rng));
                return SeqExpr::fin(std::move(vals));
            }
        }
    };
    if (max_depth <= 0) return atom();
    switch (pick(rng)) {
        case 0:
        case 1: return atom();
        case 2:
            return SeqExpr::sum(random_polyrat_expr(rng, max_depth - 1),
                                random_polyrat_expr(rng, max_depth - 1));
        case 3:
            return SeqExpr::hadamard(random_polyrat_expr(rng, max_depth - 1),
                                     random_polyrat_expr(rng, max_depth - 1));
        case 4:
            return SeqExpr::shift(random_rational(rng), random_polyrat_expr(rng, max_depth - 1));
        default: {
            std::uniform_int_distribution<int> arity(2, 3);
            std::vector<SeqExprPtr> kids;
            for (int i = 0, n = arity(rng); i < n; ++i)
                kids.push_back(random_polyrat_expr(rng, max_depth - 1));
            return SeqExpr::shuffle(std::move(kids));
        }
    }
}

// Random expression over the full operator set (including Cauchy and star);
// starred children are forced to have first term 0 by wrapping with shift(0).
inline SeqExprPtr random_rat_expr(std::mt19937_64& rng, int max_depth) {
    std::uniform_int_distribution<int> pick(0, 7);
    if (max_depth <= 0) return random_polyrat_expr(rng, 0);
    switch (pick(rng)) {
        case 0:
            return SeqExpr::cauchy(random_rat_expr(rng, max_depth - 1),
                                   random_rat_expr(rng, max_depth - 1));
        case 1:
            return SeqExpr::star(
                SeqExpr::shift(Rational(0), random_rat_expr(rng, max_depth - 1)));
        default: return random_polyrat_expr(rng, max_depth);
    }
}

}  // namespace polyrat::testgen
