#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "polyrat/lrs.hpp"
#include "polyrat/wa.hpp"

using namespace polyrat;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> QV(std::vector<long> v) {
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

Polynomial P(std::vector<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return Polynomial(std::move(c));
}

Lrs fibonacci() { return Lrs{{Q(1), Q(1)}, {Q(0), Q(1)}}; }

}  // namespace

TEST_CASE("eval_lrs and char_poly") {
    CHECK(eval_lrs_prefix(fibonacci(), 8) == QV({0, 1, 1, 2, 3, 5, 8, 13}));
    CHECK(char_poly(fibonacci()) == P({-1, -1, 1}));  // x^2 - x - 1
    Lrs zero{{}, {}};
    CHECK(eval_lrs(zero, 5) == Q(0));
    CHECK(char_poly(zero) == Polynomial::one());
    CHECK_THROWS_AS(eval_lrs(Lrs{{Q(1)}, {}}, 1), DomainError);
}

TEST_CASE("lrs_to_series: worked examples") {
    CHECK(lrs_to_series(fibonacci()) == RationalFunction(P({0, 1}), P({1, -1, -1})));
    // Geometric 5^(n+1).
    CHECK(lrs_to_series(Lrs{{Q(5)}, {Q(5)}}) == RationalFunction(P({5}), P({1, -5})));
    // All-zero initial values.
    CHECK(lrs_to_series(Lrs{{Q(2), Q(3)}, {Q(0), Q(0)}}) == RationalFunction());
}

TEST_CASE("lrs_to_series matches eval_lrs term-wise") {
    std::mt19937_64 rng(13001);
    for (int iter = 0; iter < 50; ++iter) {
        std::uniform_int_distribution<int> ord(0, 5);
        int k = ord(rng);
        Lrs l;
        for (int i = 0; i < k; ++i) l.coeffs.push_back(testgen::random_rational(rng));
        for (int i = 0; i < k; ++i) l.init.push_back(testgen::random_rational(rng));
        CHECK(series_expand(lrs_to_series(l), 50) == eval_lrs_prefix(l, 50));
    }
}

TEST_CASE("series_to_lrs: inverse direction") {
    Lrs fib = series_to_lrs(RationalFunction(P({0, 1}), P({1, -1, -1})));
    CHECK(fib.coeffs == QV({1, 1}));
    CHECK(fib.init == QV({0, 1}));

    // Constant series 1: k = 1, coeffs (0), init (1).
    Lrs one = series_to_lrs(RationalFunction(Q(1)));
    CHECK(one.coeffs == QV({0}));
    CHECK(one.init == QV({1}));

    // Fig. 3 A3 series: order-3 recurrence matching the convolution terms.
    RationalFunction f3(P({0, 10}), P({1, 0, -3}) * P({1, -5}));
    Lrs l3 = series_to_lrs(f3);
    CHECK(l3.order() == 3);
    auto direct = series_expand(f3, 10);
    CHECK(eval_lrs_prefix(l3, 10) == direct);
    // Convolution oracle f3(n) = sum f1(i-1) f2(n-i).
    auto f1 = series_expand(RationalFunction(P({2}), P({1, 0, -3})), 10);
    auto f2 = series_expand(RationalFunction(P({5}), P({1, -5})), 10);
    for (std::size_t n = 0; n < 10; ++n) {
        Rational acc(0);
        for (std::size_t i = 1; i <= n; ++i) acc += f1[i - 1] * f2[n - i];
        CHECK(direct[n] == acc);
    }
}

TEST_CASE("round trip lrs -> series -> lrs") {
    std::mt19937_64 rng(13002);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> ord(0, 4);
        int k = ord(rng);
        Lrs l;
        for (int i = 0; i < k; ++i) l.coeffs.push_back(testgen::random_rational(rng));
        for (int i = 0; i < k; ++i) l.init.push_back(testgen::random_rational(rng));
        RationalFunction f = lrs_to_series(l);
        Lrs back = series_to_lrs(f);
        CHECK(eval_lrs_prefix(back, 50) == eval_lrs_prefix(l, 50));
        // The reduced function is a fixed point of the round trip.
        CHECK(lrs_to_series(back) == f);
    }
}

TEST_CASE("classify_polyrat: verdicts") {
    auto fib = classify_polyrat(fibonacci());
    CHECK(!fib.is_polyrat);
    REQUIRE(fib.witness.has_value());
    CHECK(*fib.witness == P({1, -1, -1}));

    // u_{n+2} = 2u_n, init (1, 0): series 1/(1 - 2x^2).
    auto v = classify_polyrat(Lrs{{Q(0), Q(2)}, {Q(1), Q(0)}});
    CHECK(v.is_polyrat);
    REQUIRE(v.certificate.size() == 1);
    CHECK(v.certificate[0].lambda == Q(2));
    CHECK(v.certificate[0].ell == 2);
    CHECK(v.certificate[0].k == 1);

    // u_{n+2} = 2u_{n+1} - u_n, init (0, 1): the sequence n, series x/(1-x)^2.
    auto n_seq = classify_polyrat(Lrs{{Q(2), Q(-1)}, {Q(0), Q(1)}});
    CHECK(n_seq.is_polyrat);
    REQUIRE(n_seq.certificate.size() == 1);
    CHECK(n_seq.certificate[0].lambda == Q(1));
    CHECK(n_seq.certificate[0].ell == 1);
    CHECK(n_seq.certificate[0].k == 2);
}

TEST_CASE("classify_polyrat: invariant under non-minimal presentations") {
    // Pad Fibonacci with a redundant eigenvalue 2: u_{n+3} = 3u_{n+2} - u_{n+1} - 2u_n
    // has characteristic (x^2 - x - 1)(x - 2); same sequence, same verdict.
    Lrs fib = fibonacci();
    Lrs padded{{Q(3), Q(-1), Q(-2)}, eval_lrs_prefix(fib, 3)};
    CHECK(eval_lrs_prefix(padded, 20) == eval_lrs_prefix(fib, 20));
    CHECK(!classify_polyrat(padded).is_polyrat);

    // Pad the poly-rational sequence n with eigenvalue 3: still poly-rational.
    Lrs nseq{{Q(2), Q(-1)}, {Q(0), Q(1)}};
    Lrs npad{{Q(5), Q(-7), Q(3)}, eval_lrs_prefix(nseq, 3)};
    CHECK(eval_lrs_prefix(npad, 20) == eval_lrs_prefix(nseq, 20));
    CHECK(classify_polyrat(npad).is_polyrat);
}

TEST_CASE("lrs_to_expr: pipeline") {
    // The sequence n.
    Lrs nseq{{Q(2), Q(-1)}, {Q(0), Q(1)}};
    auto e = lrs_to_expr(nseq);
    CHECK(fragment_of(*e).polyrat);
    CHECK(eval_seqexpr(*e, 6) == QV({0, 1, 2, 3, 4, 5}));

    // f1 of Fig. 3: 2*3^(n/2) on even n.
    Lrs f1{{Q(0), Q(3)}, {Q(2), Q(0)}};
    auto e1 = lrs_to_expr(f1);
    CHECK(eval_seqexpr(*e1, 5) == QV({2, 0, 6, 0, 18}));

    // Geometric 5^(n+1).
    Lrs f2{{Q(5)}, {Q(5)}};
    auto e2 = lrs_to_expr(f2);
    CHECK(eval_seqexpr(*e2, 4) == QV({5, 25, 125, 625}));

    CHECK_THROWS_AS(lrs_to_expr(fibonacci()), NotPolyRationalError);
}

TEST_CASE("lrs_to_expr: agrees with eval_lrs on poly-rational inputs") {
    std::mt19937_64 rng(13003);
    int done = 0;
    while (done < 30) {
        // Build poly-rational series from random binomial denominators.
        std::uniform_int_distribution<int> nf(1, 2), ell(1, 3), kk(1, 2), dn(0, 3);
        Polynomial den = Polynomial::one();
        for (int i = 0, n = nf(rng); i < n; ++i) {
            Rational lam = testgen::random_rational(rng, 3, 2);
            if (lam.is_zero()) lam = Q(1);
            den = den * Polynomial::binomial(lam, static_cast<unsigned>(ell(rng)))
                            .pow(static_cast<unsigned>(kk(rng)));
        }
        std::vector<Rational> num;
        for (int i = 0, d = dn(rng); i <= d; ++i) num.push_back(testgen::random_rational(rng));
        Polynomial pnum(std::move(num));
        if (pnum.is_zero()) pnum = Polynomial::one();
        Lrs l = series_to_lrs(RationalFunction(pnum, den));
        auto verdict = classify_polyrat(l);
        CHECK(verdict.is_polyrat);
        auto e = lrs_to_expr(l);
        CHECK(eval_seqexpr(*e, 40) == eval_lrs_prefix(l, 40));
        CHECK(fragment_of(*e).polyrat);
        ++done;
    }
}

TEST_CASE("lrs and wa agree through the series hub") {
    std::mt19937_64 rng(13004);
    for (int iter = 0; iter < 25; ++iter) {
        auto e = testgen::random_polyrat_expr(rng, 3);
        auto a = compile_expr_to_wa(*e);
        RationalFunction s = wa_series(a);
        Lrs l = series_to_lrs(s);
        CHECK(eval_lrs_prefix(l, 40) == eval_seqexpr(*e, 40));
        CHECK(lrs_to_series(l) == s);
    }
}

TEST_CASE("PolyRat fragment expressions classify poly-rational through the hub") {
    std::mt19937_64 rng(13005);
    for (int iter = 0; iter < 25; ++iter) {
        auto e = testgen::random_polyrat_expr(rng, 3);
        REQUIRE(fragment_of(*e).polyrat);
        Lrs l = series_to_lrs(wa_series(compile_expr_to_wa(*e)));
        CHECK(classify_polyrat(l).is_polyrat);
    }
}
