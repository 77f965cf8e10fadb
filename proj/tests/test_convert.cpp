#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>

#include "gen.hpp"
#include "polyrat/convert.hpp"

using namespace polyrat;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

Polynomial P(std::vector<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return Polynomial(std::move(c));
}

std::string fib_lrs_json() { return R"({"coeffs": ["1","1"], "init": ["0","1"]})"; }

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
    std::string tmp_in = "/tmp/polyrat_cli_stdin.txt";
    std::string cmd = std::string(POLYRAT_CLI_PATH) + " " + args;
    if (!stdin_data.empty()) {
        std::ofstream f(tmp_in);
        f << stdin_data;
        f.close();
        cmd += " < " + tmp_in;
    }
    cmd += " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("wa json round trip") {
    WeightedAutomaton a = WeightedAutomaton::with_states(2);
    a.I[0] = Q(1);
    a.F[1] = Q(-1, 2);
    a.add_edge(0, 0, Q(1));
    a.add_edge(0, 1, Q(3, 7));
    std::string json = wa_to_json(a);
    WeightedAutomaton b = wa_from_json(json);
    CHECK(b.n_states == 2);
    CHECK(b.I == a.I);
    CHECK(b.F == a.F);
    CHECK(b.weight(0, 1) == Q(3, 7));
    CHECK(wa_to_json(b) == json);

    CHECK_THROWS_AS(wa_from_json("{"), ParseError);
    CHECK_THROWS_AS(wa_from_json(R"({"states": 1, "initial": [[3, "1"]]})"), ParseError);
    CHECK_THROWS_AS(
        wa_from_json(R"({"states": 1, "transitions": [[0, 0, "1"], [0, 0, "2"]]})"), ParseError);
    CHECK_THROWS_AS(wa_from_json(R"({"states": 1, "initial": [[0, "1/0"]]})"), ParseError);
}

TEST_CASE("cra json round trip") {
    std::string json = R"({"registers": ["x"], "states": 1, "initial_state": 0,
                           "nu0": {"x": "0"}, "delta": [[0, {"x": "2*x+1"}]], "mu": {"0": "x"}})";
    Cra c = cra_from_json(json);
    CHECK(eval_cra(c, 5) == Q(31));
    Cra back = cra_from_json(cra_to_json(c));
    CHECK(eval_cra_prefix(back, 10) == eval_cra_prefix(c, 10));
    // Registers missing from a delta entry default to the identity image.
    std::string partial = R"({"registers": ["x", "y"], "states": 1, "initial_state": 0,
                              "nu0": {"x": "1"}, "delta": [[0, {"x": "2*x"}]], "mu": {"0": "x+y"}})";
    Cra two = cra_from_json(partial);
    CHECK(eval_cra_prefix(two, 3) == std::vector<Rational>{Q(1), Q(2), Q(4)});
    CHECK_THROWS_AS(cra_from_json(R"({"registers": ["x"], "states": 1, "initial_state": 0,
                                      "nu0": {"z": "0"}, "delta": [[0, {}]], "mu": {}})"),
                    ParseError);
}

TEST_CASE("lrs and series json") {
    Lrs fib = lrs_from_json(fib_lrs_json());
    CHECK(fib.coeffs == std::vector<Rational>{Q(1), Q(1)});
    CHECK(lrs_from_json(lrs_to_json(fib)).init == fib.init);
    CHECK_THROWS_AS(lrs_from_json(R"({"coeffs": ["1"], "init": []})"), ParseError);

    RationalFunction f(P({0, 1}), P({1, -1, -1}));
    CHECK(series_from_json(series_to_json(f)) == f);
}

TEST_CASE("series text parsing") {
    CHECK(series_from_text("x/(1 - x - x^2)") == RationalFunction(P({0, 1}), P({1, -1, -1})));
    CHECK(series_from_text("2/(1-3x^2)") == RationalFunction(P({2}), P({1, 0, -3})));
    CHECK(series_from_text("10x/((1-3x^2)(1-5x))") ==
          RationalFunction(P({0, 10}), P({1, 0, -3}) * P({1, -5})));
    CHECK(series_from_text("1 - x - x^2") == RationalFunction(P({1, -1, -1}), P({1})));
    CHECK(series_from_text("-1/2 + 3/2x") ==
          RationalFunction(Polynomial{Q(-1, 2), Q(3, 2)}, Polynomial::one()));
    CHECK(series_from_text("(1 + x)/(1 - 2x)") == RationalFunction(P({1, 1}), P({1, -2})));
    CHECK(series_from_text("5") == RationalFunction(Q(5)));
    // Round trip through the printer.
    std::mt19937_64 rng(17001);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> deg(0, 4);
        std::vector<Rational> num, den;
        for (int i = 0, d = deg(rng); i <= d; ++i) num.push_back(testgen::random_rational(rng));
        for (int i = 0, d = deg(rng); i <= d; ++i) den.push_back(testgen::random_rational(rng));
        den.insert(den.begin(), Q(1));
        RationalFunction f{Polynomial(std::move(num)), Polynomial(std::move(den))};
        CHECK(series_from_text(f.str()) == f);
    }
    CHECK_THROWS_AS(series_from_text("x/"), ParseError);
    CHECK_THROWS_AS(series_from_text("x/(1-x"), ParseError);
    CHECK_THROWS_AS(series_from_text("x/1 - x"), ParseError);
    CHECK_THROWS_AS(series_from_text(""), ParseError);
}

TEST_CASE("conversion routing: every source to every target") {
    auto e = parse_seqexpr("geo(1, 2) + shuffle(arith(0, 1), geo(3, 1))");
    Representation exprs = Representation::of(e);
    std::vector<ReprKind> kinds{ReprKind::Expr, ReprKind::Wa, ReprKind::Ccra, ReprKind::Lrs,
                                ReprKind::Series};
    auto expect = eval_seqexpr(*e, 30);
    for (ReprKind mid : kinds) {
        Representation m = convert_representation(exprs, mid, 0, 40);
        CHECK(eval_representation(m, 30) == expect);
        for (ReprKind target : kinds) {
            Representation t = convert_representation(m, target, 0, 40);
            CHECK(eval_representation(t, 30) == expect);
        }
    }
}

TEST_CASE("conversion re-ingestion is equivalent to the input") {
    std::mt19937_64 rng(17002);
    std::vector<ReprKind> kinds{ReprKind::Expr, ReprKind::Wa, ReprKind::Ccra, ReprKind::Lrs,
                                ReprKind::Series};
    for (int iter = 0; iter < 12; ++iter) {
        auto e = testgen::random_polyrat_expr(rng, 2);
        Representation src = Representation::of(e);
        for (ReprKind target : kinds) {
            Representation out = convert_representation(src, target, 0, 40);
            std::string text = serialize_representation(out, /*json_format=*/true);
            std::string body = text;
            if (target == ReprKind::Expr) {
                // JSON wrapper {"expr": "..."}; reload from the text form.
                body = serialize_representation(out, false);
            }
            Representation back = load_representation(target, body);
            CHECK(equiv_representations(src, back));
        }
    }
}

TEST_CASE("non-polyrat conversions fail with the right errors") {
    Representation fib = load_representation(ReprKind::Lrs, fib_lrs_json());
    CHECK_THROWS_AS(convert_representation(fib, ReprKind::Expr, 0, 40), NotPolyRationalError);
    CHECK_THROWS_AS(convert_representation(fib, ReprKind::Wa, 0, 40), NotPolyRationalError);
    CHECK(eval_representation(convert_representation(fib, ReprKind::Series, 0, 40), 8) ==
          eval_representation(fib, 8));
    Representation star = Representation::of(parse_seqexpr("star(fin[0, 1, 1])"));
    CHECK_THROWS_AS(convert_representation(star, ReprKind::Wa, 0, 40), FragmentError);
}

TEST_CASE("classify output strings") {
    Representation fib = load_representation(ReprKind::Lrs, fib_lrs_json());
    auto out = classify_representation(fib, 0);
    CHECK(out.text == "not poly-rational up to exponent bound 8; witness 1 - x - x^2");

    Representation nseq =
        load_representation(ReprKind::Lrs, R"({"coeffs": ["2","-1"], "init": ["0","1"]})");
    CHECK(classify_representation(nseq, 0).text == "poly-rational; denominator (1 - x)^2");

    Representation expr = Representation::of(parse_seqexpr("arith(0,1) * geo(1,2)"));
    CHECK(classify_representation(expr, 0).text == "fragments: PolyRatFragment RatFragment");

    std::string cra_json = R"({"registers": ["x"], "states": 1, "initial_state": 0,
                               "nu0": {"x": "0"}, "delta": [[0, {"x": "2*x+1"}]], "mu": {"0": "x"}})";
    Representation cra = load_representation(ReprKind::Ccra, cra_json);
    CHECK(classify_representation(cra, 0).text ==
          "copyless: yes; linear: yes; normal form order: x");
}

TEST_CASE("equiv_representations across kinds") {
    Representation a = Representation::of(parse_seqexpr("geo(1, 2)"));
    Representation b = load_representation(
        ReprKind::Wa, R"({"states": 1, "initial": [[0, "1"]], "final": [[0, "1"]],
                          "transitions": [[0, 0, "2"]]})");
    CHECK(equiv_representations(a, b));
    Representation c = Representation::of(parse_seqexpr("geo(1, 3)"));
    CHECK(!equiv_representations(a, c));
}

TEST_CASE("cli: end-to-end binary runs") {
    std::ofstream("/tmp/polyrat_fib.json") << fib_lrs_json();
    auto conv = run_cli("convert --from lrs --to series /tmp/polyrat_fib.json");
    CHECK(conv.exit_code == 0);
    CHECK(conv.output == "x/(1 - x - x^2)\n");

    auto eval = run_cli("eval --from expr -n 3 -", "geo(1,1)");
    CHECK(eval.exit_code == 0);
    CHECK(eval.output == "1 1 1\n");

    auto bad = run_cli("eval --from expr -n 3 -", "geo(1,");
    CHECK(bad.exit_code == 1);

    auto cls = run_cli("convert --from lrs --to expr /tmp/polyrat_fib.json");
    CHECK(cls.exit_code == 3);

    auto frag = run_cli("convert --from expr --to wa -", "star(fin[0, 1])");
    CHECK(frag.exit_code == 2);

    // Byte-determinism of a multi-step output.
    std::ofstream("/tmp/polyrat_a3.json")
        << R"({"states": 3, "initial": [[0, "2"]], "final": [[2, "1"]],
               "transitions": [[0, 1, "1"], [1, 0, "3"], [0, 2, "5"], [2, 2, "5"]]})";
    auto d1 = run_cli("decompose --from wa /tmp/polyrat_a3.json");
    auto d2 = run_cli("decompose --from wa /tmp/polyrat_a3.json");
    CHECK(d1.exit_code == 0);
    CHECK(d1.output == d2.output);

    auto eq = run_cli("equiv --from wa /tmp/polyrat_a3.json /tmp/polyrat_a3.json");
    CHECK(eq.exit_code == 0);
    CHECK(eq.output == "true\n");

    auto pf = run_cli("pfrac --from series --format json -", "10x/((1-3x^2)(1-5x))");
    CHECK(pf.exit_code == 0);
    CHECK(pf.output.find("-25/11") != std::string::npos);
}
