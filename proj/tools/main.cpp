// polyrat: workbench for poly-rational sequences. Five representations
// (expressions, weighted automata, copyless cost-register automata, linear
// recurrences, rational series), exact conversions between them, and the
// classification and decomposition analyses.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyrat/convert.hpp"

namespace {

using namespace polyrat;

std::string read_input(const std::string& path, bool allow_inline) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) {
        // Textual representations may be passed inline: eval --from expr 'geo(1,1)'.
        if (allow_inline) return path;
        throw ParseError("cannot open input file '" + path + "'", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOpts {
    std::string from = "expr";
    std::string format = "text";
    unsigned long max_ell = 0;  // 0 = default bound from the denominator degree
};

Representation load(const CommonOpts& opts, const std::string& input) {
    ReprKind kind = repr_kind_from_name(opts.from);
    bool textual = kind == ReprKind::Expr || kind == ReprKind::Series;
    return load_representation(kind, read_input(input, textual));
}

int dispatch(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const NotPolyRationalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CrossCheckError& e) {
        std::cerr << "internal cross-check failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        // Fragment, class, copyless, normal-form, domain and budget errors.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyrat: exact workbench for poly-rational sequences"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string input = "-", input_b;
    std::string to = "series";
    std::size_t terms = 10, check_terms = 40;

    auto add_common = [&](CLI::App* cmd, bool with_input = true) {
        cmd->add_option("--from", opts.from, "input representation: expr|wa|ccra|lrs|series")
            ->capture_default_str();
        cmd->add_option("--format", opts.format, "output format: text|json")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        cmd->add_option("--max-ell", opts.max_ell,
                        "exponent search bound (0 = 2*deg^2 default)");
        if (with_input) cmd->add_option("input", input, "input file, or - for stdin");
    };

    CLI::App* cmd_eval = app.add_subcommand("eval", "print the first terms of the sequence");
    add_common(cmd_eval);
    cmd_eval->add_option("-n,--terms", terms, "number of terms")->capture_default_str();

    CLI::App* cmd_convert = app.add_subcommand("convert", "convert between representations");
    add_common(cmd_convert);
    cmd_convert->add_option("--to", to, "target representation: expr|wa|ccra|lrs|series")
        ->required();
    cmd_convert->add_option("--check-terms", check_terms,
                            "terms compared between source and target")
        ->capture_default_str();

    CLI::App* cmd_classify = app.add_subcommand("classify", "classify the input");
    add_common(cmd_classify);

    CLI::App* cmd_equiv = app.add_subcommand("equiv", "decide exact equivalence of two inputs");
    add_common(cmd_equiv, false);
    cmd_equiv->add_option("a", input, "first input file")->required();
    cmd_equiv->add_option("b", input_b, "second input file")->required();

    CLI::App* cmd_decompose =
        app.add_subcommand("decompose", "decompose an automaton into chained loops");
    add_common(cmd_decompose);

    CLI::App* cmd_pfrac =
        app.add_subcommand("pfrac", "partial fractions over binomial-power denominators");
    add_common(cmd_pfrac);

    CLI11_PARSE(app, argc, argv);
    bool json = opts.format == "json";

    if (cmd_eval->parsed())
        return dispatch([&] {
            auto values = eval_representation(load(opts, input), terms);
            if (json) {
                std::string out = "[";
                for (std::size_t i = 0; i < values.size(); ++i)
                    out += (i ? "," : "") + ("\"" + values[i].str() + "\"");
                std::cout << out << "]\n";
            } else {
                for (std::size_t i = 0; i < values.size(); ++i)
                    std::cout << (i ? " " : "") << values[i].str();
                std::cout << "\n";
            }
            return 0;
        });

    if (cmd_convert->parsed())
        return dispatch([&] {
            Representation src = load(opts, input);
            Representation dst = convert_representation(src, repr_kind_from_name(to),
                                                        opts.max_ell, check_terms);
            std::cout << serialize_representation(dst, json) << "\n";
            return 0;
        });

    if (cmd_classify->parsed())
        return dispatch([&] {
            ClassifyOutput out = classify_representation(load(opts, input), opts.max_ell);
            std::cout << (json ? out.json : out.text) << "\n";
            return 0;
        });

    if (cmd_equiv->parsed())
        return dispatch([&] {
            Representation a = load(opts, input);
            Representation b = load(opts, input_b);
            std::cout << (equiv_representations(a, b) ? "true" : "false") << "\n";
            return 0;
        });

    if (cmd_decompose->parsed())
        return dispatch([&] {
            DecomposeOutput out = decompose_representation(load(opts, input));
            std::cout << (json ? out.json : out.text) << "\n";
            return 0;
        });

    if (cmd_pfrac->parsed())
        return dispatch([&] {
            PfracOutput out = pfrac_representation(load(opts, input), opts.max_ell);
            std::cout << (json ? out.json : out.text) << "\n";
            return 0;
        });

    return 2;
}
