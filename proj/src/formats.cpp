#include "polyrat/formats.hpp"

#include <cctype>

#include "json.hpp"

namespace polyrat {

namespace {

using nlohmann::ordered_json;

ordered_json must_parse(const std::string& text, const char* what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(std::string("invalid JSON for ") + what, 0);
    return j;
}

Rational rat_field(const ordered_json& j, const char* context) {
    if (!j.is_string()) throw ParseError(std::string(context) + ": rationals must be strings", 0);
    return Rational::parse(j.get<std::string>());
}

std::size_t state_field(const ordered_json& j, std::size_t n_states, const char* context) {
    if (!j.is_number_unsigned())
        throw ParseError(std::string(context) + ": state must be a non-negative integer", 0);
    std::size_t q = j.get<std::size_t>();
    if (q >= n_states) throw ParseError(std::string(context) + ": state index out of range", 0);
    return q;
}

std::vector<Rational> rat_array(const ordered_json& j, const char* context) {
    if (!j.is_array()) throw ParseError(std::string(context) + ": expected an array", 0);
    std::vector<Rational> out;
    for (const auto& item : j) out.push_back(rat_field(item, context));
    return out;
}

ordered_json rat_array_json(const std::vector<Rational>& v) {
    ordered_json out = ordered_json::array();
    for (const auto& r : v) out.push_back(r.str());
    return out;
}

}  // namespace

WeightedAutomaton wa_from_json(const std::string& text) {
    ordered_json j = must_parse(text, "weighted automaton");
    if (!j.contains("states")) throw ParseError("automaton: missing \"states\"", 0);
    WeightedAutomaton a = WeightedAutomaton::with_states(j["states"].get<std::size_t>());
    for (const auto& entry : j.value("initial", ordered_json::array())) {
        std::size_t q = state_field(entry.at(0), a.n_states, "initial");
        if (!a.I[q].is_zero()) throw ParseError("automaton: duplicate initial entry", 0);
        a.I[q] = rat_field(entry.at(1), "initial");
    }
    for (const auto& entry : j.value("final", ordered_json::array())) {
        std::size_t q = state_field(entry.at(0), a.n_states, "final");
        if (!a.F[q].is_zero()) throw ParseError("automaton: duplicate final entry", 0);
        a.F[q] = rat_field(entry.at(1), "final");
    }
    for (const auto& entry : j.value("transitions", ordered_json::array())) {
        std::size_t p = state_field(entry.at(0), a.n_states, "transitions");
        std::size_t q = state_field(entry.at(1), a.n_states, "transitions");
        if (!a.weight(p, q).is_zero()) throw ParseError("automaton: duplicate transition", 0);
        a.add_edge(p, q, rat_field(entry.at(2), "transitions"));
    }
    return a;
}

std::string wa_to_json(const WeightedAutomaton& a) {
    ordered_json j;
    j["states"] = a.n_states;
    ordered_json initial = ordered_json::array(), final_ = ordered_json::array(),
                 transitions = ordered_json::array();
    for (std::size_t q = 0; q < a.n_states; ++q) {
        if (!a.I[q].is_zero()) initial.push_back({q, a.I[q].str()});
        if (!a.F[q].is_zero()) final_.push_back({q, a.F[q].str()});
    }
    for (std::size_t p = 0; p < a.n_states; ++p)
        for (const auto& e : a.edges[p]) transitions.push_back({p, e.to, e.weight.str()});
    j["initial"] = initial;
    j["final"] = final_;
    j["transitions"] = transitions;
    return j.dump();
}

Cra cra_from_json(const std::string& text) {
    ordered_json j = must_parse(text, "cost-register automaton");
    Cra c;
    for (const auto& name : j.at("registers")) c.registers.push_back(name.get<std::string>());
    c.n_states = j.at("states").get<std::size_t>();
    c.initial_state = state_field(j.at("initial_state"), c.n_states, "initial_state");
    c.nu0.assign(c.n_registers(), Rational(0));
    const ordered_json nu0 = j.value("nu0", ordered_json::object());
    for (const auto& [name, value] : nu0.items()) {
        auto it = std::find(c.registers.begin(), c.registers.end(), name);
        if (it == c.registers.end()) throw ParseError("nu0: unknown register '" + name + "'", 0);
        c.nu0[static_cast<std::size_t>(it - c.registers.begin())] = rat_field(value, "nu0");
    }
    const auto& delta = j.at("delta");
    if (!delta.is_array() || delta.size() != c.n_states)
        throw ParseError("delta: expected one [next_state, images] entry per state", 0);
    for (const auto& entry : delta) {
        std::size_t next = state_field(entry.at(0), c.n_states, "delta");
        Substitution s = Substitution::identity(c.n_registers());
        for (const auto& [name, expr] : entry.at(1).items()) {
            auto it = std::find(c.registers.begin(), c.registers.end(), name);
            if (it == c.registers.end())
                throw ParseError("delta: unknown register '" + name + "'", 0);
            s.images[static_cast<std::size_t>(it - c.registers.begin())] =
                parse_register_expr(expr.get<std::string>(), c.registers);
        }
        c.delta.emplace_back(next, std::move(s));
    }
    const ordered_json mu = j.value("mu", ordered_json::object());
    for (const auto& [state, expr] : mu.items()) {
        std::size_t q;
        try {
            q = static_cast<std::size_t>(std::stoul(state));
        } catch (const std::exception&) {
            throw ParseError("mu: state keys must be numeric strings", 0);
        }
        if (q >= c.n_states) throw ParseError("mu: state index out of range", 0);
        c.mu[q] = parse_register_expr(expr.get<std::string>(), c.registers);
    }
    return c;
}

std::string cra_to_json(const Cra& c) {
    ordered_json j;
    j["registers"] = c.registers;
    j["states"] = c.n_states;
    j["initial_state"] = c.initial_state;
    ordered_json nu0 = ordered_json::object();
    for (std::size_t i = 0; i < c.n_registers(); ++i) nu0[c.registers[i]] = c.nu0[i].str();
    j["nu0"] = nu0;
    ordered_json delta = ordered_json::array();
    for (const auto& [next, sub] : c.delta) {
        ordered_json images = ordered_json::object();
        for (std::size_t i = 0; i < c.n_registers(); ++i)
            images[c.registers[i]] = print_register_expr(*sub.images[i], c.registers);
        delta.push_back({next, images});
    }
    j["delta"] = delta;
    ordered_json mu = ordered_json::object();
    for (const auto& [state, expr] : c.mu)
        mu[std::to_string(state)] = print_register_expr(*expr, c.registers);
    j["mu"] = mu;
    return j.dump();
}

Lrs lrs_from_json(const std::string& text) {
    ordered_json j = must_parse(text, "linear recurrence");
    Lrs l;
    l.coeffs = rat_array(j.at("coeffs"), "coeffs");
    l.init = rat_array(j.at("init"), "init");
    if (l.coeffs.size() != l.init.size())
        throw ParseError("lrs: coeffs and init must have the same length", 0);
    return l;
}

std::string lrs_to_json(const Lrs& l) {
    ordered_json j;
    j["coeffs"] = rat_array_json(l.coeffs);
    j["init"] = rat_array_json(l.init);
    return j.dump();
}

RationalFunction series_from_json(const std::string& text) {
    ordered_json j = must_parse(text, "series");
    Polynomial num(rat_array(j.at("num"), "num"));
    Polynomial den(rat_array(j.at("den"), "den"));
    return RationalFunction(num, den);
}

std::string series_to_json(const RationalFunction& f) {
    ordered_json j;
    j["num"] = rat_array_json(f.num().coeffs());
    j["den"] = rat_array_json(f.den().coeffs());
    return j.dump();
}

// --- series text form ----------------------------------------------------------

namespace {

// polyexpr := chain (('+' | '-') chain)*
// chain    := atom (['*'] atom)*
// atom     := '(' polyexpr ')' | coefficient | 'x' ['^' nat]
// A '/' inside a coefficient is consumed only when digits follow; the
// top-level '/' separating numerator and denominator stays untouched.
class PolyTextParser {
public:
    explicit PolyTextParser(const std::string& text) : text_(text) {}

    RationalFunction parse_series() {
        Polynomial num = polyexpr();
        skip_ws();
        Polynomial den = Polynomial::one();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '(')
                throw ParseError("series: denominator must be parenthesized", pos_);
            den = chain();
        }
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("series: unexpected trailing input", pos_);
        return RationalFunction(num, den);
    }

private:
    Polynomial polyexpr() {
        skip_ws();
        bool negative = false;
        if (peek() == '+' || peek() == '-') negative = text_[pos_++] == '-';
        Polynomial acc = chain();
        if (negative) acc = -acc;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            Polynomial t = chain();
            acc = c == '+' ? acc + t : acc - t;
        }
        return acc;
    }

    Polynomial chain() {
        Polynomial acc = atom();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * atom();
            } else if (c == '(' || c == 'x' || std::isdigit(static_cast<unsigned char>(c))) {
                acc = acc * atom();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("series: unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial inner = polyexpr();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw ParseError("series: expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            return Polynomial::monomial(Rational(1), exponent());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
            Rational coeff = Rational::parse(text_.substr(start, pos_ - start));
            skip_ws();
            if (peek() == 'x') {
                ++pos_;
                return Polynomial::monomial(coeff, exponent());
            }
            return Polynomial(coeff);
        }
        throw ParseError(std::string("series: unexpected character '") + c + "'", pos_);
    }

    std::size_t exponent() {
        skip_ws();
        if (peek() != '^') return 1;
        ++pos_;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("series: expected exponent digits", pos_);
        return std::stoul(text_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

RationalFunction series_from_text(const std::string& text) {
    return PolyTextParser(text).parse_series();
}

RationalFunction series_from_any(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? series_from_json(text) : series_from_text(text);
    }
    throw ParseError("series: empty input", 0);
}

}  // namespace polyrat
