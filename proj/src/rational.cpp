#include "polyrat/rational.hpp"

#include <cctype>
#include <ostream>

namespace polyrat {

Rational Rational::parse(const std::string& text) {
    std::size_t i = 0;
    auto fail = [&](const char* msg) -> Rational {
        throw ParseError(std::string("bad rational '") + text + "': " + msg, i);
    };
    auto digits = [&]() -> std::string {
        std::string out;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
        return out;
    };
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::string num = digits();
    if (num.empty()) return fail("expected digits");
    Integer n(num, 10);
    Integer d(1);
    if (i < text.size() && text[i] == '/') {
        ++i;
        std::string den = digits();
        if (den.empty()) return fail("expected digits after '/'");
        d = Integer(den, 10);
        if (sgn(d) == 0) return fail("zero denominator");
    }
    if (i != text.size()) return fail("trailing characters");
    if (neg) n = -n;
    return Rational(n, d);
}

Rational Rational::pow(unsigned long e) const {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), v_.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), v_.get_den_mpz_t(), e);
    return Rational(num, den);
}

std::string Rational::str() const {
    std::string out = v_.get_num().get_str();
    if (v_.get_den() != 1) out += "/" + v_.get_den().get_str();
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace polyrat
