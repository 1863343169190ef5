#include "wcub/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace wcub {

namespace {

boost::multiprecision::cpp_int parse_int(std::string_view s)
{
    if (s.empty()) throw std::invalid_argument("parse_rational: empty integer");
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("parse_rational: bad digit in '" + std::string(s) + "'");
    return boost::multiprecision::cpp_int(std::string(s));
}

Rational pow10(long e)
{
    Rational r = 1;
    Rational base = e >= 0 ? Rational(10) : Rational(1, 10);
    for (long i = 0; i < (e >= 0 ? e : -e); ++i) r *= base;
    return r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("parse_rational: empty input");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_int(text.substr(0, slash));
        auto den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        value = Rational(num, den);
    } else {
        long exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            exponent = std::stol(std::string(text.substr(e + 1)));
            text = text.substr(0, e);
        }
        std::string digits;
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
            exponent -= static_cast<long>(text.size() - dot - 1);
        } else {
            digits = std::string(text);
        }
        value = Rational(parse_int(digits)) * pow10(exponent);
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& x)
{
    return x.str();
}

} // namespace wcub
