#include "rational.hpp"

namespace hgm {

Rational rational_from_string(const std::string& s) {
    if (s.empty())
        throw InvalidArgument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0)
            throw InvalidArgument("zero denominator in rational literal");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos)
        return Rational(BigInt(s));
    std::string intpart = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (intpart.empty() || intpart == "-" || intpart == "+")
        intpart += '0';
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i)
        scale *= 10;
    BigInt num = BigInt(intpart) * scale;
    BigInt f(frac.empty() ? "0" : frac);
    num += neg ? -f : f;
    return Rational(num, scale);
}

std::string rational_to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

} // namespace hgm
