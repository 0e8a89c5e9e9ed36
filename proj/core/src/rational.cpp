#include "liebox/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace liebox {

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos)
        throw std::invalid_argument("empty rational literal");
    s = s.substr(first, last - first + 1);
    if (!s.empty() && s.front() == '+')
        s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("non-finite value has no rational form");
    return Rational(v);
}

}  // namespace liebox
