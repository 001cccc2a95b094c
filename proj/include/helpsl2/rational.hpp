#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace helpsl2 {

// Exact arithmetic carriers. Everything the solver computes stays in these
// types; doubles appear only in numeric test oracles and display output.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

// Canonical "num/den" rendering, e.g. "3/4", "-1/2", "5/1".
inline std::string rat_to_string(const Rat& x)
{
    return numerator(x).str() + "/" + denominator(x).str();
}

inline Rat rat_from_string(const std::string& s)
{
    const auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
        throw std::invalid_argument("rational literal must look like \"num/den\": " + s);
    const Int num(s.substr(0, slash));
    const Int den(s.substr(slash + 1));
    if (den <= 0)
        throw std::invalid_argument("rational denominator must be positive: " + s);
    return Rat(num, den);
}

} // namespace helpsl2
