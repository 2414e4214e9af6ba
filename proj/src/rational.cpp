#include "ellip/rational.hpp"

#include "ellip/error.hpp"

#include <cctype>
#include <cmath>

namespace ellip {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty())
        return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    if (!is_integer_literal(num))
        throw InvalidArgument("malformed rational '" + std::string(text) + "'");
    Integer n(std::string(num[0] == '+' ? num.substr(1) : num));
    Integer d(1);
    if (slash != std::string_view::npos) {
        const auto den = text.substr(slash + 1);
        if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+')
            throw InvalidArgument("malformed rational '" + std::string(text) + "'");
        d = Integer(std::string(den));
        if (d == 0)
            throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    }
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational rational_approximation(double x, std::int64_t max_den) {
    if (!std::isfinite(x))
        throw InvalidArgument("cannot approximate a non-finite value");
    const bool negative = x < 0;
    double r = std::fabs(x);
    // Convergents h/k of the continued fraction of r.
    Integer h_prev = 1, h = static_cast<long>(std::floor(r));
    Integer k_prev = 0, k = 1;
    double frac = r - std::floor(r);
    for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
        r = 1.0 / frac;
        const double a_d = std::floor(r);
        frac = r - a_d;
        const Integer a = static_cast<long>(a_d);
        Integer h_next = a * h + h_prev;
        Integer k_next = a * k + k_prev;
        if (k_next > max_den)
            break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    Rational q(h, k);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

} // namespace ellip
