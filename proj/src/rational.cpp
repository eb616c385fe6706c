#include "mixinf/rational.hpp"

#include "mixinf/error.hpp"

#include <algorithm>
#include <cctype>

namespace mixinf {

std::string to_string(const Rational& value)
{
    return value.str();
}

Rational parse_rational(const std::string& text)
{
    auto valid_int = [](const std::string& s) {
        std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (start == s.size())
            return false;
        return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                           [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw Error(ErrorKind::InvalidArgument, "rational", "not a rational number: '" + text + "'");
    Integer d(den);
    if (d == 0)
        throw Error(ErrorKind::InvalidArgument, "rational", "zero denominator in '" + text + "'");
    return Rational(Integer(num), d);
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o)
{
    Rational r = re * o.re - im * o.im;
    Rational s = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(s);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o)
{
    const Rational n = o.norm();
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "rational", "division by zero");
    *this *= o.conj();
    re /= n;
    im /= n;
    return *this;
}

std::string to_string(const GaussianRational& value)
{
    if (value.im == 0)
        return to_string(value.re);
    auto imag_part = [](const Rational& im) -> std::string {
        if (im == 1)
            return "i";
        if (im == -1)
            return "-i";
        return to_string(im) + "*i";
    };
    if (value.re == 0)
        return imag_part(value.im);
    std::string out = "(" + to_string(value.re);
    if (value.im > 0)
        out += "+";
    out += imag_part(value.im) + ")";
    return out;
}

std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t columns)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0)
            ++sel;
        if (sel == m.size())
            continue;
        std::swap(m[row], m[sel]);
        const Rational inv = Rational(1) / m[row][col];
        for (auto& x : m[row])
            x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0)
                continue;
            const Rational factor = m[r][col];
            for (std::size_t c = col; c < columns; ++c)
                m[r][c] -= factor * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(RationalMatrix m, std::size_t columns)
{
    return row_reduce(m, columns).size();
}

std::vector<RationalVector> nullspace(RationalMatrix m, std::size_t columns)
{
    const auto pivots = row_reduce(m, columns);
    std::vector<bool> is_pivot(columns, false);
    for (auto p : pivots)
        is_pivot[p] = true;

    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < columns; ++free) {
        if (is_pivot[free])
            continue;
        RationalVector v(columns, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Integer> primitive_integer(const RationalVector& v)
{
    Integer lcm_den = 1;
    for (const auto& x : v)
        lcm_den = boost::multiprecision::lcm(lcm_den, Integer(boost::multiprecision::denominator(x)));
    std::vector<Integer> out;
    out.reserve(v.size());
    Integer g = 0;
    for (const auto& x : v) {
        Rational scaled = x * Rational(lcm_den);
        out.push_back(boost::multiprecision::numerator(scaled));
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(out.back()));
    }
    if (g > 1)
        for (auto& x : out)
            x /= g;
    return out;
}

RationalVector to_rational(const std::vector<Integer>& v)
{
    RationalVector out;
    out.reserve(v.size());
    for (const auto& x : v)
        out.emplace_back(x);
    return out;
}

Rational dot(const RationalVector& a, const RationalVector& b)
{
    Rational s = 0;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
        s += a[k] * b[k];
    return s;
}

} // namespace mixinf
