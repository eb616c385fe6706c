#ifndef MIXINF_TESTS_SUPPORT_HPP
#define MIXINF_TESTS_SUPPORT_HPP

#include "mixinf/mixed_polynomial.hpp"
#include "mixinf/parser.hpp"
#include "mixinf/random.hpp"

#include <cmath>
#include <string>

namespace testing {

using namespace mixinf;

inline const char* f_ex_text = "1/4*z1^2 - 1/4*zbar1^2 + z1*zbar1 - (1+i)*(z1+z2)*(zbar1+zbar2)";
inline const char* f_rad_text = "z1*zbar1 + z2*zbar2";
inline const char* g_pol_text = "z1^2 + z1^4*zbar2^2 + z2^2";
inline const char* cubic_text = "z1^3 + z2^3";
inline const char* f_sb_text = "z1*zbar2 + z1^2*zbar2^2";

inline MixedPolynomial poly(const std::string& text, std::optional<std::size_t> n = std::nullopt)
{
    return parse_polynomial(text, n);
}

inline std::string data_file(const std::string& name)
{
    return std::string(MIXINF_DATA_DIR) + "/" + name;
}

/// Random polynomial with small integer Gaussian coefficients.
inline MixedPolynomial random_polynomial(Rng& rng, std::size_t n, std::size_t terms, std::uint32_t max_exp)
{
    std::vector<MixedTerm> raw;
    for (std::size_t t = 0; t < terms; ++t) {
        MixedTerm term;
        const auto re = static_cast<long long>(rng.next() % 7) - 3;
        const auto im = static_cast<long long>(rng.next() % 7) - 3;
        term.coeff = GaussianRational(Rational(re == 0 && im == 0 ? 1 : re), Rational(im));
        for (std::size_t i = 0; i < n; ++i) {
            term.nu.push_back(static_cast<std::uint32_t>(rng.next() % (max_exp + 1)));
            term.mu.push_back(static_cast<std::uint32_t>(rng.next() % (max_exp + 1)));
        }
        raw.push_back(term);
    }
    return MixedPolynomial::canonicalize(raw, n);
}

inline ComplexVector random_point(Rng& rng, std::size_t n, double scale = 1.0)
{
    ComplexVector z(n);
    for (auto& zi : z)
        zi = scale * Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return z;
}

inline double norm(const ComplexVector& v)
{
    double s = 0;
    for (auto x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

} // namespace testing

#endif
