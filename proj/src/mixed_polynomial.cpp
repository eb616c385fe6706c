#include "mixinf/mixed_polynomial.hpp"

#include "mixinf/error.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace mixinf {

namespace {

using TermKey = std::pair<Exponents, Exponents>;

void check_arity(const MixedPolynomial& f, std::size_t got)
{
    if (got != f.n_vars())
        throw Error(ErrorKind::MismatchedArity, "mixedpoly",
                    "point has " + std::to_string(got) + " coordinates, polynomial has " +
                        std::to_string(f.n_vars()) + " variables");
}

Complex ipow(Complex base, std::uint32_t e)
{
    Complex result(1.0, 0.0);
    while (e > 0) {
        if (e & 1u)
            result *= base;
        e >>= 1u;
        if (e)
            base *= base;
    }
    return result;
}

std::uint32_t checked_add(std::uint32_t a, std::uint32_t b)
{
    const std::uint64_t s = std::uint64_t(a) + b;
    if (s > max_exponent)
        throw Error(ErrorKind::ExponentOverflow, "mixedpoly", "exponent exceeds 2^31-1");
    return static_cast<std::uint32_t>(s);
}

std::string monomial_string(const MixedTerm& t)
{
    std::string out;
    auto append = [&out](const std::string& name, std::uint32_t e) {
        if (e == 0)
            return;
        if (!out.empty())
            out += "*";
        out += name;
        if (e > 1)
            out += "^" + std::to_string(e);
    };
    for (std::size_t i = 0; i < t.nu.size(); ++i) {
        append("z" + std::to_string(i + 1), t.nu[i]);
        append("zbar" + std::to_string(i + 1), t.mu[i]);
    }
    return out;
}

} // namespace

MixedPolynomial::MixedPolynomial(std::size_t n_vars)
    : n_vars_(n_vars)
{
}

MixedPolynomial::MixedPolynomial(std::size_t n_vars, std::vector<MixedTerm> canonical_terms)
    : n_vars_(n_vars), terms_(std::move(canonical_terms))
{
    refresh_numeric();
}

void MixedPolynomial::refresh_numeric()
{
    numeric_.clear();
    numeric_.reserve(terms_.size());
    for (const auto& t : terms_)
        numeric_.push_back(t.coeff.to_complex());
}

MixedPolynomial MixedPolynomial::canonicalize(std::vector<MixedTerm> raw_terms, std::size_t n)
{
    std::map<TermKey, GaussianRational> merged;
    for (auto& t : raw_terms) {
        if (t.nu.size() != n || t.mu.size() != n)
            throw Error(ErrorKind::MismatchedArity, "mixedpoly",
                        "exponent vector length differs from n = " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            if (t.nu[i] > max_exponent || t.mu[i] > max_exponent)
                throw Error(ErrorKind::ExponentOverflow, "mixedpoly", "exponent exceeds 2^31-1");
        auto [it, inserted] = merged.try_emplace(TermKey{std::move(t.nu), std::move(t.mu)}, t.coeff);
        if (!inserted)
            it->second += t.coeff;
    }
    std::vector<MixedTerm> terms;
    terms.reserve(merged.size());
    for (auto& [key, coeff] : merged) {
        if (coeff.is_zero())
            continue;
        terms.push_back(MixedTerm{std::move(coeff), key.first, key.second});
    }
    return MixedPolynomial(n, std::move(terms));
}

MixedPolynomial MixedPolynomial::constant(const GaussianRational& c, std::size_t n)
{
    return canonicalize({MixedTerm{c, Exponents(n, 0), Exponents(n, 0)}}, n);
}

MixedPolynomial MixedPolynomial::variable(std::size_t index, std::size_t n)
{
    Exponents nu(n, 0);
    nu.at(index) = 1;
    return canonicalize({MixedTerm{GaussianRational(1), nu, Exponents(n, 0)}}, n);
}

MixedPolynomial MixedPolynomial::conj_variable(std::size_t index, std::size_t n)
{
    Exponents mu(n, 0);
    mu.at(index) = 1;
    return canonicalize({MixedTerm{GaussianRational(1), Exponents(n, 0), mu}}, n);
}

bool MixedPolynomial::is_constant() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const MixedTerm& t) {
        return std::all_of(t.nu.begin(), t.nu.end(), [](auto e) { return e == 0; }) &&
               std::all_of(t.mu.begin(), t.mu.end(), [](auto e) { return e == 0; });
    });
}

GaussianRational MixedPolynomial::constant_term() const
{
    // The all-zero key sorts first.
    if (terms_.empty())
        return GaussianRational(0);
    const auto& t = terms_.front();
    const bool zero = std::all_of(t.nu.begin(), t.nu.end(), [](auto e) { return e == 0; }) &&
                      std::all_of(t.mu.begin(), t.mu.end(), [](auto e) { return e == 0; });
    return zero ? t.coeff : GaussianRational(0);
}

std::size_t MixedPolynomial::degree() const
{
    std::size_t best = 0;
    for (const auto& t : terms_) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < n_vars_; ++i)
            d += t.nu[i] + t.mu[i];
        best = std::max(best, d);
    }
    return best;
}

MixedPolynomial MixedPolynomial::with_arity(std::size_t n) const
{
    if (n <= n_vars_)
        return *this;
    std::vector<MixedTerm> terms = terms_;
    for (auto& t : terms) {
        t.nu.resize(n, 0);
        t.mu.resize(n, 0);
    }
    return canonicalize(std::move(terms), n);
}

MixedPolynomial& MixedPolynomial::operator+=(const MixedPolynomial& o)
{
    const std::size_t n = std::max(n_vars_, o.n_vars_);
    MixedPolynomial a = with_arity(n);
    MixedPolynomial b = o.with_arity(n);
    std::vector<MixedTerm> all = std::move(a.terms_);
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    *this = canonicalize(std::move(all), n);
    return *this;
}

MixedPolynomial& MixedPolynomial::operator-=(const MixedPolynomial& o)
{
    return *this += (o * GaussianRational(-1));
}

MixedPolynomial& MixedPolynomial::operator*=(const MixedPolynomial& o)
{
    const std::size_t n = std::max(n_vars_, o.n_vars_);
    const MixedPolynomial a = with_arity(n);
    const MixedPolynomial b = o.with_arity(n);
    std::vector<MixedTerm> product;
    product.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            MixedTerm p{s.coeff * t.coeff, Exponents(n), Exponents(n)};
            for (std::size_t i = 0; i < n; ++i) {
                p.nu[i] = checked_add(s.nu[i], t.nu[i]);
                p.mu[i] = checked_add(s.mu[i], t.mu[i]);
            }
            product.push_back(std::move(p));
        }
    }
    *this = canonicalize(std::move(product), n);
    return *this;
}

MixedPolynomial& MixedPolynomial::operator*=(const GaussianRational& c)
{
    if (c.is_zero()) {
        terms_.clear();
        numeric_.clear();
        return *this;
    }
    for (auto& t : terms_)
        t.coeff *= c;
    refresh_numeric();
    return *this;
}

MixedPolynomial MixedPolynomial::pow(std::uint64_t exponent) const
{
    if (exponent > max_exponent)
        throw Error(ErrorKind::ExponentOverflow, "mixedpoly", "power exceeds 2^31-1");
    MixedPolynomial result = constant(GaussianRational(1), n_vars_);
    MixedPolynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1u)
            result *= base;
        exponent >>= 1u;
        if (exponent)
            base *= base;
    }
    return result;
}

Complex evaluate(const MixedPolynomial& f, std::span<const Complex> z)
{
    check_arity(f, z.size());
    Complex sum(0.0, 0.0);
    const auto& coeffs = f.numeric_coefficients();
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
        const auto& t = f.terms()[k];
        Complex m = coeffs[k];
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (t.nu[i])
                m *= ipow(z[i], t.nu[i]);
            if (t.mu[i])
                m *= ipow(std::conj(z[i]), t.mu[i]);
        }
        sum += m;
    }
    return sum;
}

ValueAndGradient evaluate_with_gradients(const MixedPolynomial& f, std::span<const Complex> z)
{
    check_arity(f, z.size());
    const std::size_t n = z.size();
    ValueAndGradient out{Complex(0.0, 0.0), {ComplexVector(n), ComplexVector(n)}};
    const auto& coeffs = f.numeric_coefficients();
    ComplexVector zp(n), zbp(n);  // z_i^nu_i, zbar_i^mu_i
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
        const auto& t = f.terms()[k];
        for (std::size_t i = 0; i < n; ++i) {
            zp[i] = ipow(z[i], t.nu[i]);
            zbp[i] = ipow(std::conj(z[i]), t.mu[i]);
        }
        Complex m = coeffs[k];
        for (std::size_t i = 0; i < n; ++i)
            m *= zp[i] * zbp[i];
        out.value += m;
        for (std::size_t i = 0; i < n; ++i) {
            if (t.nu[i] == 0 && t.mu[i] == 0)
                continue;
            Complex others = coeffs[k];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    others *= zp[j] * zbp[j];
            if (t.nu[i])
                out.gradient.d_z[i] += others * double(t.nu[i]) * ipow(z[i], t.nu[i] - 1) * zbp[i];
            if (t.mu[i])
                out.gradient.d_zbar[i] +=
                    others * double(t.mu[i]) * zp[i] * ipow(std::conj(z[i]), t.mu[i] - 1);
        }
    }
    return out;
}

WirtingerGradient wirtinger_gradients(const MixedPolynomial& f, std::span<const Complex> z)
{
    return evaluate_with_gradients(f, z).gradient;
}

double term_scale(const MixedPolynomial& f, std::span<const Complex> z)
{
    check_arity(f, z.size());
    double sum = 0.0;
    const auto& coeffs = f.numeric_coefficients();
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
        const auto& t = f.terms()[k];
        double m = std::abs(coeffs[k]);
        for (std::size_t i = 0; i < z.size(); ++i)
            m *= std::pow(std::abs(z[i]), double(t.nu[i]) + double(t.mu[i]));
        sum += m;
    }
    return sum;
}

double gradient_term_scale(const MixedPolynomial& f, std::span<const Complex> z)
{
    check_arity(f, z.size());
    const auto& coeffs = f.numeric_coefficients();
    std::vector<double> g(z.size(), 0.0);
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
        const auto& t = f.terms()[k];
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double e = double(t.nu[i]) + double(t.mu[i]);
            if (e == 0)
                continue;
            double m = std::abs(coeffs[k]) * e * std::pow(std::abs(z[i]), e - 1);
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i)
                    m *= std::pow(std::abs(z[j]), double(t.nu[j]) + double(t.mu[j]));
            g[i] += m;
        }
    }
    double s = 0;
    for (auto x : g)
        s += x * x;
    return std::sqrt(s);
}

LatticePoint support_point(const MixedTerm& term)
{
    LatticePoint p(term.nu.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = std::int64_t(term.nu[i]) + std::int64_t(term.mu[i]);
    return p;
}

MixedPolynomial restrict_to_face(const MixedPolynomial& f, const std::set<LatticePoint>& face_points)
{
    std::vector<MixedTerm> kept;
    for (const auto& t : f.terms())
        if (face_points.count(support_point(t)))
            kept.push_back(t);
    return MixedPolynomial::canonicalize(std::move(kept), f.n_vars());
}

MixedPolynomial restrict_to_coordinates(const MixedPolynomial& f, const std::vector<std::size_t>& indices)
{
    std::vector<bool> keep(f.n_vars(), false);
    for (auto i : indices) {
        if (i >= f.n_vars())
            throw Error(ErrorKind::MismatchedArity, "mixedpoly",
                        "coordinate index " + std::to_string(i + 1) + " out of range");
        keep[i] = true;
    }
    std::vector<MixedTerm> kept;
    for (const auto& t : f.terms()) {
        bool ok = true;
        for (std::size_t j = 0; j < f.n_vars() && ok; ++j)
            if (!keep[j] && (t.nu[j] || t.mu[j]))
                ok = false;
        if (ok)
            kept.push_back(t);
    }
    return MixedPolynomial::canonicalize(std::move(kept), f.n_vars());
}

std::vector<std::size_t> effective_variables(const MixedPolynomial& f)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < f.n_vars(); ++i)
        for (const auto& t : f.terms())
            if (t.nu[i] + t.mu[i] > 0) {
                out.push_back(i);
                break;
            }
    return out;
}

MixedPolynomial conjugate(const MixedPolynomial& f)
{
    std::vector<MixedTerm> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms())
        terms.push_back(MixedTerm{t.coeff.conj(), t.mu, t.nu});
    return MixedPolynomial::canonicalize(std::move(terms), f.n_vars());
}

std::string to_string(const MixedPolynomial& f)
{
    if (f.is_zero())
        return "0";
    std::string out;
    for (const auto& t : f.terms()) {
        const std::string mono = monomial_string(t);
        const GaussianRational& c = t.coeff;
        const bool negative = (c.im == 0 && c.re < 0) || (c.re == 0 && c.im < 0);
        const GaussianRational a = negative ? -c : c;
        std::string body;
        if (a == GaussianRational(1))
            body = mono.empty() ? "1" : mono;
        else
            body = mono.empty() ? to_string(a) : to_string(a) + "*" + mono;
        if (out.empty())
            out = (negative ? "-" : "") + body;
        else
            out += (negative ? " - " : " + ") + body;
    }
    return out;
}

} // namespace mixinf
