#ifndef MIXINF_MIXED_POLYNOMIAL_HPP
#define MIXINF_MIXED_POLYNOMIAL_HPP

#include <complex>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mixinf/rational.hpp"

namespace mixinf {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Exponents = std::vector<std::uint32_t>;
/// A point nu+mu of the support, in N^n.
using LatticePoint = std::vector<std::int64_t>;

/// Largest exponent entry accepted anywhere (2^31 - 1).
inline constexpr std::uint64_t max_exponent = 2147483647u;

/// c * z^nu * zbar^mu with c != 0 once inside a canonical polynomial.
struct MixedTerm {
    GaussianRational coeff;
    Exponents nu;
    Exponents mu;

    friend bool operator==(const MixedTerm&, const MixedTerm&) = default;
};

struct WirtingerGradient {
    ComplexVector d_z;     ///< df/dz_i, zbar held fixed
    ComplexVector d_zbar;  ///< df/dzbar_i, z held fixed
};

struct ValueAndGradient {
    Complex value;
    WirtingerGradient gradient;
};

/**
 * Mixed polynomial f(z, zbar) = sum c_{nu,mu} z^nu zbar^mu in canonical form:
 * no repeated (nu, mu), no zero coefficients, terms sorted lexicographically
 * on the concatenation (nu, mu). Immutable once built; double-precision
 * copies of the coefficients are cached for evaluation.
 */
class MixedPolynomial {
public:
    /// The zero polynomial in n variables.
    explicit MixedPolynomial(std::size_t n_vars = 1);

    /// Merges duplicates, drops zeros and sorts. Throws MismatchedArity when
    /// an exponent vector does not have length n, ExponentOverflow when an
    /// entry exceeds max_exponent.
    static MixedPolynomial canonicalize(std::vector<MixedTerm> raw_terms, std::size_t n);

    static MixedPolynomial constant(const GaussianRational& c, std::size_t n);
    /// z_{index} (0-based).
    static MixedPolynomial variable(std::size_t index, std::size_t n);
    /// zbar_{index} (0-based).
    static MixedPolynomial conj_variable(std::size_t index, std::size_t n);

    std::size_t n_vars() const { return n_vars_; }
    const std::vector<MixedTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Coefficient of z^0 zbar^0 (zero when absent).
    GaussianRational constant_term() const;
    std::size_t degree() const;

    /// Same terms viewed in a larger ambient space (never shrinks).
    MixedPolynomial with_arity(std::size_t n) const;

    MixedPolynomial& operator+=(const MixedPolynomial& o);
    MixedPolynomial& operator-=(const MixedPolynomial& o);
    MixedPolynomial& operator*=(const MixedPolynomial& o);
    MixedPolynomial& operator*=(const GaussianRational& c);

    friend MixedPolynomial operator+(MixedPolynomial a, const MixedPolynomial& b) { return a += b; }
    friend MixedPolynomial operator-(MixedPolynomial a, const MixedPolynomial& b) { return a -= b; }
    friend MixedPolynomial operator*(MixedPolynomial a, const MixedPolynomial& b) { return a *= b; }
    friend MixedPolynomial operator*(MixedPolynomial a, const GaussianRational& c) { return a *= c; }
    friend MixedPolynomial operator-(MixedPolynomial a) { return a *= GaussianRational(-1); }
    friend bool operator==(const MixedPolynomial& a, const MixedPolynomial& b)
    {
        return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
    }

    /// Repeated squaring; exponent 0 gives the constant 1.
    MixedPolynomial pow(std::uint64_t exponent) const;

    const ComplexVector& numeric_coefficients() const { return numeric_; }

private:
    MixedPolynomial(std::size_t n_vars, std::vector<MixedTerm> canonical_terms);
    void refresh_numeric();

    std::size_t n_vars_;
    std::vector<MixedTerm> terms_;
    ComplexVector numeric_;
};

/// f(z) in double precision. Throws MismatchedArity.
Complex evaluate(const MixedPolynomial& f, std::span<const Complex> z);

/// Both Wirtinger gradients at z. Throws MismatchedArity.
WirtingerGradient wirtinger_gradients(const MixedPolynomial& f, std::span<const Complex> z);

ValueAndGradient evaluate_with_gradients(const MixedPolynomial& f, std::span<const Complex> z);

/// sum |c| |z^nu zbar^mu|, the natural magnitude scale for |f(z)|.
double term_scale(const MixedPolynomial& f, std::span<const Complex> z);

/// Euclidean norm of (g_1..g_n), g_i = sum |c| (nu_i + mu_i) |z^nu zbar^mu| / |z_i|:
/// the natural magnitude scale for both Wirtinger gradients at z.
double gradient_term_scale(const MixedPolynomial& f, std::span<const Complex> z);

/// nu + mu of a term.
LatticePoint support_point(const MixedTerm& term);

/// f_Delta: the terms whose nu + mu lies in face_points.
MixedPolynomial restrict_to_face(const MixedPolynomial& f, const std::set<LatticePoint>& face_points);

/// f^I: sets z_j = zbar_j = 0 for every j not in `indices` (0-based).
MixedPolynomial restrict_to_coordinates(const MixedPolynomial& f, const std::vector<std::size_t>& indices);

/// { i | some term has nu_i + mu_i > 0 }, 0-based and sorted.
std::vector<std::size_t> effective_variables(const MixedPolynomial& f);

/// (c, nu, mu) -> (conj c, mu, nu).
MixedPolynomial conjugate(const MixedPolynomial& f);

/// Canonical text form, accepted by the parser: "1/4*z1^2 - i*z1*zbar1".
std::string to_string(const MixedPolynomial& f);

} // namespace mixinf

#endif
