#ifndef MIXINF_RATIONAL_HPP
#define MIXINF_RATIONAL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace mixinf {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

/// "p" for integers, "p/q" otherwise; always in lowest terms.
std::string to_string(const Rational& value);

/// Parses "p", "-p" or "p/q"; throws Error(InvalidArgument) otherwise.
Rational parse_rational(const std::string& text);

/**
 * Exact complex rational c = re + i*im. Boost keeps both parts normalized
 * (positive denominator, lowest terms), so equality is structural.
 */
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational real, Rational imag = Rational(0))
        : re(std::move(real)), im(std::move(imag)) {}
    GaussianRational(long long real) : re(real), im(0) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }
    std::complex<double> to_complex() const
    {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    /// Throws Error(InvalidArgument) on division by zero.
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

/// Human-readable and parseable: "3/4", "-i", "2/3*i", "(1-1/2*i)".
std::string to_string(const GaussianRational& value);

// Exact linear algebra over Q, used by the polyhedral and homogeneity code.

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t columns);

std::size_t rank(RationalMatrix m, std::size_t columns);

/// Basis of {x : m x = 0}, one vector per free column of the RREF, with a 1
/// in that column.
std::vector<RationalVector> nullspace(RationalMatrix m, std::size_t columns);

/// Scales v to the primitive integer vector with the same direction
/// (gcd of entries 1). The zero vector is returned unchanged.
std::vector<Integer> primitive_integer(const RationalVector& v);

RationalVector to_rational(const std::vector<Integer>& v);

Rational dot(const RationalVector& a, const RationalVector& b);

} // namespace mixinf

#endif
