#ifndef MIXINF_HOMOGENEITY_HPP
#define MIXINF_HOMOGENEITY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixinf/mixed_polynomial.hpp"

namespace mixinf {

enum class HomogeneityKind { Radial, Polar };

const char* to_string(HomogeneityKind kind);

/**
 * Radial: sum q_j (nu_j + mu_j) = m for every term, so f(t o z) = t^m f(z)
 * for real t > 0. Polar: sum p_j (nu_j - mu_j) = m, so f(l o z) = l^m f(z)
 * for unit l. Weights are primitive (gcd 1) and may be negative; m > 0.
 */
struct HomogeneityType {
    HomogeneityKind kind = HomogeneityKind::Radial;
    std::vector<std::int64_t> weights;
    std::int64_t degree = 0;
    /// False when the solution space has dimension > 1 and a generator was
    /// picked by the lexicographic rule.
    bool unique = true;

    friend bool operator==(const HomogeneityType&, const HomogeneityType&) = default;
};

/// Throws ZeroPolynomial.
std::optional<HomogeneityType> radial_type(const MixedPolynomial& f);
/// Throws ZeroPolynomial.
std::optional<HomogeneityType> polar_type(const MixedPolynomial& f);

/// Applies t o z (radial) or l o z (polar) with the type's weights.
ComplexVector act(const HomogeneityType& type, Complex factor, std::span<const Complex> z);

/**
 * Max over `samples` seeded random unit-scale points of
 * |f(action(z)) - factor^m f(z)| / (1 + |f(z)|), with t in [1/2, 2] for
 * radial types and l on the unit circle for polar ones.
 */
double verify_scaling(const MixedPolynomial& f, const HomogeneityType& type, std::size_t samples,
                      std::uint64_t seed);

/// sum q_i z_i df/dz_i + q_i zbar_i df/dzbar_i - m f at z.
Complex euler_residual(const MixedPolynomial& f, const HomogeneityType& radial, std::span<const Complex> z);

} // namespace mixinf

#endif
