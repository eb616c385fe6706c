#ifndef MIXINF_NONDEGEN_HPP
#define MIXINF_NONDEGEN_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixinf/mixed_polynomial.hpp"
#include "mixinf/newton.hpp"

namespace mixinf {

/// Residual of the mixed-singularity condition conj(df) = lambda * dbar f.
struct SingularityResidual {
    double residual = 0;    ///< min over |lambda| = 1 of ||A - lambda B||^2
    double normalized = 0;  ///< residual / (||A||^2 + ||B||^2 + gradient_term_scale^2)
    Complex lambda{1, 0};
};

/// A = conj(d_z f), B = d_zbar f; lambda is the phase of <A, B>.
SingularityResidual singularity_residual(const MixedPolynomial& f, std::span<const Complex> z);

struct SingularityWitness {
    ComplexVector point;
    Complex lambda{1, 0};
    double residual = 0;  ///< normalized
    double min_modulus = 0;
    std::string face_id;
    bool on_zero_locus = false;
    double f_abs = 0;
    double zero_tolerance = 0;  ///< 1e-6 * (1 + term scale) at the point
};

struct SearchOptions {
    std::size_t trials = 64;
    double tol = 1e-8;
    double box_log_radius = 3;  ///< L: log|z_i| in [-L, L]
    std::uint64_t seed = 1;
};

struct SearchOutcome {
    std::optional<SingularityWitness> witness;
    double best_residual = 0;  ///< normalized, over all trials
    std::size_t trials = 0;
};

/**
 * Seeded multistart Levenberg-Marquardt search for a point of Sing g on the
 * torus box |z_i| in [e^-L, e^L]. Only the effective variables of g move;
 * the others stay at 1. With require_zero_locus the objective also pushes
 * |g| / term_scale to zero (plain non-degeneracy). Throws ZeroPolynomial.
 */
SearchOutcome find_singularity(const MixedPolynomial& g, const SearchOptions& options,
                               bool require_zero_locus = false, std::uint64_t stream = 0);

/// Convenience form returning only an accepted witness.
std::optional<SingularityWitness> find_singularity(const MixedPolynomial& g, std::size_t trials, double tol,
                                                   double box_log_radius, std::uint64_t seed);

/// 1e-6 * (1 + term_scale(f, z)).
double zero_tolerance(const MixedPolynomial& f, std::span<const Complex> z);

enum class NondegeneracyMode { Nondegenerate, StronglyNondegenerate };
enum class FaceScope { GammaPlus, AllSupportHullFaces };
enum class FaceStatus { Degenerate, NoWitnessFound };
enum class Aggregate { Refuted, HeuristicallyNondegenerate };

const char* to_string(NondegeneracyMode mode);
const char* to_string(FaceScope scope);
const char* to_string(FaceStatus status);
const char* to_string(Aggregate aggregate);

struct FaceRecord {
    std::string face_id;
    std::vector<std::size_t> coordinates;  ///< I, 0-based
    std::vector<LatticePoint> lattice_points;
    std::vector<std::int64_t> functional;
    std::string restriction;  ///< f^I_Delta in canonical text
    FaceStatus status = FaceStatus::NoWitnessFound;
    std::optional<SingularityWitness> witness;
    std::size_t trials = 0;
    double best_residual = 0;
    bool refutes = false;
};

struct NonDegeneracyVerdict {
    NondegeneracyMode mode = NondegeneracyMode::StronglyNondegenerate;
    FaceScope scope = FaceScope::GammaPlus;
    std::vector<FaceRecord> faces;
    Aggregate aggregate = Aggregate::HeuristicallyNondegenerate;
    std::optional<std::size_t> refuting_face;  ///< index into faces
    std::vector<std::vector<std::size_t>> coordinate_subsets_checked;
    SearchOptions search;
};

struct ClassifyOptions {
    SearchOptions search;
    bool with_coordinate_restrictions = true;
    std::size_t max_restriction_vars = 6;  ///< sweep only runs for n <= this
};

/**
 * Searches every face in scope (of f, and of each nonzero coordinate
 * restriction f^I when enabled) for singular points of the face
 * restriction. Absence of a witness is evidence only, which the aggregate
 * name says. Throws ZeroPolynomial or EmptySupport.
 */
NonDegeneracyVerdict classify(const MixedPolynomial& f, NondegeneracyMode mode, FaceScope scope,
                              const ClassifyOptions& options = {});

nlohmann::ordered_json to_json(const SingularityWitness& witness);
nlohmann::ordered_json to_json(const NonDegeneracyVerdict& verdict);

/// Complex numbers in reports: [re, im].
nlohmann::ordered_json complex_json(Complex c);
nlohmann::ordered_json complex_vector_json(std::span<const Complex> v);

} // namespace mixinf

#endif
