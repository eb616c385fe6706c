#ifndef MIXINF_ATINFINITY_HPP
#define MIXINF_ATINFINITY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixinf/mixed_polynomial.hpp"
#include "mixinf/nondegen.hpp"

namespace mixinf {

// Scale used below, with A = conj(d_z f) and B = d_zbar f:
//   D(z)^2 = ||A||^2 + ||B||^2 + gradient_term_scale(f, z)^2.
// The term-scale part keeps the normalized residuals continuous at points
// where both gradients vanish (Sing f), which the local solver must reach.

struct MilnorResidual {
    double residual = 0;  ///< min over theta, lambda of ||lambda z - w(theta)||^2 / D^2
    double theta = 0;     ///< optimal mu = e^{i theta}
    double lambda = 0;
};

/**
 * M(f) residual, w(theta) = e^{i theta} A + e^{-i theta} B. Minimized over
 * theta in closed form: the projection of w onto z-perp is linear in
 * (cos theta, sin theta), so the minimum is the smaller eigenvalue of a 2x2
 * Gram matrix. Throws ZeroVector for z = 0.
 */
MilnorResidual milnor_residual(const MixedPolynomial& f, std::span<const Complex> z);

/// The same minimum by a 256-point theta grid plus golden-section
/// refinement; slower, kept as an independent check.
MilnorResidual milnor_residual_grid(const MixedPolynomial& f, std::span<const Complex> z);

struct PhiMilnorResidual {
    double residual = 0;  ///< ||G - lambda z||^2 / (|f| D)^2
    double lambda = 0;    ///< Re<G, z> / ||z||^2
};

/// G = i conj(f) B - i f A. Throws ZeroVector, OnZeroLocus.
PhiMilnorResidual phi_milnor_residual(const MixedPolynomial& f, std::span<const Complex> z);

/// ||conj(f) B - f A||^2 / (|f| D)^2. Throws ZeroVector, OnZeroLocus.
double sing_phi_residual(const MixedPolynomial& f, std::span<const Complex> z);

struct FrameVectors {
    ComplexVector v1;  ///< conj(d_z log f) + d_zbar log f
    ComplexVector v2;  ///< i (conj(d_z log f) - d_zbar log f)
    ComplexVector at;
    Complex f_value;
};

/// Throws OnZeroLocus.
FrameVectors frame_vectors(const MixedPolynomial& f, std::span<const Complex> z);

enum class FrameKind { Independent, Dependent, OnSingPhi };
const char* to_string(FrameKind kind);

struct FrameClassification {
    FrameKind kind = FrameKind::Independent;
    double a = 0;  ///< z = a v1 + b v2 when Dependent
    double b = 0;
    std::vector<double> singular_values;  ///< of the normalized columns (z, v1, v2)
};

/// Real-linear (in)dependence of {z, v1, v2} in R^{2n}. Throws OnZeroLocus.
FrameClassification frame_classification(const MixedPolynomial& f, std::span<const Complex> z, double tol = 1e-9);

enum class ValueKind { SPhi, SF };
const char* to_string(ValueKind kind);

struct EstimatorOptions {
    std::vector<double> radii{1e1, 1e2, 1e3, 1e4, 1e5};
    std::size_t starts_per_radius = 64;  ///< S(f) runs this many more on Sing f
    double tol = 1e-8;
    double tol_cluster = 1e-3;
    double divergence = 1e6;            ///< S(f): |f| beyond this escapes
    double finite_relative_change = 1e-2;
    std::uint64_t seed = 1;
};

struct Solution {
    ComplexVector z;
    Complex value;  ///< phi(z) or f(z)
    double residual = 0;
};

struct ValueCluster {
    Complex center;
    double spread = 0;
    std::size_t member_count = 0;
};

struct RadiusRecord {
    double radius = 0;
    std::size_t starts = 0;
    std::vector<Solution> solutions;  ///< accepted, in start order
    std::size_t escaping = 0;         ///< S(f) only: |f| beyond the divergence threshold
    std::vector<ValueCluster> clusters;
    double best_residual = 0;
};

struct AcceptedCluster {
    Complex center;
    std::size_t member_count = 0;  ///< at the last radius
    std::vector<std::pair<double, double>> spread_per_radius;  ///< (R, spread)
    std::vector<std::pair<double, Complex>> center_per_radius;
};

struct CircleValueClusterSet {
    ValueKind kind = ValueKind::SPhi;
    std::vector<double> radii_schedule;
    std::vector<RadiusRecord> per_radius;
    std::vector<AcceptedCluster> clusters;
    /// Solutions found at every radius (evidence that M(phi) or M(f) is unbounded).
    bool solutions_at_every_radius = false;
    /// Real-valued f up to a unit constant: phi is locally constant and the
    /// phi machinery is vacuous.
    bool degenerate_phi = false;
    std::string diagnosis;
    EstimatorOptions options;
};

/**
 * Multistart minimization of the phi-Milnor (S_phi) or Milnor (S_f)
 * residual on spheres of the scheduled radii, clustering of the values at
 * accepted solutions, and tracking of the clusters across radii.
 */
CircleValueClusterSet estimate_asymptotic_values(const MixedPolynomial& f, ValueKind kind,
                                                 const EstimatorOptions& options = {});

/// Exact test: f = c * g with g real-valued and c a nonzero constant.
bool is_real_valued_up_to_phase(const MixedPolynomial& f);

enum class HypothesisStatus { Exact, Heuristic, Refuted, NotEvaluated };
const char* to_string(HypothesisStatus status);

struct Hypothesis {
    std::string name;
    HypothesisStatus status = HypothesisStatus::NotEvaluated;
    bool holds = false;
    std::string note;
};

struct StrictlyBadFaceValues {
    std::vector<LatticePoint> lattice_points;
    std::string restriction;
    std::vector<Complex> values;  ///< phi_Delta at accepted Sing phi_Delta points
    std::size_t trials = 0;
    double best_residual = 0;
};

struct StrictlyBadSuperset {
    std::vector<StrictlyBadFaceValues> faces;
    std::vector<ValueCluster> values;  ///< union over faces, clustered on S^1
    std::vector<Hypothesis> hypotheses;
};

struct SupersetContext {
    /// Aggregate of the strong non-degeneracy classification, when known.
    std::optional<Aggregate> strong;
    /// S(f) estimate used for the 0 not in S(f) hypothesis, when known.
    const CircleValueClusterSet* s_f = nullptr;
};

/**
 * Values of phi_Delta on Sing phi_Delta over the strictly bad faces, which
 * bound S(phi) under the effectivity / f(0) = 0 / 0 not in S(f) / strong
 * non-degeneracy hypotheses. Hypotheses are evaluated and attached, never
 * assumed.
 */
StrictlyBadSuperset strictly_bad_superset(const MixedPolynomial& f, const SearchOptions& search,
                                          const SupersetContext& context = {}, double tol_cluster = 1e-3);

struct FlowSample {
    double t = 0;
    ComplexVector z;
    double f_abs = 0;
    double f_arg = 0;
    double norm = 0;
};

enum class FlowStop { Radius, Modulus };
enum class FlowTermination { RadiusReached, ModulusReached, StepFailure };
const char* to_string(FlowTermination termination);

struct FlowOptions {
    FlowStop stop = FlowStop::Radius;
    double target = 10;
    double initial_step = 1e-2;
    double min_step = 1e-12;
    double rk_tol = 1e-10;  ///< local error per unit step
    double arg_tol = 1e-6;  ///< allowed arg f drift per unit growth of ||z||
    std::size_t max_steps = 100000;
};

struct FlowPath {
    std::vector<FlowSample> samples;
    ComplexVector start;
    FlowTermination terminated_at = FlowTermination::StepFailure;
    std::size_t fallback_steps = 0;  ///< steps where the primary field was infeasible
};

/**
 * Integral curve of a field w with Re<w, v2> = 0, Re<w, v1> > 0 and
 * Re<w, z> > 0, normalized so that ||z|| grows at unit speed, integrated by
 * Dormand-Prince 5(4) with an arg f corrector. Throws OnZeroLocus at a bad
 * start, FieldConstructionFailed when no admissible w exists.
 */
FlowPath trace_flow(const MixedPolynomial& f, std::span<const Complex> z0, const FlowOptions& options);

nlohmann::ordered_json to_json(const CircleValueClusterSet& set);
nlohmann::ordered_json to_json(const StrictlyBadSuperset& superset);
nlohmann::ordered_json to_json(const Hypothesis& hypothesis);
nlohmann::ordered_json to_json(const FlowPath& path);
nlohmann::ordered_json to_json(const FrameClassification& frame);

} // namespace mixinf

#endif
