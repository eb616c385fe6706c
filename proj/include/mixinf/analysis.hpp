#ifndef MIXINF_ANALYSIS_HPP
#define MIXINF_ANALYSIS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixinf/atinfinity.hpp"
#include "mixinf/homogeneity.hpp"
#include "mixinf/mixed_polynomial.hpp"
#include "mixinf/newton.hpp"
#include "mixinf/nondegen.hpp"

namespace mixinf {

inline constexpr int report_schema_version = 1;

struct AnalysisConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 64;
    double tol = 1e-8;
    double box_log_radius = 3;
    std::vector<double> radii{1e1, 1e2, 1e3, 1e4, 1e5};
    std::size_t starts_per_radius = 64;
    double tol_cluster = 1e-3;
    double divergence = 1e6;
    std::vector<NondegeneracyMode> modes{NondegeneracyMode::StronglyNondegenerate, NondegeneracyMode::Nondegenerate};
    std::vector<FaceScope> scopes{FaceScope::GammaPlus, FaceScope::AllSupportHullFaces};
    bool with_coordinate_restrictions = true;
    std::size_t max_restriction_vars = 6;
    std::size_t flow_paths = 0;  ///< traced paths in analyze
    double flow_start_radius = 2;
    double flow_radius = 50;

    SearchOptions search() const { return {trials, tol, box_log_radius, seed}; }
    EstimatorOptions estimator() const;
    ClassifyOptions classify_options() const;
};

/// Applies one "key = value" setting. Throws InvalidArgument.
void apply_setting(AnalysisConfig& config, const std::string& key, const std::string& value);

/// Reads key = value lines ('#' starts a comment). Throws IoError or
/// InvalidArgument.
AnalysisConfig read_config_file(const std::filesystem::path& path, AnalysisConfig base = {});

nlohmann::ordered_json to_json(const AnalysisConfig& config);

/// What the verdict logic needs; every field must be set.
struct HypothesisLedger {
    std::optional<bool> real_valued;
    std::optional<Aggregate> strong;  ///< strong non-degeneracy for the chosen face scope
    std::optional<bool> convenient;
    std::optional<bool> f0_zero;
    std::optional<bool> effective;
    std::optional<HypothesisStatus> zero_not_in_sf;  ///< Heuristic when it holds
    std::optional<bool> s_phi_nonempty;
    /// Clustered values of the strictly-bad bound; needed only when that
    /// clause applies.
    std::optional<std::vector<ValueCluster>> strictly_bad_values;
};

struct VerdictClause {
    std::string id;
    HypothesisStatus status = HypothesisStatus::Heuristic;
    std::string statement;
    std::vector<Complex> values;  ///< strictly-bad bound only
};

struct FibrationVerdict {
    std::vector<VerdictClause> clauses;
    std::string summary;

    bool has(const std::string& id) const;
};

/// Decision tree over the ledger. Throws IncompleteLedger.
FibrationVerdict fibration_verdict(const HypothesisLedger& ledger);

nlohmann::ordered_json to_json(const FibrationVerdict& verdict);

struct FlowRun {
    std::optional<FlowPath> path;
    ComplexVector start;
    std::string error;
};

struct AnalysisReport {
    std::string source;
    MixedPolynomial f;
    AnalysisConfig config;
    SupportSet support;
    bool convenient = false;
    bool f0_zero = false;
    std::vector<std::size_t> effective;
    FaceLattice newton;
    std::optional<FaceLattice> support_hull;
    std::optional<HomogeneityType> radial;
    std::optional<HomogeneityType> polar;
    std::vector<NonDegeneracyVerdict> nondegeneracy;
    CircleValueClusterSet s_f;
    CircleValueClusterSet s_phi;
    std::optional<StrictlyBadSuperset> superset;
    HypothesisLedger ledger_gamma_plus;
    HypothesisLedger ledger_all_faces;
    FibrationVerdict verdict;            ///< Gamma^+ reading
    FibrationVerdict verdict_all_faces;  ///< all support-hull faces reading
    std::vector<FlowRun> flows;

    const NonDegeneracyVerdict* find(NondegeneracyMode mode, FaceScope scope) const;
};

/// Full pipeline; deterministic given config.seed. Throws ZeroPolynomial or
/// InvalidArgument for constant input.
AnalysisReport analyze(const MixedPolynomial& f, const AnalysisConfig& config, const std::string& source = "");
AnalysisReport analyze(const std::filesystem::path& input, const AnalysisConfig& config);

nlohmann::ordered_json to_json(const AnalysisReport& report);
std::string to_text(const AnalysisReport& report);

// Pieces of the report, shared with the single-stage subcommands.
nlohmann::ordered_json homogeneity_json(const MixedPolynomial& f, std::uint64_t seed);

/// Writes sphi_clusters.csv, sphi_circle.svg and flow_<k>.csv into dir.
/// Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_plots(const AnalysisReport& report, const std::filesystem::path& dir);

void write_flow_csv(const FlowPath& path, const std::filesystem::path& file);
std::string circle_svg(const std::vector<Complex>& marks);

} // namespace mixinf

#endif
