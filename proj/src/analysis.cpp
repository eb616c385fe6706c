#include "mixinf/analysis.hpp"

#include "mixinf/error.hpp"
#include "mixinf/parser.hpp"
#include "mixinf/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace mixinf {

namespace {

constexpr const char* module_name = "cli";

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_setting(const std::string& key, const std::string& value, const std::string& why)
{
    throw Error(ErrorKind::InvalidArgument, module_name, "setting " + key + " = '" + value + "': " + why);
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        bad_setting(key, value, "not a number");
    }
    if (used != value.size() || !std::isfinite(v))
        bad_setting(key, value, "not a number");
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& value)
{
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        bad_setting(key, value, "not a natural number");
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        bad_setting(key, value, "out of range");
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "on" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "off" || value == "no")
        return false;
    bad_setting(key, value, "expected true or false");
}

} // namespace

EstimatorOptions AnalysisConfig::estimator() const
{
    EstimatorOptions o;
    o.radii = radii;
    o.starts_per_radius = starts_per_radius;
    o.tol = tol;
    o.tol_cluster = tol_cluster;
    o.divergence = divergence;
    o.seed = seed;
    return o;
}

ClassifyOptions AnalysisConfig::classify_options() const
{
    ClassifyOptions o;
    o.search = search();
    o.with_coordinate_restrictions = with_coordinate_restrictions;
    o.max_restriction_vars = max_restriction_vars;
    return o;
}

void apply_setting(AnalysisConfig& c, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "seed") {
        c.seed = parse_count(key, value);
    } else if (key == "trials") {
        c.trials = parse_count(key, value);
        if (c.trials == 0)
            bad_setting(key, value, "must be at least 1");
    } else if (key == "tol") {
        c.tol = parse_double(key, value);
        if (c.tol <= 0)
            bad_setting(key, value, "must be positive");
    } else if (key == "box_log_radius") {
        c.box_log_radius = parse_double(key, value);
        if (c.box_log_radius <= 0)
            bad_setting(key, value, "must be positive");
    } else if (key == "radii") {
        std::vector<double> radii;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            radii.push_back(parse_double(key, trim(item)));
        if (radii.empty() || std::any_of(radii.begin(), radii.end(), [](double r) { return r <= 0; }) ||
            !std::is_sorted(radii.begin(), radii.end()))
            bad_setting(key, value, "expected an increasing list of positive radii");
        c.radii = std::move(radii);
    } else if (key == "starts_per_radius") {
        c.starts_per_radius = parse_count(key, value);
        if (c.starts_per_radius == 0)
            bad_setting(key, value, "must be at least 1");
    } else if (key == "tol_cluster") {
        c.tol_cluster = parse_double(key, value);
        if (c.tol_cluster <= 0)
            bad_setting(key, value, "must be positive");
    } else if (key == "divergence") {
        c.divergence = parse_double(key, value);
    } else if (key == "scope") {
        if (value == "gamma_plus")
            c.scopes = {FaceScope::GammaPlus};
        else if (value == "all_support_hull_faces")
            c.scopes = {FaceScope::AllSupportHullFaces};
        else if (value == "both")
            c.scopes = {FaceScope::GammaPlus, FaceScope::AllSupportHullFaces};
        else
            bad_setting(key, value, "expected gamma_plus, all_support_hull_faces or both");
    } else if (key == "mode") {
        if (value == "nondegenerate")
            c.modes = {NondegeneracyMode::Nondegenerate};
        else if (value == "strongly_nondegenerate")
            c.modes = {NondegeneracyMode::StronglyNondegenerate};
        else if (value == "both")
            c.modes = {NondegeneracyMode::StronglyNondegenerate, NondegeneracyMode::Nondegenerate};
        else
            bad_setting(key, value, "expected nondegenerate, strongly_nondegenerate or both");
    } else if (key == "restrictions") {
        c.with_coordinate_restrictions = parse_bool(key, value);
    } else if (key == "max_restriction_vars") {
        c.max_restriction_vars = parse_count(key, value);
    } else if (key == "flow_paths") {
        c.flow_paths = parse_count(key, value);
    } else if (key == "flow_start_radius") {
        c.flow_start_radius = parse_double(key, value);
    } else if (key == "flow_radius") {
        c.flow_radius = parse_double(key, value);
    } else {
        throw Error(ErrorKind::InvalidArgument, module_name, "unknown setting '" + key + "'");
    }
}

AnalysisConfig read_config_file(const std::filesystem::path& path, AnalysisConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IoError, module_name, "cannot read config file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument, module_name, "config line without '=': " + trim(line));
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

nlohmann::ordered_json to_json(const AnalysisConfig& c)
{
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    j["tol"] = c.tol;
    j["box_log_radius"] = c.box_log_radius;
    j["radii"] = c.radii;
    j["starts_per_radius"] = c.starts_per_radius;
    j["tol_cluster"] = c.tol_cluster;
    j["divergence"] = c.divergence;
    auto modes = nlohmann::ordered_json::array();
    for (auto m : c.modes)
        modes.push_back(to_string(m));
    j["modes"] = modes;
    auto scopes = nlohmann::ordered_json::array();
    for (auto s : c.scopes)
        scopes.push_back(to_string(s));
    j["scopes"] = scopes;
    j["restrictions"] = c.with_coordinate_restrictions;
    j["max_restriction_vars"] = c.max_restriction_vars;
    j["flow_paths"] = c.flow_paths;
    if (c.flow_paths > 0) {
        j["flow_start_radius"] = c.flow_start_radius;
        j["flow_radius"] = c.flow_radius;
    }
    return j;
}

bool FibrationVerdict::has(const std::string& id) const
{
    return std::any_of(clauses.begin(), clauses.end(), [&](const VerdictClause& c) { return c.id == id; });
}

FibrationVerdict fibration_verdict(const HypothesisLedger& ledger)
{
    auto missing = [](const char* field) {
        throw Error(ErrorKind::IncompleteLedger, module_name, std::string("ledger field '") + field + "' is unset");
    };
    if (!ledger.real_valued)
        missing("real_valued");
    if (!ledger.strong)
        missing("strong");
    if (!ledger.convenient)
        missing("convenient");
    if (!ledger.f0_zero)
        missing("f0_zero");
    if (!ledger.effective)
        missing("effective");
    if (!ledger.zero_not_in_sf)
        missing("zero_not_in_sf");
    if (!ledger.s_phi_nonempty)
        missing("s_phi_nonempty");

    FibrationVerdict v;
    if (*ledger.real_valued) {
        v.clauses.push_back({"out_of_scope", HypothesisStatus::Exact,
                             "f is real-valued up to a constant phase, so f/|f| is locally constant off V(f); "
                             "the fibration statements do not apply",
                             {}});
        v.summary = "out of scope";
        return v;
    }
    if (*ledger.strong == Aggregate::Refuted) {
        VerdictClause a{"no_claim", HypothesisStatus::Refuted,
                        "Newton strong non-degeneracy at infinity is refuted by a singular witness; no fibration "
                        "claim is made, see the S(phi) estimate",
                        {}};
        if (*ledger.s_phi_nonempty)
            a.statement += ". The S(phi) estimate is nonempty: as in the known semitame example, S(f) in {0} "
                           "alone does not give the fibration f/|f| at infinity for mixed polynomials, and strong "
                           "non-degeneracy cannot be weakened to plain non-degeneracy";
        v.clauses.push_back(std::move(a));
        v.summary = "hypotheses refuted; no fibration claim";
        return v;
    }

    v.clauses.push_back({"sphere_fibration", HypothesisStatus::Heuristic,
                         "for large R and small delta, f/|f| : S_R \\ f^-1(D_delta) -> S^1 is a locally trivial "
                         "fibration, equivalent to f : f^-1(S^1_delta) -> S^1_delta",
                         {}});
    v.summary = "fibration at infinity (heuristic)";
    if (*ledger.convenient) {
        v.clauses.push_back({"milnor_fibration_at_infinity", HypothesisStatus::Heuristic,
                             "f is convenient: the Milnor fibration at infinity f/|f| : S_R \\ K -> S^1 exists, "
                             "K = S_R cap f^-1(0) the link at infinity",
                             {}});
        v.summary = "Milnor fibration at infinity (heuristic)";
    }
    if (*ledger.f0_zero && *ledger.effective && *ledger.zero_not_in_sf == HypothesisStatus::Heuristic) {
        if (!ledger.strictly_bad_values)
            missing("strictly_bad_values");
        VerdictClause d{"strictly_bad_bound", HypothesisStatus::Heuristic,
                        "S(phi) is contained in the union over strictly bad faces D of phi_D(Sing phi_D cap "
                        "(C*)^n)",
                        {}};
        for (const auto& c : *ledger.strictly_bad_values)
            d.values.push_back(c.center);
        if (d.values.empty())
            d.statement += "; no strictly bad face yields a value, so S(phi) is empty";
        v.clauses.push_back(std::move(d));
    }
    return v;
}

nlohmann::ordered_json to_json(const FibrationVerdict& v)
{
    nlohmann::ordered_json j;
    j["summary"] = v.summary;
    auto clauses = nlohmann::ordered_json::array();
    for (const auto& c : v.clauses) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["status"] = to_string(c.status);
        cj["statement"] = c.statement;
        if (c.id == "strictly_bad_bound")
            cj["values"] = complex_vector_json(c.values);
        clauses.push_back(cj);
    }
    j["clauses"] = clauses;
    return j;
}

const NonDegeneracyVerdict* AnalysisReport::find(NondegeneracyMode mode, FaceScope scope) const
{
    for (const auto& v : nondegeneracy)
        if (v.mode == mode && v.scope == scope)
            return &v;
    return nullptr;
}

AnalysisReport analyze(const MixedPolynomial& f, const AnalysisConfig& config, const std::string& source)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, module_name, "the input is the zero polynomial");
    if (f.is_constant())
        throw Error(ErrorKind::InvalidArgument, module_name, "the input is constant");

    AnalysisReport r;
    r.source = source;
    r.f = f;
    r.config = config;
    r.support = support(f);
    r.convenient = is_convenient(f);
    r.f0_zero = f.constant_term().is_zero();
    r.effective = effective_variables(f);
    r.newton = newton_polyhedron(f);
    r.support_hull = support_hull(f);
    r.radial = radial_type(f);
    r.polar = polar_type(f);

    std::vector<FaceScope> scopes = config.scopes;
    for (auto s : {FaceScope::GammaPlus, FaceScope::AllSupportHullFaces})
        if (std::find(scopes.begin(), scopes.end(), s) == scopes.end())
            scopes.push_back(s);
    std::vector<NondegeneracyMode> modes = config.modes;
    if (std::find(modes.begin(), modes.end(), NondegeneracyMode::StronglyNondegenerate) == modes.end())
        modes.insert(modes.begin(), NondegeneracyMode::StronglyNondegenerate);
    const auto classify_opts = config.classify_options();
    for (auto mode : modes)
        for (auto scope : scopes) {
            // Strong mode is always needed for the verdict under both readings.
            const bool wanted = std::find(config.scopes.begin(), config.scopes.end(), scope) != config.scopes.end();
            if (!wanted && mode != NondegeneracyMode::StronglyNondegenerate)
                continue;
            r.nondegeneracy.push_back(classify(f, mode, scope, classify_opts));
        }

    const auto estimator = config.estimator();
    r.s_f = estimate_asymptotic_values(f, ValueKind::SF, estimator);
    r.s_phi = estimate_asymptotic_values(f, ValueKind::SPhi, estimator);

    const bool real_valued = is_real_valued_up_to_phase(f);
    const auto* strong_plus = r.find(NondegeneracyMode::StronglyNondegenerate, FaceScope::GammaPlus);
    const auto* strong_all = r.find(NondegeneracyMode::StronglyNondegenerate, FaceScope::AllSupportHullFaces);
    SupersetContext context;
    context.strong = strong_plus->aggregate;
    context.s_f = &r.s_f;
    r.superset = strictly_bad_superset(f, config.search(), context, config.tol_cluster);

    auto ledger_for = [&](const NonDegeneracyVerdict* strong) {
        HypothesisLedger l;
        l.real_valued = real_valued;
        l.strong = strong->aggregate;
        l.convenient = r.convenient;
        l.f0_zero = r.f0_zero;
        l.effective = r.effective.size() == f.n_vars();
        l.zero_not_in_sf = r.superset->hypotheses[2].status;
        l.s_phi_nonempty = !r.s_phi.clusters.empty();
        l.strictly_bad_values = r.superset->values;
        return l;
    };
    r.ledger_gamma_plus = ledger_for(strong_plus);
    r.ledger_all_faces = ledger_for(strong_all);
    r.verdict = fibration_verdict(r.ledger_gamma_plus);
    r.verdict_all_faces = fibration_verdict(r.ledger_all_faces);

    if (config.flow_paths > 0) {
        Rng rng(derive_seed(config.seed, hash_string("flow")));
        FlowOptions fo;
        fo.stop = FlowStop::Radius;
        fo.target = config.flow_radius;
        const std::size_t n = f.n_vars();
        for (std::size_t k = 0; k < config.flow_paths; ++k) {
            FlowRun run;
            for (int attempt = 0; attempt < 100; ++attempt) {
                ComplexVector z(n);
                double nn = 0;
                for (auto& zi : z) {
                    zi = Complex(rng.normal(), rng.normal());
                    nn += std::norm(zi);
                }
                for (auto& zi : z)
                    zi *= config.flow_start_radius / std::sqrt(nn);
                run.start = z;
                if (std::abs(evaluate(f, z)) > 1e-3 * (1 + term_scale(f, z)))
                    break;
            }
            try {
                run.path = trace_flow(f, run.start, fo);
            } catch (const Error& e) {
                run.error = e.what();
            }
            r.flows.push_back(std::move(run));
        }
    }
    return r;
}

AnalysisReport analyze(const std::filesystem::path& input, const AnalysisConfig& config)
{
    return analyze(read_mpoly_file(input.string()), config, input.filename().string());
}

nlohmann::ordered_json homogeneity_json(const MixedPolynomial& f, std::uint64_t seed)
{
    auto one = [&](const std::optional<HomogeneityType>& t) -> nlohmann::ordered_json {
        if (!t)
            return nullptr;
        nlohmann::ordered_json j;
        j["weights"] = t->weights;
        j["degree"] = t->degree;
        j["unique"] = t->unique;
        j["verify_scaling_residual"] = verify_scaling(f, *t, 100, seed);
        return j;
    };
    nlohmann::ordered_json j;
    j["radial"] = one(radial_type(f));
    j["polar"] = one(polar_type(f));
    return j;
}

nlohmann::ordered_json to_json(const AnalysisReport& r)
{
    nlohmann::ordered_json j;
    j["schema"] = report_schema_version;
    j["input"] = {{"source", r.source},
                  {"polynomial", to_string(r.f)},
                  {"n_vars", r.f.n_vars()},
                  {"terms", r.f.terms().size()}};
    j["config"] = to_json(r.config);
    auto supp = nlohmann::ordered_json::array();
    for (const auto& p : r.support.points)
        supp.push_back(p);
    j["support"] = supp;
    j["convenient"] = r.convenient;
    j["f0_zero"] = r.f0_zero;
    auto eff = nlohmann::ordered_json::array();
    for (auto i : r.effective)
        eff.push_back(i + 1);
    j["effective_variables"] = eff;
    j["newton_polyhedron"] = to_json(r.newton);
    j["support_hull"] = r.support_hull ? to_json(*r.support_hull) : nlohmann::ordered_json(nullptr);
    j["homogeneity"] = homogeneity_json(r.f, r.config.seed);
    auto nd = nlohmann::ordered_json::array();
    for (const auto& v : r.nondegeneracy)
        nd.push_back(to_json(v));
    j["nondegeneracy"] = nd;
    j["s_f"] = to_json(r.s_f);
    j["s_phi"] = to_json(r.s_phi);
    j["strictly_bad_superset"] = r.superset ? to_json(*r.superset) : nlohmann::ordered_json(nullptr);
    auto ledger = [](const HypothesisLedger& l) {
        nlohmann::ordered_json lj;
        lj["real_valued"] = *l.real_valued;
        lj["strong"] = to_string(*l.strong);
        lj["convenient"] = *l.convenient;
        lj["f0_zero"] = *l.f0_zero;
        lj["effective"] = *l.effective;
        lj["zero_not_in_sf"] = to_string(*l.zero_not_in_sf);
        lj["s_phi_nonempty"] = *l.s_phi_nonempty;
        return lj;
    };
    j["ledger"] = {{"gamma_plus", ledger(r.ledger_gamma_plus)}, {"all_support_hull_faces", ledger(r.ledger_all_faces)}};
    j["fibration_verdict"] = to_json(r.verdict);
    j["fibration_verdict_all_support_hull_faces"] = to_json(r.verdict_all_faces);
    auto flows = nlohmann::ordered_json::array();
    for (const auto& run : r.flows) {
        if (run.path) {
            flows.push_back(to_json(*run.path));
        } else {
            flows.push_back({{"start", complex_vector_json(run.start)}, {"error", run.error}});
        }
    }
    j["flows"] = flows;
    j["note"] = "Non-degeneracy and the S(f), S(phi) sets are estimated by seeded multistart search: a witness "
                "refutes, absence of one is evidence only. Statuses say which claims are exact and which heuristic.";
    return j;
}

namespace {

std::string complex_text(Complex c)
{
    std::ostringstream os;
    os << std::setprecision(6) << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
    return os.str();
}

} // namespace

std::string to_text(const AnalysisReport& r)
{
    std::ostringstream os;
    os << "f = " << to_string(r.f) << "  (n = " << r.f.n_vars() << ")\n";
    os << "support:";
    for (const auto& p : r.support.points) {
        os << " (";
        for (std::size_t i = 0; i < p.size(); ++i)
            os << (i ? "," : "") << p[i];
        os << ")";
    }
    os << "\nconvenient: " << (r.convenient ? "yes" : "no") << "   f(0) = 0: " << (r.f0_zero ? "yes" : "no")
       << "   effective variables: " << r.effective.size() << "/" << r.f.n_vars() << "\n";
    auto type_text = [](const std::optional<HomogeneityType>& t) {
        if (!t)
            return std::string("none");
        std::ostringstream s;
        s << "weights (";
        for (std::size_t i = 0; i < t->weights.size(); ++i)
            s << (i ? "," : "") << t->weights[i];
        s << "), degree " << t->degree << (t->unique ? "" : " (not unique)");
        return s.str();
    };
    os << "radial type: " << type_text(r.radial) << "\npolar type: " << type_text(r.polar) << "\n";
    os << "Gamma^+ faces: ";
    std::size_t count = 0;
    for (const auto& face : r.newton.faces)
        count += face.flags.at_infinity;
    os << count << "\n";
    if (r.support_hull) {
        std::size_t bad = 0, strict = 0;
        for (const auto& face : r.support_hull->faces) {
            bad += face.flags.bad;
            strict += face.flags.strictly_bad;
        }
        os << "support hull faces: " << r.support_hull->faces.size() << ", bad: " << bad << ", strictly bad: " << strict
           << "\n";
    }
    for (const auto& v : r.nondegeneracy) {
        os << "non-degeneracy [" << to_string(v.mode) << ", " << to_string(v.scope) << "]: " << to_string(v.aggregate);
        if (v.refuting_face)
            os << " by witness on " << v.faces[*v.refuting_face].face_id;
        else
            os << " (no witness in " << v.search.trials << " trials per face; evidence only)";
        os << "\n";
    }
    auto sets = [&](const CircleValueClusterSet& s) {
        os << to_string(s.kind) << ": ";
        if (s.degenerate_phi) {
            os << "degenerate (" << s.diagnosis << ")\n";
            return;
        }
        if (s.clusters.empty())
            os << "no settled values";
        for (std::size_t k = 0; k < s.clusters.size(); ++k)
            os << (k ? ", " : "") << complex_text(s.clusters[k].center);
        os << "; solutions at every radius: " << (s.solutions_at_every_radius ? "yes" : "no") << "\n";
    };
    sets(r.s_f);
    sets(r.s_phi);
    if (r.superset) {
        os << "strictly bad faces: " << r.superset->faces.size() << ", values:";
        for (const auto& c : r.superset->values)
            os << " " << complex_text(c.center);
        os << "\n";
        for (const auto& h : r.superset->hypotheses)
            os << "  hypothesis '" << h.name << "': " << to_string(h.status) << "\n";
    }
    auto verdict = [&](const char* label, const FibrationVerdict& v) {
        os << "verdict (" << label << "): " << v.summary << "\n";
        for (const auto& c : v.clauses) {
            os << "  [" << to_string(c.status) << "] " << c.id << ": " << c.statement;
            if (!c.values.empty()) {
                os << " =";
                for (auto x : c.values)
                    os << " " << complex_text(x);
            }
            os << "\n";
        }
    };
    verdict("Gamma^+ faces", r.verdict);
    verdict("all support-hull faces", r.verdict_all_faces);
    for (std::size_t k = 0; k < r.flows.size(); ++k) {
        const auto& run = r.flows[k];
        os << "flow " << k << ": ";
        if (run.path)
            os << to_string(run.path->terminated_at) << " after " << run.path->samples.size() - 1 << " steps\n";
        else
            os << "failed: " << run.error << "\n";
    }
    return os.str();
}

void write_flow_csv(const FlowPath& path, const std::filesystem::path& file)
{
    std::ofstream out(file);
    if (!out)
        throw Error(ErrorKind::IoError, module_name, "cannot write " + file.string());
    const std::size_t n = path.start.size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i)
        out << ",re_z" << i;
    for (std::size_t i = 1; i <= n; ++i)
        out << ",im_z" << i;
    out << ",abs_f,arg_f,norm_z\n";
    out << std::setprecision(17);
    for (const auto& s : path.samples) {
        out << s.t;
        for (auto z : s.z)
            out << ',' << z.real();
        for (auto z : s.z)
            out << ',' << z.imag();
        out << ',' << s.f_abs << ',' << s.f_arg << ',' << s.norm << '\n';
    }
}

std::string circle_svg(const std::vector<Complex>& marks)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"240\" height=\"240\" viewBox=\"-120 -120 240 240\">\n";
    os << "  <line x1=\"-110\" y1=\"0\" x2=\"110\" y2=\"0\" stroke=\"#bbb\"/>\n";
    os << "  <line x1=\"0\" y1=\"-110\" x2=\"0\" y2=\"110\" stroke=\"#bbb\"/>\n";
    os << "  <circle cx=\"0\" cy=\"0\" r=\"100\" fill=\"none\" stroke=\"black\"/>\n";
    for (auto c : marks) {
        const double a = std::arg(c);
        os << "  <circle class=\"value\" cx=\"" << 100 * std::cos(a) << "\" cy=\"" << -100 * std::sin(a)
           << "\" r=\"4\" fill=\"red\"><title>" << std::setprecision(4) << a * 180 / std::numbers::pi
           << " deg</title></circle>\n"
           << std::setprecision(3);
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<std::filesystem::path> emit_plots(const AnalysisReport& r, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::IoError, module_name, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;

    const auto csv_path = dir / "sphi_clusters.csv";
    {
        std::ofstream out(csv_path);
        if (!out)
            throw Error(ErrorKind::IoError, module_name, "cannot write " + csv_path.string());
        out << "radius,center_re,center_im,angle_deg,spread,member_count\n" << std::setprecision(17);
        for (const auto& rec : r.s_phi.per_radius)
            for (const auto& c : rec.clusters)
                out << rec.radius << ',' << c.center.real() << ',' << c.center.imag() << ','
                    << std::arg(c.center) * 180 / std::numbers::pi << ',' << c.spread << ',' << c.member_count << '\n';
    }
    written.push_back(csv_path);

    const auto svg_path = dir / "sphi_circle.svg";
    {
        std::ofstream out(svg_path);
        if (!out)
            throw Error(ErrorKind::IoError, module_name, "cannot write " + svg_path.string());
        std::vector<Complex> marks;
        for (const auto& c : r.s_phi.clusters)
            marks.push_back(c.center);
        out << circle_svg(marks);
    }
    written.push_back(svg_path);

    for (std::size_t k = 0; k < r.flows.size(); ++k) {
        if (!r.flows[k].path)
            continue;
        const auto p = dir / ("flow_" + std::to_string(k) + ".csv");
        write_flow_csv(*r.flows[k].path, p);
        written.push_back(p);
    }
    return written;
}

} // namespace mixinf
