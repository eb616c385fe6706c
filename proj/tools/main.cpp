#include "mixinf/analysis.hpp"
#include "mixinf/error.hpp"
#include "mixinf/parser.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace mixinf;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_input_error = 2;
constexpr int exit_numeric_failure = 3;

struct Common {
    std::string input;
    bool json_output = false;
    bool text_output = false;
    std::string config_path;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
};

void add_common(CLI::App* cmd, Common& c, bool with_config)
{
    cmd->add_option("input", c.input, ".mpoly file")->required();
    auto* j = cmd->add_flag("--json", c.json_output, "JSON output");
    cmd->add_flag("--text", c.text_output, "plain text output (default)")->excludes(j);
    if (with_config) {
        cmd->add_option("--config", c.config_path, "key = value settings file");
        cmd->add_option("--set", c.settings, "override one setting, key=value");
        cmd->add_option("--seed", c.seed, "master seed");
        cmd->add_option("--trials", c.trials, "random starts per face search");
    }
}

AnalysisConfig load_config(const Common& c)
{
    AnalysisConfig config;
    if (!c.config_path.empty())
        config = read_config_file(c.config_path, config);
    for (const auto& s : c.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "cli", "--set expects key=value, got '" + s + "'");
        apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (c.seed)
        config.seed = *c.seed;
    if (c.trials) {
        if (*c.trials == 0)
            throw Error(ErrorKind::InvalidArgument, "cli", "--trials must be at least 1");
        config.trials = *c.trials;
    }
    return config;
}

void emit(const Common& c, const json& j, const std::string& text)
{
    if (c.json_output)
        std::cout << j.dump(2) << '\n';
    else
        std::cout << text;
}

std::string point_text(const LatticePoint& p)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i)
        os << (i ? "," : "") << p[i];
    os << ')';
    return os.str();
}

std::string lattice_text(const FaceLattice& lattice, bool show_bad)
{
    std::ostringstream os;
    for (const auto& face : lattice.faces) {
        os << "  dim " << face.dim << ":";
        for (const auto& p : face.vertex_subset)
            os << ' ' << point_text(p);
        if (face.flags.at_infinity)
            os << "  [at infinity]";
        if (show_bad && face.flags.strictly_bad)
            os << "  [strictly bad]";
        else if (show_bad && face.flags.bad)
            os << "  [bad]";
        os << '\n';
    }
    return os.str();
}

ComplexVector parse_start(const std::string& text, std::size_t n)
{
    ComplexVector z;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const MixedPolynomial c = parse_polynomial(item);
        if (!c.is_constant())
            throw Error(ErrorKind::InvalidArgument, "cli", "--start entry '" + item + "' is not a constant");
        const ComplexVector zeros(c.n_vars(), Complex(0, 0));
        z.push_back(evaluate(c, zeros));
    }
    if (z.size() != n)
        throw Error(ErrorKind::MismatchedArity, "cli",
                    "--start has " + std::to_string(z.size()) + " entries, the polynomial has " + std::to_string(n) +
                        " variables");
    return z;
}

int run(int argc, char** argv)
{
    CLI::App app{"Newton-boundary and at-infinity analysis of mixed polynomials"};
    app.require_subcommand(1);

    Common c;
    auto* parse_cmd = app.add_subcommand("parse", "parse and print the canonical form");
    add_common(parse_cmd, c, false);

    auto* newton_cmd = app.add_subcommand("newton", "Newton polyhedron, boundary at infinity and bad faces");
    add_common(newton_cmd, c, false);

    auto* homog_cmd = app.add_subcommand("homogeneity", "radial and polar weighted homogeneity");
    add_common(homog_cmd, c, true);

    auto* nondegen_cmd = app.add_subcommand("nondegen", "Newton (strong) non-degeneracy at infinity");
    add_common(nondegen_cmd, c, true);

    auto* atinf_cmd = app.add_subcommand("atinfinity", "estimate S(f) and S(phi)");
    add_common(atinf_cmd, c, true);

    auto* flow_cmd = app.add_subcommand("flow", "trace the fibration flow from a start point");
    add_common(flow_cmd, c, false);
    std::string start;
    std::optional<double> radius;
    std::optional<double> modulus;
    flow_cmd->add_option("--start", start, "comma-separated complex constants, e.g. 1+i,2")->required();
    auto* radius_opt = flow_cmd->add_option("--radius", radius, "stop at this |z|");
    flow_cmd->add_option("--modulus", modulus, "stop at this |f|")->excludes(radius_opt);
    std::string flow_csv;
    flow_cmd->add_option("--csv", flow_csv, "also write the sampled path as CSV");

    auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline with fibration verdict");
    add_common(analyze_cmd, c, true);
    std::string plots;
    analyze_cmd->add_option("--plots", plots, "directory for CSV/SVG output");
    std::optional<std::size_t> flows;
    analyze_cmd->add_option("--flows", flows, "number of flow paths to trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    const MixedPolynomial f = read_mpoly_file(c.input);

    if (parse_cmd->parsed()) {
        json j;
        j["n_vars"] = f.n_vars();
        j["polynomial"] = to_string(f);
        j["terms"] = f.terms().size();
        j["mpoly"] = to_mpoly(f);
        emit(c, j, to_mpoly(f) + "\n");
    } else if (newton_cmd->parsed()) {
        const auto poly = newton_polyhedron(f);
        json j;
        j["convenient"] = is_convenient(f);
        j["newton_polyhedron"] = to_json(poly);
        std::string text = std::string("convenient: ") + (is_convenient(f) ? "yes" : "no") +
                           "\nNewton polyhedron faces:\n" + lattice_text(poly, false);
        if (f.is_constant()) {
            j["support_hull"] = nullptr;
        } else {
            const auto hull = support_hull(f);
            j["support_hull"] = to_json(hull);
            text += "support hull faces:\n" + lattice_text(hull, true);
        }
        emit(c, j, text);
    } else if (homog_cmd->parsed()) {
        const auto config = load_config(c);
        const json j = homogeneity_json(f, config.seed);
        std::ostringstream os;
        for (const char* key : {"radial", "polar"}) {
            os << key << ": ";
            if (j[key].is_null()) {
                os << "none\n";
                continue;
            }
            os << "weights " << j[key]["weights"].dump() << ", degree " << j[key]["degree"].dump()
               << (j[key]["unique"].get<bool>() ? "" : " (not unique)") << ", scaling residual "
               << j[key]["verify_scaling_residual"].dump() << '\n';
        }
        emit(c, j, os.str());
    } else if (nondegen_cmd->parsed()) {
        const auto config = load_config(c);
        json j = json::array();
        std::ostringstream os;
        for (auto mode : config.modes)
            for (auto scope : config.scopes) {
                const auto v = classify(f, mode, scope, config.classify_options());
                j.push_back(to_json(v));
                os << to_string(mode) << " / " << to_string(scope) << ": " << to_string(v.aggregate);
                if (v.refuting_face)
                    os << " (witness on " << v.faces[*v.refuting_face].face_id << ")";
                os << '\n';
                for (const auto& face : v.faces)
                    os << "  " << face.face_id << "  " << to_string(face.status) << "  best residual "
                       << face.best_residual << '\n';
            }
        emit(c, j, os.str());
    } else if (atinf_cmd->parsed()) {
        const auto config = load_config(c);
        json j;
        std::ostringstream os;
        for (auto kind : {ValueKind::SF, ValueKind::SPhi}) {
            const auto set = estimate_asymptotic_values(f, kind, config.estimator());
            j[to_string(kind)] = to_json(set);
            os << to_string(kind) << ": ";
            if (set.degenerate_phi)
                os << "degenerate (" << set.diagnosis << ")";
            else if (set.clusters.empty())
                os << "no settled values";
            for (const auto& cl : set.clusters)
                os << complex_json(cl.center).dump() << ' ';
            os << (set.solutions_at_every_radius ? "; solutions at every radius" : "") << '\n';
        }
        emit(c, j, os.str());
    } else if (flow_cmd->parsed()) {
        FlowOptions options;
        if (modulus) {
            options.stop = FlowStop::Modulus;
            options.target = *modulus;
        } else if (radius) {
            options.target = *radius;
        }
        const auto path = trace_flow(f, parse_start(start, f.n_vars()), options);
        if (!flow_csv.empty())
            write_flow_csv(path, flow_csv);
        std::ostringstream os;
        const auto& last = path.samples.back();
        os << to_string(path.terminated_at) << " after " << path.samples.size() - 1 << " steps, |z| = " << last.norm
           << ", |f| = " << last.f_abs << ", arg f = " << last.f_arg << '\n';
        emit(c, to_json(path), os.str());
        if (path.terminated_at == FlowTermination::StepFailure)
            return exit_numeric_failure;
    } else if (analyze_cmd->parsed()) {
        auto config = load_config(c);
        if (flows)
            config.flow_paths = *flows;
        const auto report = analyze(f, config, std::filesystem::path(c.input).filename().string());
        if (!plots.empty())
            emit_plots(report, plots);
        emit(c, to_json(report), to_text(report));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error [" << e.module() << ", " << to_string(e.kind()) << "]";
        if (e.line() > 0)
            std::cerr << " at " << e.line() << ':' << e.column();
        std::cerr << ": " << e.detail() << '\n';
        return is_input_error(e.kind()) ? exit_input_error : exit_numeric_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numeric_failure;
    }
}
