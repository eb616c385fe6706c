#include "mixinf/nondegen.hpp"

#include "mixinf/error.hpp"
#include "mixinf/least_squares.hpp"
#include "mixinf/parallel.hpp"
#include "mixinf/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace mixinf {

namespace {

constexpr double tiny = std::numeric_limits<double>::min();

Complex inner(std::span<const Complex> a, std::span<const Complex> b)
{
    Complex s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * std::conj(b[i]);
    return s;
}

double squared_norm(std::span<const Complex> v)
{
    double s = 0;
    for (auto x : v)
        s += std::norm(x);
    return s;
}

Complex unit_phase(Complex c)
{
    const double r = std::abs(c);
    return r > 0 ? c / r : Complex(1, 0);
}

bool point_less(const ComplexVector& a, const ComplexVector& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real())
            return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag())
            return a[i].imag() < b[i].imag();
    }
    return false;
}

std::string index_set_string(const std::vector<std::size_t>& indices)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < indices.size(); ++k)
        os << (k ? "," : "") << indices[k] + 1;
    os << '}';
    return os.str();
}

std::string points_string(const std::vector<LatticePoint>& points)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < points.size(); ++k) {
        os << (k ? "," : "") << '(';
        for (std::size_t i = 0; i < points[k].size(); ++i)
            os << (i ? "," : "") << points[k][i];
        os << ')';
    }
    os << '}';
    return os.str();
}

/// All nonempty subsets of {0..n-1}: the full set first, then by
/// decreasing size, lexicographic within a size.
std::vector<std::vector<std::size_t>> coordinate_subsets(std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i))
                s.push_back(i);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() > b.size();
        return a < b;
    });
    return out;
}

} // namespace

SingularityResidual singularity_residual(const MixedPolynomial& f, std::span<const Complex> z)
{
    const auto grad = wirtinger_gradients(f, z);
    ComplexVector A(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        A[i] = std::conj(grad.d_z[i]);
    const auto& B = grad.d_zbar;
    const double a2 = squared_norm(A);
    const double b2 = squared_norm(B);
    const Complex ab = inner(A, B);
    SingularityResidual out;
    out.residual = std::max(0.0, a2 + b2 - 2 * std::abs(ab));
    const double g = gradient_term_scale(f, z);
    out.normalized = out.residual / (a2 + b2 + g * g + tiny);
    out.lambda = unit_phase(ab);
    return out;
}

double zero_tolerance(const MixedPolynomial& f, std::span<const Complex> z)
{
    return 1e-6 * (1 + term_scale(f, z));
}

SearchOutcome find_singularity(const MixedPolynomial& g, const SearchOptions& options, bool require_zero_locus,
                               std::uint64_t stream)
{
    if (g.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, "nondegen", "cannot search the zero polynomial");
    if (options.trials == 0)
        throw Error(ErrorKind::InvalidArgument, "nondegen", "trials must be at least 1");
    const std::size_t n = g.n_vars();
    const auto eff = effective_variables(g);
    const double L = options.box_log_radius;

    auto make_witness = [&](ComplexVector z) {
        const auto res = singularity_residual(g, z);
        SingularityWitness w;
        w.lambda = res.lambda;
        w.residual = res.normalized;
        w.min_modulus = std::abs(z[0]);
        for (auto zi : z)
            w.min_modulus = std::min(w.min_modulus, std::abs(zi));
        w.f_abs = std::abs(evaluate(g, z));
        w.zero_tolerance = zero_tolerance(g, z);
        w.on_zero_locus = w.f_abs <= w.zero_tolerance;
        w.point = std::move(z);
        return w;
    };

    SearchOutcome outcome;
    outcome.trials = options.trials;
    if (eff.empty()) {
        // Constant: both gradients vanish everywhere.
        auto w = make_witness(ComplexVector(n, Complex(1, 0)));
        outcome.best_residual = w.residual;
        outcome.witness = std::move(w);
        return outcome;
    }

    const std::size_t k = eff.size();
    auto to_point = [&](const Eigen::VectorXd& x) {
        ComplexVector z(n, Complex(1, 0));
        for (std::size_t j = 0; j < k; ++j)
            z[eff[j]] = std::polar(std::exp(x[2 * j]), x[2 * j + 1]);
        return z;
    };
    const std::size_t n_res = 2 * k + (require_zero_locus ? 2 : 0);
    ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
        const auto z = to_point(x);
        const auto vg = evaluate_with_gradients(g, z);
        ComplexVector A(k), B(k);
        for (std::size_t j = 0; j < k; ++j) {
            A[j] = std::conj(vg.gradient.d_z[eff[j]]);
            B[j] = vg.gradient.d_zbar[eff[j]];
        }
        const Complex lambda = unit_phase(inner(A, B));
        const double gs = gradient_term_scale(g, z);
        const double scale = 1.0 / std::sqrt(squared_norm(A) + squared_norm(B) + gs * gs + tiny);
        for (std::size_t j = 0; j < k; ++j) {
            const Complex d = (A[j] - lambda * B[j]) * scale;
            r[2 * j] = d.real();
            r[2 * j + 1] = d.imag();
        }
        if (require_zero_locus) {
            const Complex v = vg.value / (term_scale(g, z) + tiny);
            r[2 * k] = v.real();
            r[2 * k + 1] = v.imag();
        }
    };
    Projection clamp = [&](Eigen::VectorXd& x) {
        for (std::size_t j = 0; j < k; ++j)
            x[2 * j] = std::clamp(x[2 * j], -L, L);
    };

    std::vector<SingularityWitness> results(options.trials);
    parallel_for(options.trials, [&](std::size_t trial) {
        Rng rng(derive_seed(options.seed, stream, trial));
        Eigen::VectorXd x0(2 * k);
        for (std::size_t j = 0; j < k; ++j) {
            x0[2 * j] = rng.uniform(-L, L);
            x0[2 * j + 1] = rng.uniform(0, 2 * std::numbers::pi);
        }
        LeastSquaresOptions lm;
        lm.max_iterations = 100;
        const auto fit = minimize_least_squares(residual, x0, n_res, lm, clamp);
        results[trial] = make_witness(to_point(fit.x));
    });

    outcome.best_residual = std::numeric_limits<double>::infinity();
    const SingularityWitness* best = nullptr;
    auto better = [&](const SingularityWitness& a, const SingularityWitness& b) {
        if (require_zero_locus && a.on_zero_locus != b.on_zero_locus)
            return a.on_zero_locus;
        if (a.residual != b.residual)
            return a.residual < b.residual;
        return point_less(a.point, b.point);
    };
    const double floor = std::exp(-L) * (1 - 1e-12);
    for (const auto& w : results) {
        outcome.best_residual = std::min(outcome.best_residual, w.residual);
        if (w.residual <= options.tol && w.min_modulus >= floor && (!best || better(w, *best)))
            best = &w;
    }
    if (best)
        outcome.witness = *best;
    return outcome;
}

std::optional<SingularityWitness> find_singularity(const MixedPolynomial& g, std::size_t trials, double tol,
                                                   double box_log_radius, std::uint64_t seed)
{
    SearchOptions options{trials, tol, box_log_radius, seed};
    return find_singularity(g, options, false, 0).witness;
}

const char* to_string(NondegeneracyMode mode)
{
    return mode == NondegeneracyMode::Nondegenerate ? "nondegenerate" : "strongly_nondegenerate";
}

const char* to_string(FaceScope scope)
{
    return scope == FaceScope::GammaPlus ? "gamma_plus" : "all_support_hull_faces";
}

const char* to_string(FaceStatus status)
{
    return status == FaceStatus::Degenerate ? "degenerate" : "no_witness_found";
}

const char* to_string(Aggregate aggregate)
{
    return aggregate == Aggregate::Refuted ? "refuted" : "heuristically_nondegenerate";
}

NonDegeneracyVerdict classify(const MixedPolynomial& f, NondegeneracyMode mode, FaceScope scope,
                              const ClassifyOptions& options)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, "nondegen", "cannot classify the zero polynomial");
    if (f.is_constant())
        throw Error(ErrorKind::EmptySupport, "nondegen", "supp(f) \\ {0} is empty");

    NonDegeneracyVerdict verdict;
    verdict.mode = mode;
    verdict.scope = scope;
    verdict.search = options.search;

    const std::size_t n = f.n_vars();
    std::vector<std::vector<std::size_t>> subsets;
    if (options.with_coordinate_restrictions && n <= options.max_restriction_vars) {
        subsets = coordinate_subsets(n);
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i)
            all[i] = i;
        subsets.push_back(std::move(all));
    }

    const bool plain = mode == NondegeneracyMode::Nondegenerate;
    std::map<std::string, SearchOutcome> cache;
    for (const auto& I : subsets) {
        const auto fI = I.size() == n ? f : restrict_to_coordinates(f, I);
        if (fI.is_zero() || fI.is_constant())
            continue;
        verdict.coordinate_subsets_checked.push_back(I);
        std::vector<Face> faces;
        if (scope == FaceScope::GammaPlus)
            faces = boundary_at_infinity(fI);
        else
            faces = support_hull(fI).faces;

        for (const auto& face : faces) {
            FaceRecord record;
            record.coordinates = I;
            record.lattice_points = face.lattice_points;
            for (const auto& a : face.functional)
                record.functional.push_back(a.convert_to<std::int64_t>());
            record.face_id = "I=" + index_set_string(I) + " face=" + points_string(face.lattice_points);
            const auto restriction = restrict_to_face(fI, face.lattice_point_set());
            record.restriction = to_string(restriction);

            auto it = cache.find(record.restriction);
            if (it == cache.end()) {
                auto outcome =
                    find_singularity(restriction, options.search, plain, hash_string(record.restriction));
                it = cache.emplace(record.restriction, std::move(outcome)).first;
            }
            const auto& outcome = it->second;
            record.trials = outcome.trials;
            record.best_residual = outcome.best_residual;
            if (outcome.witness) {
                record.status = FaceStatus::Degenerate;
                record.witness = outcome.witness;
                record.witness->face_id = record.face_id;
                record.refutes = plain ? record.witness->on_zero_locus : true;
            }
            if (record.refutes && !verdict.refuting_face)
                verdict.refuting_face = verdict.faces.size();
            verdict.faces.push_back(std::move(record));
        }
    }
    verdict.aggregate = verdict.refuting_face ? Aggregate::Refuted : Aggregate::HeuristicallyNondegenerate;
    return verdict;
}

nlohmann::ordered_json complex_json(Complex c)
{
    return nlohmann::ordered_json::array({c.real(), c.imag()});
}

nlohmann::ordered_json complex_vector_json(std::span<const Complex> v)
{
    auto arr = nlohmann::ordered_json::array();
    for (auto c : v)
        arr.push_back(complex_json(c));
    return arr;
}

nlohmann::ordered_json to_json(const SingularityWitness& w)
{
    nlohmann::ordered_json j;
    j["face_id"] = w.face_id;
    j["point"] = complex_vector_json(w.point);
    j["lambda"] = complex_json(w.lambda);
    j["residual"] = w.residual;
    j["min_modulus"] = w.min_modulus;
    j["on_zero_locus"] = w.on_zero_locus;
    j["f_abs"] = w.f_abs;
    j["zero_tolerance"] = w.zero_tolerance;
    return j;
}

nlohmann::ordered_json to_json(const NonDegeneracyVerdict& v)
{
    nlohmann::ordered_json j;
    j["mode"] = to_string(v.mode);
    j["scope"] = to_string(v.scope);
    j["aggregate"] = to_string(v.aggregate);
    j["status"] = v.aggregate == Aggregate::Refuted ? "refuted" : "heuristic";
    j["trials_per_face"] = v.search.trials;
    j["tol"] = v.search.tol;
    j["box_log_radius"] = v.search.box_log_radius;
    j["seed"] = v.search.seed;
    if (v.refuting_face)
        j["refuting_witness"] = to_json(*v.faces[*v.refuting_face].witness);
    auto subsets = nlohmann::ordered_json::array();
    for (const auto& I : v.coordinate_subsets_checked) {
        auto s = nlohmann::ordered_json::array();
        for (auto i : I)
            s.push_back(i + 1);
        subsets.push_back(s);
    }
    j["coordinate_subsets_checked"] = subsets;
    auto faces = nlohmann::ordered_json::array();
    for (const auto& r : v.faces) {
        nlohmann::ordered_json fj;
        fj["face_id"] = r.face_id;
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : r.lattice_points)
            pts.push_back(p);
        fj["lattice_points"] = pts;
        fj["functional"] = r.functional;
        fj["restriction"] = r.restriction;
        fj["status"] = to_string(r.status);
        fj["refutes"] = r.refutes;
        fj["trials"] = r.trials;
        fj["best_residual"] = r.best_residual;
        if (r.witness)
            fj["witness"] = to_json(*r.witness);
        faces.push_back(fj);
    }
    j["faces"] = faces;
    return j;
}

} // namespace mixinf
