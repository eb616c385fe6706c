#include "mixinf/atinfinity.hpp"

#include "mixinf/error.hpp"
#include "mixinf/least_squares.hpp"
#include "mixinf/newton.hpp"
#include "mixinf/parallel.hpp"
#include "mixinf/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mixinf {

namespace {

constexpr const char* module_name = "atinfinity";
constexpr double tiny = std::numeric_limits<double>::min();
constexpr double pi = std::numbers::pi;

/// Real inner product on R^{2n}: Re sum a_i conj(b_i).
double real_inner(std::span<const Complex> a, std::span<const Complex> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

double norm2(std::span<const Complex> v)
{
    return real_inner(v, v);
}

double wrap_angle(double a)
{
    return std::remainder(a, 2 * pi);
}

double angular_distance(Complex a, Complex b)
{
    return std::abs(std::arg(a * std::conj(b)));
}

void require_nonzero(std::span<const Complex> z)
{
    if (norm2(z) == 0)
        throw Error(ErrorKind::ZeroVector, module_name, "z must be nonzero");
}

/// f, A = conj(d_z f), B = d_zbar f and the scale D at one point.
struct Local {
    Complex f;
    ComplexVector A, B;
    double znorm = 0;
    double D = 0;
};

Local local_data(const MixedPolynomial& f, std::span<const Complex> z)
{
    const auto vg = evaluate_with_gradients(f, z);
    Local l;
    l.f = vg.value;
    l.A.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        l.A[i] = std::conj(vg.gradient.d_z[i]);
    l.B = vg.gradient.d_zbar;
    l.znorm = std::sqrt(norm2(z));
    const double g = gradient_term_scale(f, z);
    l.D = std::sqrt(norm2(l.A) + norm2(l.B) + g * g);
    return l;
}

void require_off_zero_locus(const MixedPolynomial& f, std::span<const Complex> z, Complex value)
{
    if (std::abs(value) <= zero_tolerance(f, z)) {
        std::ostringstream os;
        os << "|f| = " << std::abs(value) << " is within the zero tolerance";
        throw Error(ErrorKind::OnZeroLocus, module_name, os.str());
    }
}

/// G - lambda z for the phi-Milnor condition, divided by |f| D.
ComplexVector phi_milnor_vector(const Local& l, std::span<const Complex> z, double& lambda)
{
    const std::size_t n = z.size();
    ComplexVector G(n);
    const Complex i(0, 1);
    for (std::size_t k = 0; k < n; ++k)
        G[k] = i * std::conj(l.f) * l.B[k] - i * l.f * l.A[k];
    lambda = real_inner(G, z) / (l.znorm * l.znorm);
    const double scale = 1.0 / (std::abs(l.f) * l.D + tiny);
    for (std::size_t k = 0; k < n; ++k)
        G[k] = (G[k] - lambda * z[k]) * scale;
    return G;
}

ComplexVector sing_phi_vector(const Local& l)
{
    ComplexVector out(l.A.size());
    const double scale = 1.0 / (std::abs(l.f) * l.D + tiny);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (std::conj(l.f) * l.B[k] - l.f * l.A[k]) * scale;
    return out;
}

/// ||lambda z - w(theta)||^2 / D^2 with the optimal lambda for this theta.
double milnor_at(const Local& l, std::span<const Complex> z, double theta, double* lambda_out = nullptr)
{
    const Complex e = std::polar(1.0, theta);
    ComplexVector w(z.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        w[k] = e * l.A[k] + std::conj(e) * l.B[k];
    const double lambda = real_inner(w, z) / (l.znorm * l.znorm);
    double r = 0;
    for (std::size_t k = 0; k < z.size(); ++k)
        r += std::norm(lambda * z[k] - w[k]);
    if (lambda_out)
        *lambda_out = lambda;
    return r / (l.D * l.D + tiny);
}

} // namespace

MilnorResidual milnor_residual(const MixedPolynomial& f, std::span<const Complex> z)
{
    require_nonzero(z);
    const auto l = local_data(f, z);
    const std::size_t n = z.size();
    const double zz = l.znorm * l.znorm;
    // w(theta) = cos(theta) P + sin(theta) Q, P = A + B, Q = i (A - B).
    ComplexVector P(n), Q(n);
    for (std::size_t k = 0; k < n; ++k) {
        P[k] = l.A[k] + l.B[k];
        Q[k] = Complex(0, 1) * (l.A[k] - l.B[k]);
    }
    const double pz = real_inner(P, z) / zz;
    const double qz = real_inner(Q, z) / zz;
    for (std::size_t k = 0; k < n; ++k) {
        P[k] -= pz * z[k];
        Q[k] -= qz * z[k];
    }
    const double a = norm2(P);
    const double c = norm2(Q);
    const double b = real_inner(P, Q);
    const double half_gap = std::hypot(0.5 * (a - c), b);
    const double largest = 0.5 * (a + c) + half_gap;
    const double smallest = largest > 0 ? std::max(0.0, (a * c - b * b) / largest) : 0.0;

    MilnorResidual out;
    // Eigenvector of [[a, b], [b, c]] for the smaller eigenvalue.
    double cs, sn;
    if (a - smallest >= c - smallest) {
        cs = -b;
        sn = a - smallest;
    } else {
        cs = c - smallest;
        sn = -b;
    }
    if (cs == 0 && sn == 0)
        cs = 1;
    out.theta = std::atan2(sn, cs);
    out.lambda = std::cos(out.theta) * pz + std::sin(out.theta) * qz;
    out.residual = smallest / (l.D * l.D + tiny);
    return out;
}

MilnorResidual milnor_residual_grid(const MixedPolynomial& f, std::span<const Complex> z)
{
    require_nonzero(z);
    const auto l = local_data(f, z);
    constexpr int grid = 256;
    const double step = 2 * pi / grid;
    int best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
        const double r = milnor_at(l, z, k * step);
        if (r < best) {
            best = r;
            best_k = k;
        }
    }
    // Golden-section search on the bracketing grid cells.
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double lo = (best_k - 1) * step, hi = (best_k + 1) * step;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = milnor_at(l, z, x1), f2 = milnor_at(l, z, x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = milnor_at(l, z, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = milnor_at(l, z, x2);
        }
    }
    MilnorResidual out;
    out.theta = 0.5 * (lo + hi);
    out.residual = std::min(best, milnor_at(l, z, out.theta, &out.lambda));
    return out;
}

PhiMilnorResidual phi_milnor_residual(const MixedPolynomial& f, std::span<const Complex> z)
{
    require_nonzero(z);
    const auto l = local_data(f, z);
    require_off_zero_locus(f, z, l.f);
    PhiMilnorResidual out;
    out.residual = norm2(phi_milnor_vector(l, z, out.lambda));
    return out;
}

double sing_phi_residual(const MixedPolynomial& f, std::span<const Complex> z)
{
    require_nonzero(z);
    const auto l = local_data(f, z);
    require_off_zero_locus(f, z, l.f);
    return norm2(sing_phi_vector(l));
}

FrameVectors frame_vectors(const MixedPolynomial& f, std::span<const Complex> z)
{
    const auto vg = evaluate_with_gradients(f, z);
    require_off_zero_locus(f, z, vg.value);
    FrameVectors fv;
    fv.at.assign(z.begin(), z.end());
    fv.f_value = vg.value;
    const Complex fbar = std::conj(vg.value);
    fv.v1.resize(z.size());
    fv.v2.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const Complex a = std::conj(vg.gradient.d_z[k]) / fbar;
        const Complex b = vg.gradient.d_zbar[k] / vg.value;
        fv.v1[k] = a + b;
        fv.v2[k] = Complex(0, 1) * (a - b);
    }
    return fv;
}

const char* to_string(FrameKind kind)
{
    switch (kind) {
    case FrameKind::Independent:
        return "independent";
    case FrameKind::Dependent:
        return "dependent_with";
    case FrameKind::OnSingPhi:
        return "on_sing_phi";
    }
    return "?";
}

FrameClassification frame_classification(const MixedPolynomial& f, std::span<const Complex> z, double tol)
{
    const auto fv = frame_vectors(f, z);
    const auto n = static_cast<Eigen::Index>(z.size());
    auto column = [&](std::span<const Complex> v) {
        Eigen::VectorXd c(2 * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            c[2 * k] = v[k].real();
            c[2 * k + 1] = v[k].imag();
        }
        return c;
    };
    const Eigen::VectorXd cz = column(z), c1 = column(fv.v1), c2 = column(fv.v2);
    auto unit = [](const Eigen::VectorXd& c) {
        const double nn = c.norm();
        return nn > 0 ? Eigen::VectorXd(c / nn) : c;
    };

    FrameClassification out;
    // Unnormalized: on Sing phi v2 vanishes up to rounding, and normalizing
    // it would turn the rounding into a spurious direction.
    Eigen::MatrixXd pair(2 * n, 2);
    pair << c1, c2;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd2(pair);
    const auto s2 = svd2.singularValues();
    if (s2[0] == 0 || s2[1] <= tol * s2[0]) {
        out.kind = FrameKind::OnSingPhi;
        out.singular_values.assign(s2.data(), s2.data() + s2.size());
        return out;
    }
    Eigen::MatrixXd triple(2 * n, 3);
    triple << unit(cz), unit(c1), unit(c2);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd3(triple);
    const auto s3 = svd3.singularValues();
    out.singular_values.assign(s3.data(), s3.data() + s3.size());
    if (s3.size() == 3 && s3[2] > tol * s3[0]) {
        out.kind = FrameKind::Independent;
        return out;
    }
    out.kind = FrameKind::Dependent;
    Eigen::MatrixXd M(2 * n, 2);
    M << c1, c2;
    const Eigen::VectorXd ab = M.colPivHouseholderQr().solve(cz);
    out.a = ab[0];
    out.b = ab[1];
    return out;
}

const char* to_string(ValueKind kind)
{
    return kind == ValueKind::SPhi ? "S_phi" : "S_f";
}

bool is_real_valued_up_to_phase(const MixedPolynomial& f)
{
    if (f.is_zero())
        return true;
    const GaussianRational c = f.terms().front().coeff;
    MixedPolynomial lhs = conjugate(f);
    lhs *= c;
    MixedPolynomial rhs = f;
    rhs *= c.conj();
    return lhs == rhs;
}

namespace {

struct ClusterMetric {
    ValueKind kind;
    double distance(Complex a, Complex b) const
    {
        if (kind == ValueKind::SPhi)
            return angular_distance(a, b);
        return std::abs(a - b) / (1 + std::abs(b));
    }
};

std::vector<ValueCluster> greedy_clusters(const std::vector<Complex>& values, ValueKind kind, double radius)
{
    const ClusterMetric metric{kind};
    std::vector<ValueCluster> clusters;
    std::vector<std::vector<Complex>> members;
    for (auto v : values) {
        std::size_t k = 0;
        for (; k < clusters.size(); ++k)
            if (metric.distance(v, clusters[k].center) <= radius)
                break;
        if (k == clusters.size()) {
            clusters.push_back(ValueCluster{v, 0, 0});
            members.emplace_back();
        }
        members[k].push_back(v);
        Complex sum = 0;
        for (auto m : members[k])
            sum += m;
        Complex center = sum / static_cast<double>(members[k].size());
        if (kind == ValueKind::SPhi)
            center /= std::abs(center);
        clusters[k].center = center;
        clusters[k].member_count = members[k].size();
    }
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        double spread = 0;
        for (auto m : members[k])
            spread = std::max(spread, metric.distance(m, clusters[k].center));
        clusters[k].spread = spread;
    }
    std::sort(clusters.begin(), clusters.end(), [](const ValueCluster& a, const ValueCluster& b) {
        const double aa = std::arg(a.center), ab = std::arg(b.center);
        if (aa != ab)
            return aa < ab;
        return std::abs(a.center) < std::abs(b.center);
    });
    return clusters;
}

constexpr double spread_resolution = 1e-6;

/// Follows each cluster at the last radius back through the schedule and
/// keeps the ones that have settled.
std::vector<AcceptedCluster> track_clusters(const std::vector<RadiusRecord>& records, ValueKind kind,
                                            const EstimatorOptions& options)
{
    std::vector<AcceptedCluster> accepted;
    if (records.size() < 2)
        return accepted;
    const ClusterMetric metric{kind};
    const double match_radius = 100 * options.tol_cluster;
    const double settle = kind == ValueKind::SPhi ? options.tol_cluster : options.finite_relative_change;

    for (const auto& last : records.back().clusters) {
        // Chain of (record index, cluster) from the last radius backwards.
        std::vector<std::pair<std::size_t, const ValueCluster*>> chain{{records.size() - 1, &last}};
        for (std::size_t r = records.size() - 1; r-- > 0;) {
            const ValueCluster* best = nullptr;
            double best_d = match_radius;
            for (const auto& c : records[r].clusters) {
                const double d = metric.distance(c.center, chain.back().second->center);
                if (d <= best_d) {
                    best_d = d;
                    best = &c;
                }
            }
            if (!best)
                break;
            chain.emplace_back(r, best);
        }
        if (chain.size() < 2)
            continue;
        if (metric.distance(chain[0].second->center, chain[1].second->center) >= settle)
            continue;
        bool monotone = true;
        for (std::size_t k = 0; k + 1 < std::min<std::size_t>(chain.size(), 3); ++k)
            if (chain[k].second->spread > chain[k + 1].second->spread + spread_resolution)
                monotone = false;
        if (!monotone)
            continue;

        AcceptedCluster a;
        a.center = last.center;
        a.member_count = last.member_count;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const double R = records[it->first].radius;
            a.spread_per_radius.emplace_back(R, it->second->spread);
            a.center_per_radius.emplace_back(R, it->second->center);
        }
        accepted.push_back(std::move(a));
    }
    return accepted;
}

/// Point on the sphere of radius R from the unconstrained coordinates.
ComplexVector sphere_point(const Eigen::VectorXd& x, std::size_t n, double R)
{
    const double scale = R / x.head(2 * n).norm();
    ComplexVector z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = Complex(x[2 * k], x[2 * k + 1]) * scale;
    return z;
}

bool phi_is_degenerate_on_samples(const MixedPolynomial& f, const EstimatorOptions& options)
{
    Rng rng(derive_seed(options.seed, hash_string("degenerate_phi")));
    const std::size_t n = f.n_vars();
    std::size_t checked = 0;
    for (int s = 0; s < 16; ++s) {
        ComplexVector z(n);
        for (auto& zi : z)
            zi = Complex(rng.normal(), rng.normal());
        const auto l = local_data(f, z);
        if (std::abs(l.f) <= zero_tolerance(f, z))
            continue;
        ++checked;
        if (norm2(sing_phi_vector(l)) > options.tol)
            return false;
    }
    return checked > 0;
}

} // namespace

CircleValueClusterSet estimate_asymptotic_values(const MixedPolynomial& f, ValueKind kind,
                                                 const EstimatorOptions& options)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, module_name, "cannot estimate values of the zero polynomial");
    if (f.is_constant())
        throw Error(ErrorKind::InvalidArgument, module_name, "f must be nonconstant");
    if (options.radii.empty() || options.starts_per_radius == 0)
        throw Error(ErrorKind::InvalidArgument, module_name, "empty radius schedule or no starts");

    CircleValueClusterSet out;
    out.kind = kind;
    out.radii_schedule = options.radii;
    out.options = options;

    if (kind == ValueKind::SPhi) {
        if (is_real_valued_up_to_phase(f)) {
            out.degenerate_phi = true;
            out.diagnosis = "f is real-valued up to a constant phase: phi is locally constant off V(f), "
                            "Sing phi is everything and S(phi) carries no information";
            return out;
        }
        if (phi_is_degenerate_on_samples(f, options)) {
            out.degenerate_phi = true;
            out.diagnosis = "conj(f) dbar f = f conj(df) at every sampled point: Sing phi appears to be "
                            "everything and S(phi) carries no information";
            return out;
        }
    }

    const std::size_t n = f.n_vars();
    const std::size_t n_vars = 2 * n + (kind == ValueKind::SF ? 1 : 0);
    const std::size_t n_res = 2 * n;
    // S(f) also seeds starts on Sing f, a thin part of M(f) that the Milnor
    // objective alone rarely lands on.
    const std::size_t starts = options.starts_per_radius * (kind == ValueKind::SF ? 2 : 1);
    const std::size_t total = options.radii.size() * starts;
    const std::uint64_t tag = hash_string(to_string(kind));

    struct Attempt {
        bool accepted = false;
        Solution solution;
        double residual = std::numeric_limits<double>::infinity();
    };
    std::vector<Attempt> attempts(total);

    parallel_for(total, [&](std::size_t job) {
        const std::size_t ri = job / starts;
        const std::size_t si = job % starts;
        const double R = options.radii[ri];
        Rng rng(derive_seed(options.seed, tag, ri, si));
        Eigen::VectorXd x0(n_vars);
        for (std::size_t k = 0; k < 2 * n; ++k)
            x0[k] = rng.normal();
        if (kind == ValueKind::SF)
            x0[2 * n] = rng.uniform(0, pi);

        const bool singular_start = kind == ValueKind::SF && si >= options.starts_per_radius;
        const double sphere_scale =
            term_scale(f, ComplexVector(n, Complex(R / std::sqrt(static_cast<double>(n)), 0))) / R;
        ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
            const auto z = sphere_point(x, n, R);
            const auto l = local_data(f, z);
            ComplexVector v;
            if (kind == ValueKind::SPhi) {
                double lambda;
                v = phi_milnor_vector(l, z, lambda);
            } else if (singular_start) {
                Complex ab = 0;
                for (std::size_t k = 0; k < n; ++k)
                    ab += l.A[k] * std::conj(l.B[k]);
                const Complex lambda = std::abs(ab) > 0 ? ab / std::abs(ab) : Complex(1, 0);
                // Fixed scale on this sphere: the zeros, including those
                // with A = B = 0, stay reachable.
                v.resize(n);
                for (std::size_t k = 0; k < n; ++k)
                    v[k] = (l.A[k] - lambda * l.B[k]) / (sphere_scale + tiny);
            } else {
                const Complex e = std::polar(1.0, x[2 * n]);
                v.resize(n);
                for (std::size_t k = 0; k < n; ++k)
                    v[k] = e * l.A[k] + std::conj(e) * l.B[k];
                const double lambda = real_inner(v, z) / (R * R);
                for (std::size_t k = 0; k < n; ++k)
                    v[k] = (lambda * z[k] - v[k]) / (l.D + tiny);
            }
            for (std::size_t k = 0; k < n; ++k) {
                r[2 * k] = v[k].real();
                r[2 * k + 1] = v[k].imag();
            }
        };
        Projection renormalize = [&](Eigen::VectorXd& x) {
            const double nn = x.head(2 * n).norm();
            if (nn > 0)
                x.head(2 * n) /= nn;
        };
        LeastSquaresOptions lm;
        lm.max_iterations = 200;
        const auto fit = minimize_least_squares(residual, x0, n_res, lm, renormalize);

        Attempt& a = attempts[job];
        const auto z = sphere_point(fit.x, n, R);
        const Complex value = evaluate(f, z);
        if (kind == ValueKind::SPhi) {
            if (std::abs(value) <= zero_tolerance(f, z))
                return;
            a.residual = phi_milnor_residual(f, z).residual;
            a.solution.value = value / std::abs(value);
        } else {
            a.residual = milnor_residual(f, z).residual;
            a.solution.value = value;
        }
        a.solution.z = z;
        a.solution.residual = a.residual;
        a.accepted = a.residual <= options.tol;
    });

    bool every = true;
    for (std::size_t ri = 0; ri < options.radii.size(); ++ri) {
        RadiusRecord rec;
        rec.radius = options.radii[ri];
        rec.starts = starts;
        rec.best_residual = std::numeric_limits<double>::infinity();
        std::vector<Complex> values;
        for (std::size_t si = 0; si < starts; ++si) {
            const auto& a = attempts[ri * starts + si];
            rec.best_residual = std::min(rec.best_residual, a.residual);
            if (!a.accepted)
                continue;
            rec.solutions.push_back(a.solution);
            if (kind == ValueKind::SF && std::abs(a.solution.value) > options.divergence)
                ++rec.escaping;
            else
                values.push_back(a.solution.value);
        }
        rec.clusters = greedy_clusters(values, kind, 10 * options.tol_cluster);
        every = every && !rec.solutions.empty();
        out.per_radius.push_back(std::move(rec));
    }
    out.solutions_at_every_radius = every;
    out.clusters = track_clusters(out.per_radius, kind, options);
    return out;
}

const char* to_string(HypothesisStatus status)
{
    switch (status) {
    case HypothesisStatus::Exact:
        return "exact";
    case HypothesisStatus::Heuristic:
        return "heuristic";
    case HypothesisStatus::Refuted:
        return "refuted";
    case HypothesisStatus::NotEvaluated:
        return "not_evaluated";
    }
    return "?";
}

StrictlyBadSuperset strictly_bad_superset(const MixedPolynomial& f, const SearchOptions& search,
                                          const SupersetContext& context, double tol_cluster)
{
    StrictlyBadSuperset out;
    const std::size_t n = f.n_vars();

    Hypothesis origin{"f(0) = 0", HypothesisStatus::Exact, f.constant_term().is_zero(), ""};
    if (!origin.holds) {
        origin.status = HypothesisStatus::Refuted;
        origin.note = "f has a nonzero constant term";
    }
    Hypothesis effective{"f depends effectively on all variables", HypothesisStatus::Exact,
                         effective_variables(f).size() == n, ""};
    if (!effective.holds)
        effective.status = HypothesisStatus::Refuted;
    Hypothesis zero_value{"0 not in S(f)", HypothesisStatus::NotEvaluated, false, ""};
    if (context.s_f) {
        bool zero_found = false;
        for (const auto& c : context.s_f->clusters)
            if (std::abs(c.center) <= 10 * tol_cluster)
                zero_found = true;
        zero_value.status = zero_found ? HypothesisStatus::Refuted : HypothesisStatus::Heuristic;
        zero_value.holds = !zero_found;
        zero_value.note = zero_found ? "a settled S(f) cluster sits at 0" : "no settled S(f) cluster at 0";
    }
    Hypothesis strong{"Newton strongly non-degenerate (gamma_plus)", HypothesisStatus::NotEvaluated, false, ""};
    if (context.strong) {
        strong.holds = *context.strong == Aggregate::HeuristicallyNondegenerate;
        strong.status = strong.holds ? HypothesisStatus::Heuristic : HypothesisStatus::Refuted;
    }
    out.hypotheses = {origin, effective, zero_value, strong};

    const double L = search.box_log_radius;
    std::vector<Complex> all_values;
    for (const auto& face : strictly_bad_faces(f)) {
        StrictlyBadFaceValues record;
        record.lattice_points = face.lattice_points;
        const auto g = restrict_to_face(f, face.lattice_point_set());
        record.restriction = to_string(g);
        record.trials = search.trials;
        const auto eff = effective_variables(g);
        const std::size_t k = eff.size();
        auto to_point = [&](const Eigen::VectorXd& x) {
            ComplexVector z(n, Complex(1, 0));
            for (std::size_t j = 0; j < k; ++j)
                z[eff[j]] = std::polar(std::exp(x[2 * j]), x[2 * j + 1]);
            return z;
        };
        ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
            const auto z = to_point(x);
            const auto v = sing_phi_vector(local_data(g, z));
            for (std::size_t j = 0; j < n; ++j) {
                r[2 * j] = v[j].real();
                r[2 * j + 1] = v[j].imag();
            }
        };
        Projection clamp = [&](Eigen::VectorXd& x) {
            for (std::size_t j = 0; j < k; ++j)
                x[2 * j] = std::clamp(x[2 * j], -L, L);
        };
        std::vector<std::optional<Complex>> found(search.trials);
        std::vector<double> residuals(search.trials, std::numeric_limits<double>::infinity());
        const std::uint64_t stream = hash_string("strictly_bad:" + record.restriction);
        parallel_for(search.trials, [&](std::size_t trial) {
            Rng rng(derive_seed(search.seed, stream, trial));
            Eigen::VectorXd x0(2 * k);
            for (std::size_t j = 0; j < k; ++j) {
                x0[2 * j] = rng.uniform(-L, L);
                x0[2 * j + 1] = rng.uniform(0, 2 * pi);
            }
            LeastSquaresOptions lm;
            lm.max_iterations = 100;
            const auto fit = minimize_least_squares(residual, x0, 2 * n, lm, clamp);
            const auto z = to_point(fit.x);
            const Complex value = evaluate(g, z);
            if (std::abs(value) <= zero_tolerance(g, z))
                return;
            residuals[trial] = sing_phi_residual(g, z);
            if (residuals[trial] <= search.tol)
                found[trial] = value / std::abs(value);
        });
        record.best_residual = *std::min_element(residuals.begin(), residuals.end());
        for (const auto& v : found)
            if (v) {
                record.values.push_back(*v);
                all_values.push_back(*v);
            }
        out.faces.push_back(std::move(record));
    }
    out.values = greedy_clusters(all_values, ValueKind::SPhi, 10 * tol_cluster);
    return out;
}

const char* to_string(FlowTermination termination)
{
    switch (termination) {
    case FlowTermination::RadiusReached:
        return "radius_reached";
    case FlowTermination::ModulusReached:
        return "modulus_reached";
    case FlowTermination::StepFailure:
        return "step_failure";
    }
    return "?";
}

namespace {

struct FieldValue {
    ComplexVector w;
    bool fallback = false;
};

std::string point_text(std::span<const Complex> z)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t k = 0; k < z.size(); ++k)
        os << (k ? ", " : "") << z[k].real() << (z[k].imag() < 0 ? "" : "+") << z[k].imag() << 'i';
    os << ')';
    return os.str();
}

[[noreturn]] void field_failure(std::span<const Complex> z, const std::string& why)
{
    throw Error(ErrorKind::FieldConstructionFailed, module_name, why + " at z = " + point_text(z));
}

FieldValue flow_field(const MixedPolynomial& f, std::span<const Complex> z)
{
    const auto fv = frame_vectors(f, z);
    const auto& v1 = fv.v1;
    const auto& v2 = fv.v2;
    const double n1 = std::sqrt(norm2(v1)), n2 = std::sqrt(norm2(v2)), nz = std::sqrt(norm2(z));
    FieldValue out;
    const std::size_t n = z.size();
    out.w.resize(n);

    if (n2 <= 1e-12 * n1) {
        // arg f is locally constant: ascend |f|, or move radially.
        out.fallback = true;
        if (real_inner(v1, z) > 0)
            out.w = v1;
        else
            out.w.assign(z.begin(), z.end());
    } else {
        const double c12 = real_inner(v1, v2);
        if (std::abs(c12) >= (1 - 1e-12) * n1 * n2)
            field_failure(z, "v1 and v2 are dependent, so Re<w, v1> > 0 and Re<w, v2> = 0 are incompatible");
        const double cz2 = real_inner(z, v2);
        bool ok = false;
        if (std::abs(cz2) > 1e-14 * nz * n2 || std::abs(c12) <= 1e-14 * n1 * n2) {
            const double beta = std::abs(cz2) > 1e-14 * nz * n2 ? -c12 / cz2 : 0.0;
            for (std::size_t k = 0; k < n; ++k)
                out.w[k] = v1[k] + beta * z[k];
            const double nw = std::sqrt(norm2(out.w));
            ok = real_inner(out.w, v1) > 1e-12 * nw * n1 && real_inner(out.w, z) > 1e-12 * nw * nz;
        }
        if (!ok) {
            // Bisector of the parts of v1 and z orthogonal to v2.
            out.fallback = true;
            ComplexVector p(n), q(n);
            const double a = c12 / (n2 * n2), b = cz2 / (n2 * n2);
            for (std::size_t k = 0; k < n; ++k) {
                p[k] = v1[k] - a * v2[k];
                q[k] = z[k] - b * v2[k];
            }
            const double np = std::sqrt(norm2(p)), nq = std::sqrt(norm2(q));
            if (np == 0 || nq == 0)
                field_failure(z, "no admissible flow direction");
            for (std::size_t k = 0; k < n; ++k)
                out.w[k] = p[k] / np + q[k] / nq;
            const double nw = std::sqrt(norm2(out.w));
            if (!(real_inner(out.w, v1) > 1e-12 * nw * n1 && real_inner(out.w, z) > 1e-12 * nw * nz))
                field_failure(z, "positivity conditions are infeasible");
        }
    }
    const double speed = real_inner(out.w, z) / nz;
    if (!(speed > 0))
        field_failure(z, "field does not increase ||z||");
    for (auto& x : out.w)
        x /= speed;
    return out;
}

double vector_norm(std::span<const Complex> v)
{
    return std::sqrt(norm2(v));
}

} // namespace

FlowPath trace_flow(const MixedPolynomial& f, std::span<const Complex> z0, const FlowOptions& options)
{
    require_nonzero(z0);
    const Complex f0 = evaluate(f, z0);
    require_off_zero_locus(f, z0, f0);

    const std::size_t n = z0.size();
    FlowPath path;
    path.start.assign(z0.begin(), z0.end());
    const double theta0 = std::arg(f0);

    auto sample = [&](double t, const ComplexVector& z) {
        const Complex v = evaluate(f, z);
        return FlowSample{t, z, std::abs(v), std::arg(v), vector_norm(z)};
    };
    path.samples.push_back(sample(0, path.start));

    auto reached = [&](const FlowSample& s, double slack) {
        if (options.stop == FlowStop::Radius)
            return s.norm >= options.target * (1 - slack);
        return s.f_abs >= options.target * (1 - slack);
    };
    constexpr double stop_slack = 1e-9;
    const FlowTermination success =
        options.stop == FlowStop::Radius ? FlowTermination::RadiusReached : FlowTermination::ModulusReached;
    if (reached(path.samples.back(), stop_slack)) {
        path.terminated_at = success;
        return path;
    }

    // Dormand-Prince 5(4) tableau.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr std::array<double, 7> b5{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                              11.0 / 84, 0};
    static constexpr std::array<double, 7> b4{5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    auto combine = [&](const ComplexVector& z, double h, std::initializer_list<std::pair<double, const ComplexVector*>> terms) {
        ComplexVector out = z;
        for (const auto& [coef, k] : terms)
            if (coef != 0)
                for (std::size_t i = 0; i < n; ++i)
                    out[i] += h * coef * (*k)[i];
        return out;
    };

    ComplexVector z = path.start;
    double t = 0;
    double h = options.initial_step * std::max(1.0, vector_norm(z));
    for (std::size_t step = 0; step < options.max_steps; ++step) {
        const FlowSample& current = path.samples.back();
        // Clip the step so the stop condition is approached from below.
        double h_try = h;
        if (options.stop == FlowStop::Radius) {
            h_try = std::min(h_try, options.target - current.norm);
        } else {
            const auto fv = frame_vectors(f, z);
            const auto w = flow_field(f, z).w;
            const double rate = real_inner(w, fv.v1);  // d log|f| / dt
            if (rate > 0)
                h_try = std::min(h_try, std::max(options.min_step, 1.01 * std::log(options.target / current.f_abs) / rate));
        }
        if (h_try < options.min_step)
            h_try = options.min_step;

        bool used_fallback = false;
        auto field = [&](const ComplexVector& p) {
            auto fvv = flow_field(f, p);
            used_fallback = used_fallback || fvv.fallback;
            return fvv.w;
        };
        const ComplexVector k1 = field(z);
        const ComplexVector k2 = field(combine(z, h_try, {{a21, &k1}}));
        const ComplexVector k3 = field(combine(z, h_try, {{a31, &k1}, {a32, &k2}}));
        const ComplexVector k4 = field(combine(z, h_try, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const ComplexVector k5 = field(combine(z, h_try, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const ComplexVector k6 =
            field(combine(z, h_try, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        ComplexVector next =
            combine(z, h_try, {{b5[0], &k1}, {b5[2], &k3}, {b5[3], &k4}, {b5[4], &k5}, {b5[5], &k6}});
        const ComplexVector k7 = field(next);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex e = h_try * ((b5[0] - b4[0]) * k1[i] + (b5[2] - b4[2]) * k3[i] + (b5[3] - b4[3]) * k4[i] +
                                       (b5[4] - b4[4]) * k5[i] + (b5[5] - b4[5]) * k6[i] - b4[6] * k7[i]);
            err += std::norm(e);
        }
        err = std::sqrt(err);
        const double allowed = options.rk_tol * std::max(1.0, vector_norm(z)) * h_try;

        auto shrink = [&] {
            h = 0.5 * h_try;
            return h < options.min_step;
        };
        if (!(err <= allowed)) {
            const double factor = err > 0 ? 0.9 * std::pow(allowed / err, 0.2) : 0.5;
            h = h_try * std::clamp(factor, 0.1, 0.5);
            if (h < options.min_step)
                break;
            continue;
        }

        // Pull arg f back to its starting value along v2 = grad arg f.
        for (int it = 0; it < 3; ++it) {
            const Complex v = evaluate(f, next);
            const double drift = wrap_angle(std::arg(v) - theta0);
            if (std::abs(drift) < 1e-15 || std::abs(v) == 0)
                break;
            const auto fv = frame_vectors(f, next);
            const double g2 = norm2(fv.v2);
            if (g2 <= 0)
                break;
            for (std::size_t i = 0; i < n; ++i)
                next[i] -= (drift / g2) * fv.v2[i];
        }

        const FlowSample candidate = sample(t + h_try, next);
        const double growth = std::max(1.0, candidate.norm - path.samples.front().norm);
        const bool monotone = candidate.norm > current.norm && candidate.f_abs > current.f_abs;
        const bool on_level = std::abs(wrap_angle(candidate.f_arg - theta0)) <= options.arg_tol * growth;
        bool overshoot = false;
        if (options.stop == FlowStop::Radius)
            overshoot = candidate.norm > options.target * (1 + stop_slack);
        else
            overshoot = candidate.f_abs > options.target * (1 + 1e-6);
        if (!monotone || !on_level || overshoot) {
            if (shrink())
                break;
            continue;
        }

        z = next;
        t += h_try;
        path.samples.push_back(candidate);
        if (used_fallback)
            ++path.fallback_steps;
        if (reached(candidate, stop_slack)) {
            path.terminated_at = success;
            return path;
        }
        const double factor = err > 0 ? 0.9 * std::pow(allowed / err, 0.2) : 5.0;
        h = h_try * std::clamp(factor, 0.2, 5.0);
    }
    path.terminated_at = FlowTermination::StepFailure;
    return path;
}

nlohmann::ordered_json to_json(const Hypothesis& h)
{
    nlohmann::ordered_json j;
    j["name"] = h.name;
    j["status"] = to_string(h.status);
    j["holds"] = h.holds;
    if (!h.note.empty())
        j["note"] = h.note;
    return j;
}

nlohmann::ordered_json to_json(const CircleValueClusterSet& set)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(set.kind);
    j["radii_schedule"] = set.radii_schedule;
    j["starts_per_radius"] = set.options.starts_per_radius;
    j["tol"] = set.options.tol;
    j["tol_cluster"] = set.options.tol_cluster;
    if (set.kind == ValueKind::SF)
        j["divergence_threshold"] = set.options.divergence;
    j["seed"] = set.options.seed;
    j["degenerate_phi"] = set.degenerate_phi;
    if (!set.diagnosis.empty())
        j["diagnosis"] = set.diagnosis;
    j["solutions_at_every_radius"] = set.solutions_at_every_radius;
    auto clusters = nlohmann::ordered_json::array();
    for (const auto& c : set.clusters) {
        nlohmann::ordered_json cj;
        cj["center"] = complex_json(c.center);
        cj["angle_degrees"] = std::arg(c.center) * 180 / pi;
        cj["member_count"] = c.member_count;
        auto spreads = nlohmann::ordered_json::array();
        for (const auto& [R, s] : c.spread_per_radius)
            spreads.push_back({{"radius", R}, {"spread", s}});
        cj["spread_per_radius"] = spreads;
        clusters.push_back(cj);
    }
    j["clusters"] = clusters;
    auto radii = nlohmann::ordered_json::array();
    for (const auto& r : set.per_radius) {
        nlohmann::ordered_json rj;
        rj["radius"] = r.radius;
        rj["starts"] = r.starts;
        rj["accepted"] = r.solutions.size();
        if (set.kind == ValueKind::SF)
            rj["escaping"] = r.escaping;
        rj["best_residual"] = r.best_residual;
        auto cl = nlohmann::ordered_json::array();
        for (const auto& c : r.clusters)
            cl.push_back({{"center", complex_json(c.center)}, {"spread", c.spread}, {"member_count", c.member_count}});
        rj["clusters"] = cl;
        radii.push_back(rj);
    }
    j["per_radius"] = radii;
    return j;
}

nlohmann::ordered_json to_json(const StrictlyBadSuperset& s)
{
    nlohmann::ordered_json j;
    auto hyps = nlohmann::ordered_json::array();
    for (const auto& h : s.hypotheses)
        hyps.push_back(to_json(h));
    j["hypotheses"] = hyps;
    auto faces = nlohmann::ordered_json::array();
    for (const auto& f : s.faces) {
        nlohmann::ordered_json fj;
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : f.lattice_points)
            pts.push_back(p);
        fj["lattice_points"] = pts;
        fj["restriction"] = f.restriction;
        fj["trials"] = f.trials;
        fj["accepted"] = f.values.size();
        fj["best_residual"] = f.best_residual;
        faces.push_back(fj);
    }
    j["strictly_bad_faces"] = faces;
    auto values = nlohmann::ordered_json::array();
    for (const auto& c : s.values)
        values.push_back({{"center", complex_json(c.center)}, {"spread", c.spread}, {"member_count", c.member_count}});
    j["values"] = values;
    return j;
}

nlohmann::ordered_json to_json(const FlowPath& path)
{
    nlohmann::ordered_json j;
    j["start"] = complex_vector_json(path.start);
    j["terminated_at"] = to_string(path.terminated_at);
    j["steps"] = path.samples.size() - 1;
    j["fallback_steps"] = path.fallback_steps;
    double drift = 0;
    for (const auto& s : path.samples)
        drift = std::max(drift, std::abs(wrap_angle(s.f_arg - path.samples.front().f_arg)));
    j["max_arg_drift"] = drift;
    const auto& last = path.samples.back();
    j["end"] = {{"t", last.t}, {"z", complex_vector_json(last.z)}, {"f_abs", last.f_abs}, {"f_arg", last.f_arg},
                {"norm", last.norm}};
    return j;
}

nlohmann::ordered_json to_json(const FrameClassification& frame)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(frame.kind);
    if (frame.kind == FrameKind::Dependent) {
        j["a"] = frame.a;
        j["b"] = frame.b;
    }
    j["singular_values"] = frame.singular_values;
    return j;
}

} // namespace mixinf
