#include <doctest.h>

#include "mixinf/atinfinity.hpp"
#include "mixinf/error.hpp"
#include "support.hpp"

#include <numbers>

using namespace mixinf;
using namespace testing;

namespace {

constexpr double pi = std::numbers::pi;

double re_inner(const ComplexVector& a, const ComplexVector& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] * std::conj(b[i])).real();
    return s;
}

/// Brute-force M(f) residual: 4096 theta values, lambda by projection.
double milnor_oracle(const MixedPolynomial& f, const ComplexVector& z)
{
    const auto g = wirtinger_gradients(f, z);
    const std::size_t n = z.size();
    ComplexVector A(n), B(n);
    double d2 = std::pow(gradient_term_scale(f, z), 2);
    for (std::size_t i = 0; i < n; ++i) {
        A[i] = std::conj(g.d_z[i]);
        B[i] = g.d_zbar[i];
        d2 += std::norm(A[i]) + std::norm(B[i]);
    }
    const double zz = re_inner(z, z);
    double best = 1e300;
    for (int k = 0; k < 4096; ++k) {
        const Complex e = std::polar(1.0, 2 * pi * k / 4096);
        ComplexVector w(n);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = e * A[i] + std::conj(e) * B[i];
        const double lambda = re_inner(w, z) / zz;
        double r = 0;
        for (std::size_t i = 0; i < n; ++i)
            r += std::norm(lambda * z[i] - w[i]);
        best = std::min(best, r);
    }
    return best / d2;
}

/// Real gradient of h : C^n -> R as the complex vector (dh/dx_i + i dh/dy_i).
template <class H>
ComplexVector real_gradient(H h, const ComplexVector& z, double step = 1e-6)
{
    ComplexVector g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        auto p = z, m = z;
        p[i] += step;
        m[i] -= step;
        const double dx = (h(p) - h(m)) / (2 * step);
        p = z;
        m = z;
        p[i] += Complex(0, step);
        m[i] -= Complex(0, step);
        const double dy = (h(p) - h(m)) / (2 * step);
        g[i] = Complex(dx, dy);
    }
    return g;
}

ComplexVector f_ex_singular_point(Rng& rng)
{
    // Sing f of the semitame example: z1 = 0, or z2 = -z1 with z1 = +-i conj(z1).
    if (rng.next() % 2)
        return {0.0, Complex(rng.uniform(-2, 2), rng.uniform(-2, 2))};
    const double t = rng.uniform(0.2, 2.0);
    const double theta = pi / 4 + (pi / 2) * double(rng.next() % 4);
    const Complex z1 = std::polar(t, theta);
    return {z1, -z1};
}

} // namespace

TEST_CASE("Milnor residual reference points")
{
    Rng rng(61);
    for (int k = 0; k < 5; ++k)
        CHECK(milnor_residual(poly(f_rad_text), random_point(rng, 2)).residual <= 1e-12);
    const ComplexVector ones{1.0, 1.0};
    CHECK(milnor_residual(poly(cubic_text), ones).residual <= 1e-12);
    const ComplexVector skew{1.0, Complex(0, 0.37)};
    CHECK(milnor_residual(poly(cubic_text), skew).residual > 1e-4);
    const ComplexVector zero{0.0, 0.0};
    CHECK_THROWS_AS(milnor_residual(poly(cubic_text), zero), Error);
}

TEST_CASE("property: closed-form Milnor residual matches the theta grids")
{
    Rng rng(62);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + rng.next() % 3;
        const auto f = random_polynomial(rng, n, 2 + rng.next() % 4, 3);
        if (f.is_constant())
            continue;
        const auto z = random_point(rng, n, 1.5);
        const auto closed = milnor_residual(f, z);
        const double oracle = milnor_oracle(f, z);
        CHECK(closed.residual >= -1e-15);
        CHECK(closed.residual <= oracle + 1e-12);
        CHECK(oracle - closed.residual <= 1e-5 * (1 + oracle));
        CHECK(std::abs(milnor_residual_grid(f, z).residual - closed.residual) <= 1e-9 + 1e-6 * closed.residual);
    }
}

TEST_CASE("phi residuals")
{
    Rng rng(63);
    for (int k = 0; k < 5; ++k)
        CHECK(sing_phi_residual(poly(f_rad_text), random_point(rng, 2)) <= 1e-14);

    const ComplexVector ones{1.0, 1.0};
    const auto r = phi_milnor_residual(poly(cubic_text), ones);
    // f = 2, A = (3,3), B = 0: G = -2i(3,3) is orthogonal to z over R.
    CHECK(std::abs(r.lambda) <= 1e-12);
    CHECK(r.residual > 0.1);

    const ComplexVector root{1.0, -1.0};
    CHECK_THROWS_AS(sing_phi_residual(poly(cubic_text), root), Error);
    CHECK_THROWS_AS(phi_milnor_residual(poly(cubic_text), root), Error);
}

TEST_CASE("property: for radially homogeneous f, Sing phi = Sing f off V(f) = M(phi)")
{
    const auto f = poly(f_ex_text);
    Rng rng(64);
    for (int k = 0; k < 100; ++k) {
        const bool singular = k % 2 == 0;
        const auto z = singular ? f_ex_singular_point(rng) : random_point(rng, 2, 2.0);
        if (std::abs(evaluate(f, z)) <= zero_tolerance(f, z))
            continue;
        const bool s_f = singularity_residual(f, z).normalized <= 1e-8;
        const bool s_phi = sing_phi_residual(f, z) <= 1e-8;
        const bool m_phi = phi_milnor_residual(f, z).residual <= 1e-8;
        CHECK(s_f == singular);
        CHECK(s_phi == s_f);
        CHECK(m_phi == s_f);
    }
}

TEST_CASE("frame vectors are the gradients of log|f| and arg f")
{
    Rng rng(65);
    for (const char* text : {f_ex_text, cubic_text, g_pol_text}) {
        const auto f = poly(text);
        for (int k = 0; k < 10; ++k) {
            const auto z = random_point(rng, 2, 1.5);
            const Complex f0 = evaluate(f, z);
            if (std::abs(f0) < 1e-2)
                continue;
            const auto fr = frame_vectors(f, z);
            const auto g1 = real_gradient([&](const ComplexVector& p) { return std::log(std::abs(evaluate(f, p))); }, z);
            // arg relative to f0 stays away from the branch cut.
            const auto g2 = real_gradient([&](const ComplexVector& p) { return std::arg(evaluate(f, p) / f0); }, z);
            for (std::size_t i = 0; i < 2; ++i) {
                CHECK(std::abs(fr.v1[i] - g1[i]) <= 1e-5 * (1 + std::abs(g1[i])));
                CHECK(std::abs(fr.v2[i] - g2[i]) <= 1e-5 * (1 + std::abs(g2[i])));
            }
        }
    }
}

TEST_CASE("frame classification")
{
    const ComplexVector p{2.0, 2.0};
    const auto c = frame_classification(poly(cubic_text), p);
    CHECK(c.kind == FrameKind::Dependent);
    CHECK(c.a > 0);

    Rng rng(66);
    const auto z = f_ex_singular_point(rng);
    CHECK(frame_classification(poly(f_ex_text), z).kind == FrameKind::OnSingPhi);
    const ComplexVector root{1.0, -1.0};
    CHECK_THROWS_AS(frame_classification(poly(cubic_text), root), Error);

    // Strongly non-degenerate and convenient: never dependent with a < 0.
    const auto f = poly(cubic_text);
    for (int k = 0; k < 1000; ++k) {
        auto q = random_point(rng, 2);
        const double scale = rng.uniform(10, 100) / norm(q);
        for (auto& x : q)
            x *= scale;
        if (std::abs(evaluate(f, q)) <= 1e-3 * term_scale(f, q))
            continue;
        const auto fc = frame_classification(f, q);
        if (fc.kind == FrameKind::Dependent)
            CHECK(fc.a > 0);
    }
}

TEST_CASE("real-valued detection")
{
    CHECK(is_real_valued_up_to_phase(poly(f_rad_text)));
    CHECK(is_real_valued_up_to_phase(poly("(2+i)*(z1*zbar1 + z2*zbar2)")));
    CHECK(is_real_valued_up_to_phase(poly("z1 + zbar1")));
    CHECK_FALSE(is_real_valued_up_to_phase(poly(f_ex_text)));
    CHECK_FALSE(is_real_valued_up_to_phase(poly(cubic_text)));
}

TEST_CASE("z1^3 + z2^3 has no asymptotic argument values")
{
    const auto f = poly(cubic_text);
    const auto s = estimate_asymptotic_values(f, ValueKind::SPhi);
    CHECK(s.clusters.empty());
    CHECK_FALSE(s.degenerate_phi);
    for (const auto& rec : s.per_radius)
        if (rec.radius >= 100)
            CHECK(rec.solutions.empty());

    // Exhaustive grid on the sphere of radius 100:
    // z = R (cos a e^{ib}, sin a e^{ic}).
    double best = 1e300;
    const int m = 48;
    for (int ia = 1; ia < m; ++ia)
        for (int ib = 0; ib < m; ++ib)
            for (int ic = 0; ic < m; ++ic) {
                const double a = 0.5 * pi * ia / m;
                const ComplexVector z{std::polar(100 * std::cos(a), 2 * pi * ib / m),
                                      std::polar(100 * std::sin(a), 2 * pi * ic / m)};
                if (std::abs(evaluate(f, z)) <= 1e-3 * term_scale(f, z))
                    continue;
                best = std::min(best, phi_milnor_residual(f, z).residual);
            }
    CHECK(best > 1e-3);
}

TEST_CASE("the semitame example: three argument values, no finite values of f")
{
    const auto f = poly(f_ex_text);
    const auto s = estimate_asymptotic_values(f, ValueKind::SPhi);
    REQUIRE(s.clusters.size() == 3);
    CHECK(s.solutions_at_every_radius);
    for (const auto& c : s.clusters) {
        CHECK(std::abs(std::abs(c.center) - 1) <= 1e-9);
        // Spread nonincreasing over the last three radii.
        const auto& sp = c.spread_per_radius;
        for (std::size_t k = sp.size() >= 3 ? sp.size() - 2 : 1; k < sp.size(); ++k)
            CHECK(sp[k].second <= sp[k - 1].second + 1e-6);
    }
    // Every accepted M(phi) solution lies in M(f) \ V(f).
    for (const auto& rec : s.per_radius)
        for (const auto& sol : rec.solutions) {
            CHECK(milnor_residual(f, sol.z).residual <= 10 * s.options.tol);
            CHECK(std::abs(evaluate(f, sol.z)) > zero_tolerance(f, sol.z));
        }
    CHECK(estimate_asymptotic_values(f, ValueKind::SF).clusters.empty());
}

TEST_CASE("real-valued input gets the degenerate diagnosis")
{
    const auto s = estimate_asymptotic_values(poly(f_rad_text), ValueKind::SPhi);
    CHECK(s.degenerate_phi);
    CHECK(s.clusters.empty());
    CHECK_FALSE(s.diagnosis.empty());
}

TEST_CASE("estimator is deterministic")
{
    EstimatorOptions o;
    o.radii = {10, 100, 1000};
    o.starts_per_radius = 16;
    const auto f = poly(f_ex_text);
    CHECK(to_json(estimate_asymptotic_values(f, ValueKind::SPhi, o)).dump() ==
          to_json(estimate_asymptotic_values(f, ValueKind::SPhi, o)).dump());
}

TEST_CASE("strictly bad superset")
{
    const auto ex = strictly_bad_superset(poly(f_ex_text), {}, {Aggregate::Refuted, nullptr});
    CHECK(ex.faces.empty());
    CHECK(ex.values.empty());
    REQUIRE(ex.hypotheses.size() == 4);
    CHECK(ex.hypotheses[0].status == HypothesisStatus::Exact);
    CHECK(ex.hypotheses[3].status == HypothesisStatus::Refuted);

    const auto cubic = strictly_bad_superset(poly(cubic_text), {}, {Aggregate::HeuristicallyNondegenerate, nullptr});
    CHECK(cubic.values.empty());
    CHECK(cubic.hypotheses[3].status == HypothesisStatus::Heuristic);

    // w + w^2 with w = z1 zbar2: arg is critical where d(w+w^2)/dw = 0, so
    // w = -1/2 and phi = -1.
    const auto sb = strictly_bad_superset(poly(f_sb_text), {});
    REQUIRE(sb.values.size() == 1);
    CHECK(std::abs(sb.values[0].center - Complex(-1, 0)) < 1e-3);
    SearchOptions more;
    more.trials = 640;
    more.seed = 17;
    const auto oracle = strictly_bad_superset(poly(f_sb_text), more);
    REQUIRE(oracle.values.size() == 1);
    CHECK(std::abs(oracle.values[0].center - sb.values[0].center) < 1e-3);

    const auto shifted = strictly_bad_superset(poly("1 + z1*zbar2 + z1^2*zbar2^2"), {});
    CHECK(shifted.hypotheses[0].status == HypothesisStatus::Refuted);
}

TEST_CASE("flow tracer")
{
    const auto f = poly(cubic_text);
    FlowOptions o;
    o.target = 50;
    const ComplexVector start{2.0, 2.0};
    const auto path = trace_flow(f, start, o);
    CHECK(path.terminated_at == FlowTermination::RadiusReached);
    CHECK(path.samples.back().norm == doctest::Approx(50).epsilon(1e-6));
    for (std::size_t k = 1; k < path.samples.size(); ++k) {
        CHECK(path.samples[k].norm > path.samples[k - 1].norm);
        CHECK(path.samples[k].f_abs > path.samples[k - 1].f_abs);
    }
    CHECK(std::abs(path.samples.back().f_arg - path.samples.front().f_arg) <= 1e-6);

    o.target = norm(start);
    const auto trivial = trace_flow(f, start, o);
    CHECK(trivial.samples.size() == 1);
    CHECK(trivial.terminated_at == FlowTermination::RadiusReached);

    // Real-valued input: v2 vanishes, the tracer falls back to radial ascent.
    o.target = 10;
    const ComplexVector one{1.0, 1.0};
    const auto rad = trace_flow(poly(f_rad_text), one, o);
    CHECK(rad.terminated_at == FlowTermination::RadiusReached);
    CHECK(rad.fallback_steps > 0);

    FlowOptions m;
    m.stop = FlowStop::Modulus;
    m.target = 1000;
    const auto by_modulus = trace_flow(f, start, m);
    CHECK(by_modulus.terminated_at == FlowTermination::ModulusReached);
    CHECK(by_modulus.samples.back().f_abs == doctest::Approx(1000).epsilon(1e-6));

    const ComplexVector root{1.0, -1.0};
    CHECK_THROWS_AS(trace_flow(f, root, o), Error);
}
