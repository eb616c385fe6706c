#include <doctest.h>

#include "mixinf/homogeneity.hpp"
#include "mixinf/newton.hpp"
#include "support.hpp"

#include <chrono>

using namespace mixinf;
using namespace testing;

namespace {

HomogeneityType make_type(HomogeneityKind kind, std::vector<std::int64_t> w, std::int64_t m)
{
    HomogeneityType t;
    t.kind = kind;
    t.weights = std::move(w);
    t.degree = m;
    t.unique = true;
    return t;
}

/// Polynomial whose terms all satisfy sum q_j (nu_j +- mu_j) = m, drawn
/// from exponents up to 6.
std::optional<MixedPolynomial> random_weighted(Rng& rng, HomogeneityKind kind, const std::vector<std::int64_t>& q,
                                               std::int64_t m)
{
    const std::size_t n = q.size();
    std::vector<MixedTerm> terms;
    for (int attempt = 0; attempt < 4000 && terms.size() < 5; ++attempt) {
        MixedTerm t;
        t.coeff = GaussianRational(Rational(1 + static_cast<long>(rng.next() % 3)), Rational(static_cast<long>(rng.next() % 3)));
        std::int64_t s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            t.nu.push_back(static_cast<std::uint32_t>(rng.next() % 7));
            t.mu.push_back(static_cast<std::uint32_t>(rng.next() % 7));
            const std::int64_t e = kind == HomogeneityKind::Radial ? std::int64_t(t.nu[j]) + t.mu[j]
                                                                   : std::int64_t(t.nu[j]) - t.mu[j];
            s += q[j] * e;
        }
        if (s == m)
            terms.push_back(t);
    }
    if (terms.size() < 2)
        return std::nullopt;
    auto f = MixedPolynomial::canonicalize(terms, n);
    if (f.is_zero())
        return std::nullopt;
    return f;
}

} // namespace

TEST_CASE("radial and polar types of the reference examples")
{
    const auto start = std::chrono::steady_clock::now();
    const auto rad = radial_type(poly(f_rad_text));
    REQUIRE(rad);
    CHECK(rad->weights == std::vector<std::int64_t>{1, 1});
    CHECK(rad->degree == 2);
    CHECK(rad->unique);
    CHECK_FALSE(polar_type(poly(f_rad_text)));

    const auto pol = polar_type(poly(g_pol_text));
    REQUIRE(pol);
    CHECK(pol->weights == std::vector<std::int64_t>{1, 1});
    CHECK(pol->degree == 2);
    CHECK_FALSE(radial_type(poly(g_pol_text)));

    const auto cubic = radial_type(poly(cubic_text));
    REQUIRE(cubic);
    CHECK(cubic->weights == std::vector<std::int64_t>{1, 1});
    CHECK(cubic->degree == 3);
    CHECK(*polar_type(poly(cubic_text)) == make_type(HomogeneityKind::Polar, {1, 1}, 3));
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
}

TEST_CASE("non-unique types are flagged")
{
    // Support {(2,0)} in two variables: weights (1, anything).
    const auto t = radial_type(poly("z1*zbar1", 2));
    REQUIRE(t);
    CHECK_FALSE(t->unique);
    CHECK(verify_scaling(poly("z1*zbar1", 2), *t, 50, 1) <= 1e-10);
}

TEST_CASE("verify_scaling")
{
    CHECK(verify_scaling(poly(f_rad_text), make_type(HomogeneityKind::Radial, {1, 1}, 2), 100, 1) <= 1e-10);
    CHECK(verify_scaling(poly(g_pol_text), make_type(HomogeneityKind::Polar, {1, 1}, 2), 100, 1) <= 1e-10);
    CHECK(verify_scaling(poly(f_rad_text), make_type(HomogeneityKind::Radial, {1, 1}, 3), 100, 1) > 0.1);
}

TEST_CASE("Euler residual")
{
    Rng rng(41);
    const auto rad = make_type(HomogeneityKind::Radial, {1, 1}, 2);
    for (int k = 0; k < 10; ++k)
        CHECK(std::abs(euler_residual(poly(f_rad_text), rad, random_point(rng, 2, 3.0))) <= 1e-10);
    const ComplexVector ones{1.0, 1.0};
    CHECK(std::abs(euler_residual(poly(cubic_text), make_type(HomogeneityKind::Radial, {1, 1}, 3), ones)) <= 1e-12);
    const auto face = restrict_to_face(poly(f_ex_text), {{2, 0}});
    for (int k = 0; k < 10; ++k)
        CHECK(std::abs(euler_residual(face, make_type(HomogeneityKind::Radial, {1, 0}, 2), random_point(rng, 2))) <=
              1e-10);
}

TEST_CASE("property: detected types are sound and satisfy Euler")
{
    Rng rng(42);
    int radial_found = 0;
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + rng.next() % 3;
        std::vector<std::int64_t> q(n);
        for (auto& x : q)
            x = static_cast<std::int64_t>(rng.next() % 4);
        const std::int64_t m = 1 + static_cast<std::int64_t>(rng.next() % 8);
        const auto kind = k % 2 ? HomogeneityKind::Polar : HomogeneityKind::Radial;
        const auto f = random_weighted(rng, kind, q, m);
        if (!f)
            continue;
        const auto t = kind == HomogeneityKind::Radial ? radial_type(*f) : polar_type(*f);
        CAPTURE(to_string(*f));
        REQUIRE(t);
        CHECK(t->degree > 0);
        CHECK(verify_scaling(*f, *t, 100, 7) <= 1e-9);
        if (kind == HomogeneityKind::Radial) {
            ++radial_found;
            for (int s = 0; s < 100; ++s) {
                const auto z = random_point(rng, n);
                CHECK(std::abs(euler_residual(*f, *t, z)) <= 1e-9 * (1 + term_scale(*f, z)));
            }
        }
    }
    CHECK(radial_found > 10);
}

TEST_CASE("property: Gamma^+ face restrictions are radially homogeneous for their functional")
{
    for (const char* text : {f_ex_text, g_pol_text, cubic_text, f_sb_text, "z1^2*zbar3 + z2^3 + z3^4 + z1*z2*z3"}) {
        const auto f = poly(text);
        for (const auto& face : boundary_at_infinity(f)) {
            const auto g = restrict_to_face(f, face.lattice_point_set());
            REQUIRE_FALSE(g.is_zero());
            // Minimizing convention with the origin above the face: -a, -d.
            std::vector<std::int64_t> w;
            for (const auto& a : face.functional)
                w.push_back(-a.convert_to<std::int64_t>());
            const auto t = make_type(HomogeneityKind::Radial, w, -face.offset.convert_to<std::int64_t>());
            CHECK(t.degree > 0);
            // Functionals of high-dimensional faces carry large weights, so
            // t^(q.p) loses a few more digits than for primitive types.
            CHECK(verify_scaling(g, t, 50, 3) <= 1e-8);
            CHECK(radial_type(g).has_value());
        }
    }
}

TEST_CASE("scaling actions")
{
    const auto t = make_type(HomogeneityKind::Radial, {1, 2}, 4);
    const ComplexVector z{Complex(1, 1), Complex(0, 2)};
    const auto w = act(t, 3.0, z);
    CHECK(std::abs(w[0] - 3.0 * z[0]) < 1e-14);
    CHECK(std::abs(w[1] - 9.0 * z[1]) < 1e-14);
    const auto p = make_type(HomogeneityKind::Polar, {1, -1}, 1);
    const Complex lambda = std::polar(1.0, 0.3);
    const auto u = act(p, lambda, z);
    CHECK(std::abs(u[1] - z[1] / lambda) < 1e-14);
}
