#include <doctest.h>

#include "mixinf/error.hpp"
#include "oracles.hpp"

using namespace mixinf;
using namespace testing;

namespace {

MixedTerm term(GaussianRational c, Exponents nu, Exponents mu)
{
    return {std::move(c), std::move(nu), std::move(mu)};
}

const GaussianRational one_plus_i{Rational(1), Rational(1)};

} // namespace

TEST_CASE("canonicalize merges and cancels")
{
    auto merged = MixedPolynomial::canonicalize(
        {term(1, {1, 0}, {1, 0}), term(-GaussianRational::i(), {1, 0}, {1, 0})}, 2);
    REQUIRE(merged.terms().size() == 1);
    CHECK(merged.terms()[0].coeff == GaussianRational(Rational(1), Rational(-1)));

    auto cancelled = MixedPolynomial::canonicalize({term(1, {2, 0}, {0, 0}), term(-1, {2, 0}, {0, 0})}, 2);
    CHECK(cancelled.is_zero());

    CHECK_THROWS_AS(MixedPolynomial::canonicalize({term(1, {1}, {0, 0})}, 2), Error);
}

TEST_CASE("F_EX expands to six canonical terms")
{
    const auto f = poly(f_ex_text);
    // Independent expansion, written term by term.
    const GaussianRational m1i = -one_plus_i;
    const auto expected = MixedPolynomial::canonicalize(
        {term(GaussianRational(Rational(1, 4)), {2, 0}, {0, 0}), term(GaussianRational(Rational(-1, 4)), {0, 0}, {2, 0}),
         term(-GaussianRational::i(), {1, 0}, {1, 0}), term(m1i, {1, 0}, {0, 1}), term(m1i, {0, 1}, {1, 0}),
         term(m1i, {0, 1}, {0, 1})},
        2);
    CHECK(f.terms().size() == 6);
    CHECK(f == expected);
}

TEST_CASE("canonicalize is idempotent and sorted")
{
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        const auto f = random_polynomial(rng, 3, 8, 3);
        CHECK(MixedPolynomial::canonicalize(f.terms(), 3) == f);
        for (std::size_t t = 1; t < f.terms().size(); ++t) {
            Exponents a = f.terms()[t - 1].nu, b = f.terms()[t].nu;
            a.insert(a.end(), f.terms()[t - 1].mu.begin(), f.terms()[t - 1].mu.end());
            b.insert(b.end(), f.terms()[t].mu.begin(), f.terms()[t].mu.end());
            CHECK(a < b);
        }
    }
}

TEST_CASE("evaluate")
{
    const ComplexVector p1{1.0, Complex(0, 1)};
    CHECK(std::abs(evaluate(poly(f_rad_text), p1) - Complex(2, 0)) < 1e-15);
    const ComplexVector p2{0.0, 1.0};
    CHECK(std::abs(evaluate(poly(f_ex_text), p2) - Complex(-1, -1)) < 1e-15);
    const ComplexVector p3{1.0, 1.0};
    CHECK(std::abs(evaluate(poly(g_pol_text), p3) - Complex(3, 0)) < 1e-15);
    const ComplexVector short_point{1.0};
    CHECK_THROWS_AS(evaluate(poly(f_rad_text), short_point), Error);
}

TEST_CASE("evaluate agrees with the expression tree")
{
    const auto parsed = parse(f_ex_text);
    const auto f = expand(parsed);
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        const auto z = random_point(rng, 2, 2.0);
        CHECK(std::abs(evaluate(f, z) - evaluate(parsed.root, z)) < 1e-12);
    }
}

TEST_CASE("Wirtinger gradients at hand-checked points")
{
    const Complex a(0.3, -1.2), b(-0.7, 0.4);
    const ComplexVector z{a, b};
    const auto g = wirtinger_gradients(poly(f_rad_text), z);
    CHECK(std::abs(g.d_z[0] - std::conj(a)) < 1e-15);
    CHECK(std::abs(g.d_z[1] - std::conj(b)) < 1e-15);
    CHECK(std::abs(g.d_zbar[0] - a) < 1e-15);
    CHECK(std::abs(g.d_zbar[1] - b) < 1e-15);

    const ComplexVector p{0.0, 1.0};
    const auto h = wirtinger_gradients(poly(f_ex_text), p);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(h.d_z[i] - Complex(-1, -1)) < 1e-15);
        CHECK(std::abs(h.d_zbar[i] - Complex(-1, -1)) < 1e-15);
    }
}

TEST_CASE("property: Wirtinger gradients match central finite differences")
{
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 1 + rng.next() % 3;
        const auto f = random_polynomial(rng, n, 1 + rng.next() % 6, 3);
        CHECK(fd_gradient_error(f, random_point(rng, n)) < 1e-6);
    }
}

TEST_CASE("face and coordinate restrictions")
{
    const auto f = poly(f_ex_text);
    const auto face = restrict_to_face(f, {{2, 0}});
    CHECK(face == poly("1/4*z1^2 - 1/4*zbar1^2 - i*z1*zbar1", 2));
    CHECK(restrict_to_face(f, {{2, 0}, {1, 1}, {0, 2}}) == f);
    CHECK(restrict_to_face(poly(cubic_text), {{3, 0}}) == poly("z1^3", 2));
    CHECK(restrict_to_face(f, {{5, 5}}).is_zero());

    CHECK(restrict_to_coordinates(f, {0}) == face);
    CHECK(restrict_to_coordinates(f, {0, 1}) == f);
    CHECK(restrict_to_coordinates(poly(f_rad_text), {1}) == poly("z2*zbar2", 2));
}

TEST_CASE("property: coordinate restriction keeps exactly the support inside the coordinate subspace")
{
    Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        const auto f = random_polynomial(rng, 3, 10, 2);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < 3; ++i)
            if (rng.next() % 2)
                keep.push_back(i);
        if (keep.empty())
            keep.push_back(0);
        std::set<LatticePoint> expected;
        for (const auto& t : f.terms()) {
            const auto p = support_point(t);
            bool inside = true;
            for (std::size_t i = 0; i < 3; ++i)
                if (p[i] != 0 && std::find(keep.begin(), keep.end(), i) == keep.end())
                    inside = false;
            if (inside)
                expected.insert(p);
        }
        const auto restricted = restrict_to_coordinates(f, keep);
        std::set<LatticePoint> got;
        for (const auto& t : restricted.terms())
            got.insert(support_point(t));
        CHECK(got == expected);
    }
}

TEST_CASE("effective variables")
{
    CHECK(effective_variables(poly(f_ex_text)) == std::vector<std::size_t>{0, 1});
    CHECK(effective_variables(poly("z1*zbar1", 2)) == std::vector<std::size_t>{0});
    CHECK(effective_variables(MixedPolynomial(2)).empty());
}

TEST_CASE("conjugation")
{
    CHECK(conjugate(poly("z1^2")) == poly("zbar1^2"));
    CHECK(conjugate(poly(f_rad_text)) == poly(f_rad_text));
    const auto f = poly(f_ex_text);
    const ComplexVector p{0.0, 1.0};
    CHECK(std::abs(evaluate(conjugate(f), p) - Complex(-1, 1)) < 1e-15);

    Rng rng(9);
    for (int k = 0; k < 30; ++k) {
        const auto g = random_polynomial(rng, 2, 6, 3);
        CHECK(conjugate(conjugate(g)) == g);
        const auto z = random_point(rng, 2);
        CHECK(std::abs(evaluate(conjugate(g), z) - std::conj(evaluate(g, z))) < 1e-12);
    }
}

TEST_CASE("arithmetic and exponent guard")
{
    const auto x = MixedPolynomial::variable(0, 2);
    const auto xb = MixedPolynomial::conj_variable(0, 2);
    CHECK((x * xb) == poly("z1*zbar1", 2));
    CHECK(x.pow(0) == MixedPolynomial::constant(1, 2));
    CHECK((x + xb) * (x - xb) == poly("z1^2 - zbar1^2", 2));
    CHECK_THROWS_AS(poly("z1^2147483647 * z1"), Error);
}

TEST_CASE("scales")
{
    const ComplexVector z{2.0, Complex(0, 3)};
    // |z1|^2 + |z2|^2
    CHECK(term_scale(poly(f_rad_text), z) == doctest::Approx(13));
    // g_i = 2 |z_i|
    CHECK(gradient_term_scale(poly(f_rad_text), z) == doctest::Approx(std::sqrt(16.0 + 36.0)));
}
