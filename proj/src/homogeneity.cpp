#include "mixinf/homogeneity.hpp"

#include "mixinf/error.hpp"
#include "mixinf/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mixinf {

const char* to_string(HomogeneityKind kind)
{
    return kind == HomogeneityKind::Radial ? "radial" : "polar";
}

namespace {

std::optional<HomogeneityType> solve_type(const MixedPolynomial& f, HomogeneityKind kind)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, "homogeneity", "the zero polynomial has no weight type");
    const std::size_t n = f.n_vars();

    // One row [s_1 .. s_n, -1] per term; unknowns (w, m).
    RationalMatrix rows;
    for (const auto& t : f.terms()) {
        RationalVector row(n + 1);
        for (std::size_t j = 0; j < n; ++j) {
            const auto nu = static_cast<std::int64_t>(t.nu[j]);
            const auto mu = static_cast<std::int64_t>(t.mu[j]);
            row[j] = kind == HomogeneityKind::Radial ? nu + mu : nu - mu;
        }
        row[n] = -1;
        rows.push_back(std::move(row));
    }
    const auto basis = nullspace(std::move(rows), n + 1);

    std::vector<std::vector<std::int64_t>> candidates;
    for (const auto& v : basis) {
        if (v[n] == 0)
            continue;
        auto p = primitive_integer(v);
        if (p[n] < 0)
            for (auto& x : p)
                x = -x;
        std::vector<std::int64_t> c;
        for (const auto& x : p)
            c.push_back(x.convert_to<std::int64_t>());
        candidates.push_back(std::move(c));
    }
    if (candidates.empty())
        return std::nullopt;
    const auto best = *std::min_element(candidates.begin(), candidates.end());

    HomogeneityType type;
    type.kind = kind;
    type.weights.assign(best.begin(), best.end() - 1);
    type.degree = best.back();
    type.unique = basis.size() == 1;
    return type;
}

} // namespace

std::optional<HomogeneityType> radial_type(const MixedPolynomial& f)
{
    return solve_type(f, HomogeneityKind::Radial);
}

std::optional<HomogeneityType> polar_type(const MixedPolynomial& f)
{
    return solve_type(f, HomogeneityKind::Polar);
}

ComplexVector act(const HomogeneityType& type, Complex factor, std::span<const Complex> z)
{
    ComplexVector out(z.begin(), z.end());
    for (std::size_t i = 0; i < out.size() && i < type.weights.size(); ++i) {
        const auto w = static_cast<double>(type.weights[i]);
        if (type.kind == HomogeneityKind::Radial)
            out[i] *= std::pow(factor.real(), w);
        else
            out[i] *= std::polar(1.0, w * std::arg(factor));
    }
    return out;
}

double verify_scaling(const MixedPolynomial& f, const HomogeneityType& type, std::size_t samples,
                      std::uint64_t seed)
{
    Rng rng(derive_seed(seed, hash_string("verify_scaling")));
    const std::size_t n = f.n_vars();
    double worst = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        ComplexVector z(n);
        for (auto& zi : z)
            zi = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0, 2 * std::numbers::pi));
        Complex factor, scale;
        if (type.kind == HomogeneityKind::Radial) {
            const double t = rng.uniform(0.5, 2.0);
            factor = t;
            scale = std::pow(t, static_cast<double>(type.degree));
        } else {
            const double theta = rng.uniform(0, 2 * std::numbers::pi);
            factor = std::polar(1.0, theta);
            scale = std::polar(1.0, theta * static_cast<double>(type.degree));
        }
        const Complex fz = evaluate(f, z);
        const auto moved = act(type, factor, z);
        worst = std::max(worst, std::abs(evaluate(f, moved) - scale * fz) / (1 + std::abs(fz)));
    }
    return worst;
}

Complex euler_residual(const MixedPolynomial& f, const HomogeneityType& radial, std::span<const Complex> z)
{
    const auto vg = evaluate_with_gradients(f, z);
    Complex sum = -static_cast<double>(radial.degree) * vg.value;
    for (std::size_t i = 0; i < z.size() && i < radial.weights.size(); ++i) {
        const auto q = static_cast<double>(radial.weights[i]);
        sum += q * (z[i] * vg.gradient.d_z[i] + std::conj(z[i]) * vg.gradient.d_zbar[i]);
    }
    return sum;
}

} // namespace mixinf
