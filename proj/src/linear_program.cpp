#include "mixinf/linear_program.hpp"

#include "mixinf/error.hpp"

namespace mixinf {

std::optional<RationalVector> find_feasible_point(const std::vector<LinearConstraint>& constraints,
                                                  std::size_t n_vars)
{
    using Sense = LinearConstraint::Sense;
    const std::size_t m = constraints.size();
    if (m == 0)
        return RationalVector(n_vars, Rational(0));

    std::size_t n_slack = 0;
    for (const auto& c : constraints) {
        if (c.coeffs.size() != n_vars)
            throw Error(ErrorKind::MismatchedArity, "lp", "constraint length differs from variable count");
        if (c.sense != Sense::Equal)
            ++n_slack;
    }

    // Columns: x+ (n), x- (n), slacks, artificials, rhs.
    const std::size_t slack0 = 2 * n_vars;
    const std::size_t art0 = slack0 + n_slack;
    const std::size_t rhs = art0 + m;
    std::vector<RationalVector> tab(m, RationalVector(rhs + 1, Rational(0)));
    std::vector<std::size_t> basis(m);

    std::size_t slack = slack0;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = constraints[r];
        for (std::size_t j = 0; j < n_vars; ++j) {
            tab[r][j] = c.coeffs[j];
            tab[r][n_vars + j] = -c.coeffs[j];
        }
        if (c.sense == Sense::GreaterEqual)
            tab[r][slack++] = -1;
        else if (c.sense == Sense::LessEqual)
            tab[r][slack++] = 1;
        tab[r][rhs] = c.rhs;
        if (tab[r][rhs] < 0)
            for (auto& x : tab[r])
                x = -x;
        tab[r][art0 + r] = 1;
        basis[r] = art0 + r;
    }

    // Reduced costs of "minimize the sum of artificials".
    RationalVector cost(rhs + 1, Rational(0));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j <= rhs; ++j)
            if (j < art0 || j == rhs)
                cost[j] -= tab[r][j];

    while (true) {
        std::size_t enter = rhs;
        for (std::size_t j = 0; j < rhs; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == rhs)
            break;

        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t r = 0; r < m; ++r) {
            if (tab[r][enter] <= 0)
                continue;
            Rational ratio = tab[r][rhs] / tab[r][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = std::move(ratio);
            }
        }
        if (leave == m)
            break;  // unbounded direction; cannot happen for a bounded-below phase one

        const Rational inv = Rational(1) / tab[leave][enter];
        for (auto& x : tab[leave])
            x *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || tab[r][enter] == 0)
                continue;
            const Rational factor = tab[r][enter];
            for (std::size_t j = 0; j <= rhs; ++j)
                if (tab[leave][j] != 0)
                    tab[r][j] -= factor * tab[leave][j];
        }
        if (cost[enter] != 0) {
            const Rational factor = cost[enter];
            for (std::size_t j = 0; j <= rhs; ++j)
                if (tab[leave][j] != 0)
                    cost[j] -= factor * tab[leave][j];
        }
        basis[leave] = enter;
    }

    // cost[rhs] holds minus the objective value.
    if (cost[rhs] != 0)
        return std::nullopt;

    RationalVector x(n_vars, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n_vars)
            x[basis[r]] += tab[r][rhs];
        else if (basis[r] < 2 * n_vars)
            x[basis[r] - n_vars] -= tab[r][rhs];
    }
    return x;
}

} // namespace mixinf
