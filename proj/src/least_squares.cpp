#include "mixinf/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mixinf {

namespace {

double evaluate(const ResidualFunction& residual, const Eigen::VectorXd& x, Eigen::VectorXd& r)
{
    residual(x, r);
    const double c = r.squaredNorm();
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

void jacobian(const ResidualFunction& residual, const Eigen::VectorXd& x, double rel_step, Eigen::MatrixXd& J)
{
    Eigen::VectorXd xp = x, rp(J.rows()), rm(J.rows());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = rel_step * std::max(1e-4, std::abs(x[k]));
        xp[k] = x[k] + h;
        residual(xp, rp);
        xp[k] = x[k] - h;
        residual(xp, rm);
        xp[k] = x[k];
        J.col(k) = (rp - rm) / (2 * h);
    }
}

} // namespace

LeastSquaresResult minimize_least_squares(const ResidualFunction& residual, Eigen::VectorXd x0,
                                          std::size_t n_residuals, const LeastSquaresOptions& options,
                                          const Projection& projection)
{
    const auto m = static_cast<Eigen::Index>(n_residuals);
    const auto n = x0.size();
    if (projection)
        projection(x0);

    LeastSquaresResult result;
    result.x = std::move(x0);
    Eigen::VectorXd r(m), r_trial(m);
    result.cost = evaluate(residual, result.x, r);

    Eigen::MatrixXd J(m, n);
    double damping = -1;
    double growth = 2;
    while (result.iterations < options.max_iterations && result.cost > options.cost_tolerance) {
        ++result.iterations;
        jacobian(residual, result.x, options.fd_step, J);
        if (!J.allFinite())
            break;
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        if (damping < 0)
            damping = options.initial_damping * std::max(JtJ.diagonal().maxCoeff(), 1e-300);

        bool accepted = false;
        bool converged = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            Eigen::MatrixXd H = JtJ;
            H.diagonal().array() += damping;
            const Eigen::VectorXd step = -H.ldlt().solve(g);
            if (!step.allFinite()) {
                damping *= growth;
                growth *= 2;
                continue;
            }
            if (step.norm() <= options.step_tolerance * (result.x.norm() + options.step_tolerance)) {
                converged = true;
                break;
            }
            Eigen::VectorXd trial = result.x + step;
            if (projection)
                projection(trial);
            const double trial_cost = evaluate(residual, trial, r_trial);
            if (trial_cost < result.cost) {
                const double predicted = -(2 * step.dot(g) + step.dot(JtJ * step));
                const double rho = predicted > 0 ? (result.cost - trial_cost) / predicted : 0.0;
                damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2 * rho - 1, 3));
                growth = 2;
                result.x = std::move(trial);
                r.swap(r_trial);
                result.cost = trial_cost;
                accepted = true;
            } else {
                damping *= growth;
                growth *= 2;
            }
        }
        if (!accepted || converged)
            break;
    }
    return result;
}

} // namespace mixinf
