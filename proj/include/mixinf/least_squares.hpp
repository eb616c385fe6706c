#ifndef MIXINF_LEAST_SQUARES_HPP
#define MIXINF_LEAST_SQUARES_HPP

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace mixinf {

/// Fills r (already sized) with the residual vector at x.
using ResidualFunction = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;
/// Maps an iterate back onto the feasible set (sphere, box, ...).
using Projection = std::function<void(Eigen::VectorXd& x)>;

struct LeastSquaresOptions {
    std::size_t max_iterations = 200;
    double fd_step = 1e-6;          ///< relative central-difference step
    double initial_damping = 1e-3;  ///< times the largest diagonal of J^T J
    double cost_tolerance = 1e-28;  ///< stop once ||r||^2 falls below this
    double step_tolerance = 1e-14;  ///< relative step size at which to stop
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    double cost = 0;  ///< ||r(x)||^2
    std::size_t iterations = 0;
};

/**
 * Levenberg-Marquardt on ||r(x)||^2 with a central finite-difference
 * Jacobian. The optional projection is applied to every trial point, so the
 * iterates stay feasible; works with more unknowns than residuals.
 */
LeastSquaresResult minimize_least_squares(const ResidualFunction& residual, Eigen::VectorXd x0,
                                          std::size_t n_residuals, const LeastSquaresOptions& options = {},
                                          const Projection& projection = {});

} // namespace mixinf

#endif
