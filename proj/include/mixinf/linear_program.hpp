#ifndef MIXINF_LINEAR_PROGRAM_HPP
#define MIXINF_LINEAR_PROGRAM_HPP

#include <optional>
#include <vector>

#include "mixinf/rational.hpp"

namespace mixinf {

struct LinearConstraint {
    enum class Sense { Equal, GreaterEqual, LessEqual };

    RationalVector coeffs;
    Sense sense = Sense::Equal;
    Rational rhs{0};
};

/**
 * Exact feasibility for a system of linear constraints over free rational
 * variables. Runs phase one of the simplex method on a dense tableau with
 * Bland's rule, so it always terminates. Returns a feasible point or
 * nothing.
 */
std::optional<RationalVector> find_feasible_point(const std::vector<LinearConstraint>& constraints,
                                                  std::size_t n_vars);

} // namespace mixinf

#endif
