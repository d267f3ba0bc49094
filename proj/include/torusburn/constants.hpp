#pragma once

// Frozen explosion times T(d) of the scaled blow-up problem
// y^(d+1) = 2^d y y^(d), y(0) = ... = y^(d-1)(0) = 0, y^(d)(0) = 1.
//
// T(1) = pi/2 exactly (y = tan). The d >= 2 values have no closed form; they
// were computed once by solve_blasius at tolerance 1e-12, blow-up threshold
// 1e12, and are regression-tested against a fresh solve. Each value is
// cross-validated through the unscaled problem via T = 2^(-d/(d+1)) * S.
// Error bounds are the solver-reported ones (extrapolant spread over the
// last decade of growth plus the integrator-tolerance floor).

#include <cstddef>
#include <stdexcept>

namespace torusburn {

struct ExplosionConstant {
    int dim;
    double time;
    double error_bound;
};

inline constexpr ExplosionConstant kExplosionTimes[] = {
    {1, 1.570796326794437, 3e-11},
    {2, 1.970105734563305, 3e-11},
    {3, 2.283320364663229, 1.1e-07},
    {4, 2.542105677706132, 1.8e-05},
    {5, 2.765242244067001, 2.7e-04},
    {6, 2.968945280211979, 4.0e-03},
};

/// Frozen T(d); throws for d outside the tabulated range 1..6.
inline ExplosionConstant explosion_constant(int d) {
    for (const auto& c : kExplosionTimes)
        if (c.dim == d) return c;
    throw std::invalid_argument("explosion time tabulated only for d in [1, 6]");
}

} // namespace torusburn
