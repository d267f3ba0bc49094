#pragma once

// Numerical treatment of the blow-up Cauchy problem
//
//     y^(d+1)(t) = factor * y(t) * y^(d)(t),
//     y(0) = ... = y^(d-1)(0) = 0,  y^(d)(0) = 1,
//
// with factor = 2^d for the scaled problem and factor = 1 for the classical
// one. The maximal solution explodes at a finite time T; integration runs an
// adaptive embedded Runge-Kutta 5(4) pair (Dormand-Prince) to a blow-up
// threshold, and T is recovered by matched-asymptotic extrapolation: near
// blow-up y^(d) behaves like A*(T-t)^-(d+1), and substituting that rate into
// the equation forces A = (d+1)!/factor, hence y(t) ~ (d+1)/(factor*(T-t))
// and T ~ t + (d+1)/(factor*y(t)). The extrapolant is validated against the
// d=1 closed form y = tan, T = pi/2.
//
// Also here: the Volterra self-consistency check
//     y^(d)(t) = exp(factor/d! * integral_0^t (t-s)^d y^(d)(s) ds),
// the scaled/unscaled rescaling identity, and the monotone iterates
//     f_0 = 1,  f_{p+1}(t) = exp(2^d/d! * integral_0^t (t-s)^d f_p(s) ds),
// which increase pointwise to y^(d).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusburn/errors.hpp"

namespace torusburn {

struct BlasiusOptions {
    double blowup_threshold = 1e10; ///< stop once y^(d) reaches this
    double tolerance = 1e-10;       ///< local error per unit step (abs and rel)
    double max_step = 0.01;         ///< cap so the stored grid supports quadrature
};

/// Stored trajectory of (y, y', ..., y^(d)) at the accepted integration
/// points, with the extrapolated explosion time.
class BlasiusSolution {
public:
    int order = 0;          ///< d
    double factor = 0.0;    ///< multiplicative constant of the equation
    std::vector<double> times;
    std::vector<std::vector<double>> states; ///< states[i][j] = y^(j)(times[i])
    double explosion_time = 0.0;
    double explosion_error = 0.0;

    double last_time() const { return times.back(); }

    /// Time derivative of component j at a stored state.
    double derivative(const std::vector<double>& state, int j) const {
        if (j < order) return state[static_cast<std::size_t>(j) + 1];
        return factor * state[0] * state[static_cast<std::size_t>(order)];
    }

    /// y^(j)(t) by cubic Hermite interpolation on the stored panel
    /// (exact node values and node derivatives).
    double value(int j, double t) const {
        if (j < 0 || j > order) throw std::invalid_argument("derivative order out of range");
        if (t < times.front() || t > times.back())
            throw std::domain_error("time outside the solved range");
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - times.begin());
        if (hi == times.size()) --hi;
        if (hi == 0) ++hi;
        const std::size_t lo = hi - 1;
        const double h = times[hi] - times[lo];
        const double s = (t - times[lo]) / h;
        const double ya = states[lo][static_cast<std::size_t>(j)];
        const double yb = states[hi][static_cast<std::size_t>(j)];
        const double ma = derivative(states[lo], j);
        const double mb = derivative(states[hi], j);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * ya + (s3 - 2 * s2 + s) * h * ma +
               (-2 * s3 + 3 * s2) * yb + (s3 - s2) * h * mb;
    }

    /// The limiting unburned fraction 1/y^(d)(t); defined on [0, T).
    double limit_profile(double t) const {
        if (t < 0.0 || t >= explosion_time)
            throw std::domain_error("limit profile is defined on [0, T)");
        if (t > times.back()) throw std::domain_error("time beyond the stored trajectory");
        return 1.0 / value(order, t);
    }
};

namespace detail {

/// Dormand-Prince 5(4) with FSAL, PI-free standard step control.
/// Integrates u_j' = u_{j+1} (j < d), u_d' = factor*u_0*u_d from
/// (0,...,0,1) until u_d >= threshold, storing every accepted point.
inline BlasiusSolution integrate_blowup(int d, double factor, const BlasiusOptions& opt) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (d > 8) throw std::invalid_argument("dimension above 8 is not supported");
    if (!(opt.blowup_threshold > 1.0) || !(opt.tolerance > 0.0) || !(opt.max_step > 0.0))
        throw std::invalid_argument("bad solver options");

    const std::size_t m = static_cast<std::size_t>(d) + 1;
    const auto rhs = [&](const std::vector<double>& u, std::vector<double>& du) {
        for (std::size_t j = 0; j + 1 < m; ++j) du[j] = u[j + 1];
        du[m - 1] = factor * u[0] * u[m - 1];
    };

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    BlasiusSolution sol;
    sol.order = d;
    sol.factor = factor;

    std::vector<double> u(m, 0.0);
    u[m - 1] = 1.0;
    double t = 0.0;
    sol.times.push_back(t);
    sol.states.push_back(u);

    std::vector<double> k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m), unew(m);
    rhs(u, k1);
    double h = std::min(0.01, opt.max_step);
    const double atol = opt.tolerance, rtol = opt.tolerance;
    bool rejected = false;
    for (long step = 0; step < 20'000'000; ++step) {
        if (h < 1e-14 * std::max(1.0, t))
            throw NumericalError("step size underflow near t=" + std::to_string(t));
        for (std::size_t j = 0; j < m; ++j) tmp[j] = u[j] + h * a21 * k1[j];
        rhs(tmp, k2);
        for (std::size_t j = 0; j < m; ++j) tmp[j] = u[j] + h * (a31 * k1[j] + a32 * k2[j]);
        rhs(tmp, k3);
        for (std::size_t j = 0; j < m; ++j)
            tmp[j] = u[j] + h * (a41 * k1[j] + a42 * k2[j] + a43 * k3[j]);
        rhs(tmp, k4);
        for (std::size_t j = 0; j < m; ++j)
            tmp[j] = u[j] + h * (a51 * k1[j] + a52 * k2[j] + a53 * k3[j] + a54 * k4[j]);
        rhs(tmp, k5);
        for (std::size_t j = 0; j < m; ++j)
            tmp[j] = u[j] + h * (a61 * k1[j] + a62 * k2[j] + a63 * k3[j] + a64 * k4[j] + a65 * k5[j]);
        rhs(tmp, k6);
        for (std::size_t j = 0; j < m; ++j)
            unew[j] = u[j] + h * (b1 * k1[j] + b3 * k3[j] + b4 * k4[j] + b5 * k5[j] + b6 * k6[j]);
        rhs(unew, k7);

        double err = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double ej = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] +
                                   e6 * k6[j] + e7 * k7[j]);
            const double sc = atol + rtol * std::max(std::abs(u[j]), std::abs(unew[j]));
            err += (ej / sc) * (ej / sc);
        }
        err = std::sqrt(err / static_cast<double>(m));

        if (err <= 1.0 && std::isfinite(unew[m - 1])) {
            t += h;
            u = unew;
            k1 = k7; // first-same-as-last
            sol.times.push_back(t);
            sol.states.push_back(u);
            if (u[m - 1] >= opt.blowup_threshold) {
                // matched-asymptotic extrapolation, error bound from the
                // estimator's spread over the last decade of growth
                const auto estimate = [&](std::size_t i) {
                    return sol.times[i] +
                           static_cast<double>(d + 1) / (factor * sol.states[i][0]);
                };
                const std::size_t last = sol.times.size() - 1;
                sol.explosion_time = estimate(last);
                double spread = 0.0;
                for (std::size_t i = last; i-- > 0;) {
                    if (sol.states[i][m - 1] < opt.blowup_threshold / 10.0) break;
                    spread = std::max(spread, std::abs(estimate(i) - sol.explosion_time));
                }
                // the spread misses the integrator's accumulated global
                // error, so keep a tolerance-proportional floor
                sol.explosion_error = std::max(
                    {spread, 10.0 * opt.tolerance * (1.0 + sol.explosion_time),
                     16.0 * std::numeric_limits<double>::epsilon() * sol.explosion_time});
                return sol;
            }
            const double fac = std::min(rejected ? 1.0 : 5.0,
                                        std::max(0.2, 0.9 * std::pow(err > 0 ? err : 1e-16, -0.2)));
            h = std::min(h * fac, opt.max_step);
            rejected = false;
        } else {
            if (!std::isfinite(err) || !std::isfinite(unew[m - 1])) h *= 0.1;
            else h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected = true;
        }
        if (t > 100.0)
            throw NumericalError("no blow-up detected before t=100; check the problem setup");
    }
    throw NumericalError("step budget exhausted before reaching the blow-up threshold");
}

/// integral over [a, b] of (t - s)^d * H(s) ds where H is the cubic Hermite
/// interpolant of y^(d) on the panel; 5-point Gauss-Legendre (exact through
/// degree 9, which covers d <= 6 exactly).
inline double panel_kernel_integral(const BlasiusSolution& sol, std::size_t panel, double a,
                                    double b, double t) {
    static const std::array<double, 5> nodes = {
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    static const std::array<double, 5> weights = {
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
        0.2369268850561891};
    const int d = sol.order;
    const double ta = sol.times[panel], tb = sol.times[panel + 1];
    const double h = tb - ta;
    const double ya = sol.states[panel][static_cast<std::size_t>(d)];
    const double yb = sol.states[panel + 1][static_cast<std::size_t>(d)];
    const double ma = sol.derivative(sol.states[panel], d);
    const double mb = sol.derivative(sol.states[panel + 1], d);
    const double half = (b - a) / 2.0, mid = (a + b) / 2.0;
    double acc = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double s = mid + half * nodes[q];
        const double x = (s - ta) / h, x2 = x * x, x3 = x2 * x;
        const double val = (2 * x3 - 3 * x2 + 1) * ya + (x3 - 2 * x2 + x) * h * ma +
                           (-2 * x3 + 3 * x2) * yb + (x3 - x2) * h * mb;
        acc += weights[q] * std::pow(t - s, d) * val;
    }
    return acc * half;
}

} // namespace detail

/// Integrate the scaled problem (factor 2^d) to the blow-up threshold.
inline BlasiusSolution solve_blasius(int d, const BlasiusOptions& opt = {}) {
    return detail::integrate_blowup(d, std::exp2(static_cast<double>(d)), opt);
}

/// Integrate the unscaled problem (factor 1).
inline BlasiusSolution solve_unscaled(int d, const BlasiusOptions& opt = {}) {
    return detail::integrate_blowup(d, 1.0, opt);
}

struct ExplosionEstimate {
    double time = 0.0;
    double error_bound = 0.0;
};

inline ExplosionEstimate explosion_time(int d, const BlasiusOptions& opt = {}) {
    const BlasiusSolution sol = solve_blasius(d, opt);
    return {sol.explosion_time, sol.explosion_error};
}

/// Max over the Volterra grid of the relative discrepancy between y^(d)(t)
/// and exp(factor/d! * integral_0^t (t-s)^d y^(d)(s) ds), the integral taken
/// by per-panel Gauss-Legendre over the stored trajectory. An independent
/// route: the left side comes from the stepper, the right from quadrature.
inline double volterra_residual(const BlasiusSolution& sol, const std::vector<double>& grid) {
    double dfact = 1.0;
    for (int i = 2; i <= sol.order; ++i) dfact *= static_cast<double>(i);
    double worst = 0.0;
    for (double t : grid) {
        if (t < 0.0 || t > sol.last_time())
            throw std::domain_error("volterra grid point outside the solved range");
        double integral = 0.0;
        for (std::size_t panel = 0; panel + 1 < sol.times.size(); ++panel) {
            const double a = sol.times[panel];
            if (a >= t) break;
            const double b = std::min(sol.times[panel + 1], t);
            integral += detail::panel_kernel_integral(sol, panel, a, b, t);
        }
        const double lhs = sol.value(sol.order, t);
        const double rhs = std::exp(sol.factor / dfact * integral);
        worst = std::max(worst, std::abs(rhs / lhs - 1.0));
    }
    return worst;
}

/// Solves the scaled and unscaled problems independently and returns
/// max(|T - beta*S|, sup_grid |y(t) - beta^d * x(t/beta)|), beta = 2^(-d/(d+1)).
inline double rescaling_check(int d, const BlasiusOptions& opt = {}) {
    const BlasiusSolution scaled = solve_blasius(d, opt);
    const BlasiusSolution unscaled = solve_unscaled(d, opt);
    const double beta = std::exp2(-static_cast<double>(d) / (d + 1));
    double residual = std::abs(scaled.explosion_time - beta * unscaled.explosion_time);
    const double beta_d = std::pow(beta, d);
    const double t_max = 0.9 * std::min(scaled.explosion_time, beta * unscaled.explosion_time);
    const int points = 256;
    for (int i = 0; i <= points; ++i) {
        const double t = t_max * static_cast<double>(i) / points;
        const double y = scaled.value(0, t);
        const double x = unscaled.value(0, t / beta);
        residual = std::max(residual, std::abs(y - beta_d * x));
    }
    return residual;
}

/// The monotone iterates f_0 = 1, f_{p+1} = exp(2^d/d! * conv) on a shared
/// uniform grid, by composite trapezoid over the convolution kernel.
struct PicardIterates {
    int order = 0;
    std::vector<double> grid;                 ///< t_0 = 0 .. t_M = t_end
    std::vector<std::vector<double>> levels;  ///< levels[p][i] = f_p(t_i)

    double eval(int p, double t) const {
        const auto& f = levels[static_cast<std::size_t>(p)];
        if (t <= 0.0) return f.front();
        if (t >= grid.back()) return f.back();
        const double pos = t / grid.back() * static_cast<double>(grid.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        return f[lo] * (1.0 - frac) + f[lo + 1] * frac;
    }
};

/// Computes f_0..f_p_max on [0, t_end]. t_end must stay below the explosion
/// time; pass a known estimate to avoid re-solving.
inline PicardIterates picard_iterates(int d, int p_max, double t_end, std::size_t grid_size = 4097,
                                      double explosion_hint = 0.0) {
    if (d < 1 || p_max < 0) throw std::invalid_argument("bad picard parameters");
    if (grid_size < 2) throw std::invalid_argument("grid too small");
    const double explosion = explosion_hint > 0.0 ? explosion_hint : explosion_time(d).time;
    if (!(t_end < explosion))
        throw std::invalid_argument("t_end must be below the explosion time");
    double dfact = 1.0;
    for (int i = 2; i <= d; ++i) dfact *= static_cast<double>(i);
    const double c = std::exp2(static_cast<double>(d)) / dfact;

    PicardIterates out;
    out.order = d;
    const std::size_t M = grid_size - 1;
    const double h = t_end / static_cast<double>(M);
    out.grid.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) out.grid[i] = h * static_cast<double>(i);
    out.levels.assign(static_cast<std::size_t>(p_max) + 1, std::vector<double>(grid_size, 1.0));

    for (int p = 0; p < p_max; ++p) {
        const auto& f = out.levels[static_cast<std::size_t>(p)];
        auto& g = out.levels[static_cast<std::size_t>(p) + 1];
        g[0] = 1.0;
        for (std::size_t i = 1; i < grid_size; ++i) {
            const double ti = out.grid[i];
            double acc = 0.5 * std::pow(ti, d) * f[0]; // j = 0 endpoint
            for (std::size_t j = 1; j < i; ++j)
                acc += std::pow(ti - out.grid[j], d) * f[j];
            // j = i endpoint contributes nothing: kernel vanishes there
            g[i] = std::exp(c * h * acc);
        }
    }
    return out;
}

} // namespace torusburn
