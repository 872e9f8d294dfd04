#pragma once

#include <functional>
#include <vector>

#include "secrecy/errors.hpp"

namespace secrecy {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Stopping-criterion bundle shared by the iterative routines below.
// max_iter == 0 selects a routine-specific default.
struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    int max_iter = 0;
};

// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
// Power series below x = 1, modified-Lentz continued fraction above; relative
// error stays below 1e-12 across the switchover. Saturates to 0 once e^{-x}
// underflows (x > 708). Throws DomainError for x <= 0.
double exp_integral_e1(double x);

// e^x * E1(x). Stable for large x where E1 itself underflows; every rate
// formula in this library is expressed through this scaled form.
double exp_integral_e1_scaled(double x);

// Ein(x) = euler_gamma + ln(x) + E1(x), the entire part of E1. Computed by
// series for small x where the two log-singular pieces of the direct formula
// would cancel catastrophically. Accepts x >= 0.
double exp_integral_ein(double x);

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;
    long evaluations = 0;
};

// Adaptive Gauss-Kronrod 7/15 quadrature on the finite interval [a, b].
// Splits the worst panel until the summed error estimate drops below
// max(tol.abs, tol.rel * |value|). Nodes are interior, so integrable endpoint
// singularities (e.g. ln x at 0) converge by subdivision. Throws
// ConvergenceError (carrying the best estimate) when the split budget is
// exhausted and DomainError on a non-finite integrand value.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const Tolerance& tol = {});

// Root of f on [lo, hi]; the bracket must contain a sign change. Bisection
// with secant acceleration, falling back to pure bisection whenever the
// secant step stalls. Stops when |f| <= tol.abs or the bracket width falls
// below tol.rel * |midpoint|.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           const Tolerance& tol = {});

struct ScalarMaximum {
    double arg = 0.0;
    double value = 0.0;
};

// Coarse grid scan (at least 64 points) followed by golden-section
// refinement around the best grid cell. Ties break toward lo; a constant
// objective returns lo itself. Throws DomainError if the objective is
// non-finite anywhere it is evaluated.
ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              const Tolerance& tol = {}, int grid_points = 64);

// Monotonicity-preserving piecewise-cubic interpolant (Fritsch-Carlson
// slopes): never overshoots the data, so nonnegative node values yield a
// nonnegative interpolant. Evaluation clamps to the boundary values outside
// the node range.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double q) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace secrecy
