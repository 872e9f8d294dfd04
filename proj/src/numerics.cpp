#include "secrecy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace secrecy {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// Ein(x) = sum_{k>=1} (-1)^{k+1} x^k / (k k!), accurate for x <= 1 where the
// alternating terms shrink monotonically.
double ein_series(double x) {
    double sum = 0.0;
    double u = 1.0;  // (-x)^k / k!
    for (int k = 1; k <= 60; ++k) {
        u *= -x / k;
        const double term = -u / k;
        sum += term;
        if (std::fabs(term) <= kEps * std::fabs(sum)) break;
    }
    return sum;
}

// Modified-Lentz evaluation of the continued fraction for e^x E1(x), x > 1.
double e1_cf_scaled(double x) {
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + a / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

void require_positive_finite(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(who) + ": require finite x > 0");
}

}  // namespace

double exp_integral_e1(double x) {
    require_positive_finite(x, "exp_integral_e1");
    if (x <= 1.0) return ein_series(x) - euler_gamma - std::log(x);
    if (x > 708.0) return 0.0;  // e^{-x} underflows; E1(x) < 1e-307
    return std::exp(-x) * e1_cf_scaled(x);
}

double exp_integral_e1_scaled(double x) {
    require_positive_finite(x, "exp_integral_e1_scaled");
    if (x <= 1.0) return std::exp(x) * (ein_series(x) - euler_gamma - std::log(x));
    return e1_cf_scaled(x);
}

double exp_integral_ein(double x) {
    if (x == 0.0) return 0.0;
    require_positive_finite(x, "exp_integral_ein");
    if (x <= 1.0) return ein_series(x);
    return euler_gamma + std::log(x) + exp_integral_e1(x);
}

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1] (QUADPACK dqk15 nodes).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a, b;
    double value;
    double error;
    long id;
};

struct WorstFirst {
    bool operator()(const Panel& l, const Panel& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.id > r.id;  // deterministic tie-break by creation order
    }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long id, long& evals) {
    const double center = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    auto eval = [&](double x) {
        const double v = f(x);
        ++evals;
        if (!std::isfinite(v)) throw DomainError("integrate_1d: non-finite integrand value");
        return v;
    };

    const double fc = eval(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        fv1[j] = eval(center - absc);
        fv2[j] = eval(center + absc);
        const double fsum = fv1[j] + fv2[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    const double habs = std::fabs(hlgth);
    resabs *= habs;
    resasc *= habs;
    double err = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(err, 50.0 * kEps * resabs);

    return Panel{a, b, resk * hlgth, err, id};
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const Tolerance& tol) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("integrate_1d: bounds must be finite");
    if (a == b) return {0.0, 0.0, 0};

    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    const long max_splits = tol.max_iter > 0 ? tol.max_iter : 5000;
    long evals = 0;
    long next_id = 0;

    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> heap;
    Panel first = gk15(f, a, b, next_id++, evals);
    double value = first.value;
    double error = first.error;
    heap.push(first);

    long splits = 0;
    while (error > std::max(tol.abs, tol.rel * std::fabs(value))) {
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (splits >= max_splits || !(mid > worst.a && mid < worst.b))
            throw ConvergenceError("integrate_1d: split budget exhausted", sign * value, error);
        heap.pop();
        ++splits;
        const Panel left = gk15(f, worst.a, mid, next_id++, evals);
        const Panel right = gk15(f, mid, worst.b, next_id++, evals);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        error = std::max(error, 0.0);
        heap.push(left);
        heap.push(right);
    }
    return {sign * value, error, evals};
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           const Tolerance& tol) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw DomainError("find_root_bracketed: bad bracket");

    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) throw DomainError("find_root_bracketed: non-finite value");
        return v;
    };

    double flo = eval(lo);
    double fhi = eval(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw BracketError("find_root_bracketed: no sign change on bracket");

    const int max_iter = tol.max_iter > 0 ? tol.max_iter : 200;
    double width_two_ago = hi - lo;
    for (int it = 0; it < max_iter; ++it) {
        const double width = hi - lo;
        const double mid = 0.5 * (lo + hi);
        if (width <= tol.rel * std::fabs(mid)) return mid;
        if (width <= 4.0 * kEps * std::max({std::fabs(lo), std::fabs(hi), kTiny})) return mid;

        // Secant through the bracket endpoints, clipped away from the edges;
        // fall back to bisection when the step stalls against one side or the
        // bracket failed to halve over the previous two iterations.
        double x = mid;
        if (it % 2 == 0 || width <= 0.5 * width_two_ago) {
            const double xs = hi - fhi * (hi - lo) / (fhi - flo);
            const double margin = 0.01 * width;
            if (std::isfinite(xs) && xs > lo + margin && xs < hi - margin) x = xs;
        }
        width_two_ago = width;

        const double fx = eval(x);
        if (std::fabs(fx) <= tol.abs) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    throw ConvergenceError("find_root_bracketed: iteration budget exhausted", 0.5 * (lo + hi),
                           hi - lo);
}

ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              const Tolerance& tol, int grid_points) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw DomainError("maximize_scalar: bad interval");

    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) throw DomainError("maximize_scalar: non-finite objective value");
        return v;
    };

    if (lo == hi) return {lo, eval(lo)};

    const int n = std::max(grid_points, 64);
    double best_x = lo;
    double best_v = eval(lo);
    int best_i = 0;
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double v = eval(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }

    double a = lo + (hi - lo) * static_cast<double>(std::max(best_i - 1, 0)) / (n - 1);
    double b = lo + (hi - lo) * static_cast<double>(std::min(best_i + 1, n - 1)) / (n - 1);

    constexpr double kGolden = 0.61803398874989485;  // (sqrt(5) - 1) / 2
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    const int max_iter = tol.max_iter > 0 ? tol.max_iter : 200;
    for (int it = 0; it < max_iter; ++it) {
        if (fc > best_v) {
            best_v = fc;
            best_x = c;
        }
        if (fd > best_v) {
            best_v = fd;
            best_x = d;
        }
        if (b - a <= tol.rel * std::max(1.0, std::fabs(0.5 * (a + b))) + tol.abs) break;
        if (fc >= fd) {  // ties collapse toward the lower end
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = eval(d);
        }
    }
    return {best_x, best_v};
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || n != y_.size())
        throw DomainError("MonotoneCubic: need at least two matching nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw DomainError("MonotoneCubic: abscissae must be strictly increasing");

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    m_.assign(n, 0.0);
    if (n == 2) {
        m_[0] = m_[1] = d[0];
        return;
    }

    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0)
            m = 0.0;
        else if (d0 * d1 <= 0.0 && std::fabs(m) > 3.0 * std::fabs(d0))
            m = 3.0 * d0;
        return m;
    };
    m_[0] = endpoint(h[0], h[1], d[0], d[1]);
    m_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

double MonotoneCubic::operator()(double q) const {
    if (empty()) throw DomainError("MonotoneCubic: empty interpolant");
    if (q <= x_.front()) return y_.front();
    if (q >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

}  // namespace secrecy
