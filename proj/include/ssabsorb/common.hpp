#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace ssabsorb {

// Error taxonomy mapped to CLI exit codes (config=2, numeric=3, validation=4).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

// Compensated (Kahan) accumulator.
struct kahan {
    double sum = 0.0;
    double c = 0.0;

    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Double-double arithmetic (~31 significant digits), used where alternating
// sums lose up to 2^n digits to cancellation.  Only the operations needed by
// the coefficient pipeline are provided.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    static dd two_sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }
    static dd two_prod(double a, double b) {
        double p = a * b;
        double err = std::fma(a, b, -p);
        return {p, err};
    }
    static dd renorm(double h, double l) {
        double s = h + l;
        double e = l - (s - h);
        return {s, e};
    }

    friend dd operator+(dd a, dd b) {
        dd s = two_sum(a.hi, b.hi);
        double lo = s.lo + a.lo + b.lo;
        return renorm(s.hi, lo);
    }
    friend dd operator-(dd a, dd b) { return a + dd(-b.hi, -b.lo); }
    friend dd operator*(dd a, dd b) {
        dd p = two_prod(a.hi, b.hi);
        double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
        return renorm(p.hi, lo);
    }
    friend dd operator/(dd a, dd b) {
        double q1 = a.hi / b.hi;
        dd r = a - dd(q1) * b;
        double q2 = r.hi / b.hi;
        r = r - dd(q2) * b;
        double q3 = r.hi / b.hi;
        dd q = two_sum(q1, q2);
        return renorm(q.hi, q.lo + q3);
    }
    dd operator-() const { return {-hi, -lo}; }
    double to_double() const { return hi + lo; }
};

// Safeguarded Newton: bisection fallback keeps the iterate inside a bracket
// [lo, hi] with f(lo) < 0 < f(hi).  f must be continuous; convexity of the
// callers' functions makes Newton from the right monotone in practice.
inline double newton_safeguarded(const std::function<double(double)>& f,
                                 const std::function<double(double)>& df,
                                 double lo, double hi, double rel_tol = 1e-13,
                                 int max_iter = 200) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        if (fx < 0)
            lo = x;
        else
            hi = x;
        double d = df(x);
        double step = d != 0.0 ? fx / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= rel_tol * std::max(1.0, std::abs(xn))) {
            return xn;
        }
        x = xn;
    }
    return x;
}

// Adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
struct quad_result {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

quad_result integrate(const std::function<double(double)>& f, double a,
                      double b, double rel_tol = 1e-10,
                      double abs_tol = 1e-14, int max_depth = 30);

}  // namespace ssabsorb
