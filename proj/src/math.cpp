#include "spinmech/math.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {

double eval_cubic(double a, double b, double c, double d, double x)
{
    return ((a * x + b) * x + c) * x + d;
}

double eval_cubic_deriv(double a, double b, double c, double x)
{
    return (3.0 * a * x + 2.0 * b) * x + c;
}

double newton_polish(double a, double b, double c, double d, double x)
{
    for (int i = 0; i < 2; ++i) {
        const double fp = eval_cubic_deriv(a, b, c, x);
        if (fp == 0.0) break;
        x -= eval_cubic(a, b, c, d, x) / fp;
    }
    return x;
}

} // namespace

CubicRoots solve_cubic(double a, double b, double c, double d, double rel_tol)
{
    CubicRoots out;

    // Exact leading-coefficient degeneracy: fall back to quadratic / linear.
    if (a == 0.0) {
        if (b == 0.0) {
            if (c == 0.0) return out;
            out.count = 1;
            out.root[0] = -d / c;
            return out;
        }
        const double disc = c * c - 4.0 * b * d;
        if (disc < 0.0) return out;
        const double s = std::sqrt(disc);
        // Numerically stable quadratic roots
        const double q = -0.5 * (c + std::copysign(s, c));
        double r0 = q / b;
        double r1 = (q != 0.0) ? d / q : -c / b - r0;
        if (r0 > r1) std::swap(r0, r1);
        out.count = 2;
        out.root[0] = r0;
        out.root[1] = r1;
        out.marginal = disc < rel_tol * (c * c + 4.0 * std::fabs(b * d));
        return out;
    }

    // Depressed form t^3 + p t + q, x = t - b/(3a)
    const double bn = b / a, cn = c / a, dn = d / a;
    const double shift = bn / 3.0;
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;

    // discriminant = -4 p^3 - 27 q^2; three real roots iff > 0
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    const double disc_scale = 4.0 * std::fabs(p * p * p) + 27.0 * q * q;
    out.marginal = disc_scale > 0.0 && std::fabs(disc) < rel_tol * disc_scale;

    if (disc > 0.0) {
        // three real roots, trigonometric form
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        out.count = 3;
        for (int k = 0; k < 3; ++k)
            out.root[k] = m * std::cos(phi - two_pi * k / 3.0) - shift;
    } else {
        // one real root, Cardano
        const double half_q = 0.5 * q;
        const double s = std::sqrt(std::max(0.0, half_q * half_q + p * p * p / 27.0));
        const double u = std::cbrt(-half_q + s);
        const double v = std::cbrt(-half_q - s);
        out.count = 1;
        out.root[0] = u + v - shift;
    }

    for (int k = 0; k < out.count; ++k)
        out.root[k] = newton_polish(a, b, c, d, out.root[k]);
    std::sort(out.root.begin(), out.root.begin() + out.count);
    return out;
}

double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       int n_scan, double x_tol)
{
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i < n_scan; ++i) {
        const double x = lo + (hi - lo) * i / (n_scan - 1);
        const double fx = f(x);
        if (fx > best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    const double step = (hi - lo) / (n_scan - 1);
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);

    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace spinmech
