// Small numerical utilities: closed-form cubic roots, scalar maximization.
#pragma once

#include <array>
#include <functional>

namespace spinmech {

// Real roots of a x^3 + b x^2 + c x + d = 0.
// Cardano/trigonometric closed form, each root polished by two Newton steps.
// Degrades gracefully to quadratic/linear when leading coefficients vanish
// relative to the coefficient scale. `marginal` flags a near-degenerate
// double root (|discriminant| below rel_tol of its own magnitude scale).
struct CubicRoots {
    int count = 0;                    // number of real roots (1..3), 0 if identically degenerate
    std::array<double, 3> root{};     // ascending
    bool marginal = false;
};

CubicRoots solve_cubic(double a, double b, double c, double d, double rel_tol = 1e-9);

// Maximizes f over [lo, hi] assuming unimodality: coarse scan (n_scan points)
// to bracket, then golden-section refinement. Returns argmax.
double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       int n_scan = 257, double x_tol = 1e-12);

} // namespace spinmech
