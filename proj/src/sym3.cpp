#include "spinmech/sym3.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {

Vec3 cross(const Vec3& u, const Vec3& v)
{
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double norm(const Vec3& u) { return std::sqrt(dot(u, u)); }

Vec3 normalized(const Vec3& u)
{
    const double n = norm(u);
    return {u[0] / n, u[1] / n, u[2] / n};
}

Vec3 column(const Mat3& m, int j) { return {m[0][j], m[1][j], m[2][j]}; }

Mat3 shifted(const Mat3& m, double lambda)
{
    Mat3 s = m;
    for (int i = 0; i < 3; ++i) s[i][i] -= lambda;
    return s;
}

// Largest cross product among column pairs of (m - lambda I): spans the
// eigenvector when the eigenvalue is simple.
Vec3 simple_eigenvector(const Mat3& m, double lambda)
{
    const Mat3 s = shifted(m, lambda);
    const Vec3 c0 = column(s, 0), c1 = column(s, 1), c2 = column(s, 2);
    Vec3 best = cross(c0, c1);
    double best_n = norm(best);
    for (const Vec3& v : {cross(c1, c2), cross(c0, c2)}) {
        const double n = norm(v);
        if (n > best_n) {
            best = v;
            best_n = n;
        }
    }
    return normalized(best);
}

// Orthonormal pair spanning the plane orthogonal to the largest column of
// (m - lambda I): the eigenplane of a double eigenvalue.
std::array<Vec3, 2> double_eigenvectors(const Mat3& m, double lambda)
{
    const Mat3 s = shifted(m, lambda);
    Vec3 n = column(s, 0);
    double best_n = norm(n);
    for (int j = 1; j < 3; ++j) {
        const Vec3 c = column(s, j);
        const double cn = norm(c);
        if (cn > best_n) {
            n = c;
            best_n = cn;
        }
    }
    if (best_n == 0.0) {
        // fully degenerate block; any orthonormal pair will do
        return {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
    }
    n = normalized(n);
    // axis least aligned with n
    Vec3 seed{0, 0, 0};
    int k = std::fabs(n[0]) <= std::fabs(n[1]) ? 0 : 1;
    if (std::fabs(n[2]) < std::fabs(n[k])) k = 2;
    seed[k] = 1.0;
    Vec3 u = cross(n, seed);
    u = normalized(u);
    Vec3 v = cross(n, u);
    return {u, normalized(v)};
}

double char_poly(const Mat3& m, double x)
{
    const Mat3 s = shifted(m, x);
    return s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) -
           s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
           s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
}

double char_poly_deriv(const Mat3& m, double x)
{
    // d/dx det(m - xI) via sum of 2x2 principal minors of (m - xI)
    const Mat3 s = shifted(m, x);
    const double m0 = s[1][1] * s[2][2] - s[1][2] * s[2][1];
    const double m1 = s[0][0] * s[2][2] - s[0][2] * s[2][0];
    const double m2 = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    return -(m0 + m1 + m2);
}

} // namespace

Sym3Eigen sym3_eigensystem(const Mat3& a)
{
    // Normalize for dynamic range
    double nm = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) nm = std::max(nm, std::fabs(a[i][j]));

    Sym3Eigen out;
    if (nm == 0.0) {
        out.vector = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        return out;
    }

    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] / nm;

    // Trigonometric eigenvalues of the symmetric matrix (characteristic cubic)
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p01 = m[0][1], p02 = m[0][2], p12 = m[1][2];
    const double d0 = m[0][0] - q, d1 = m[1][1] - q, d2 = m[2][2] - q;
    const double p2 =
        d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * (p01 * p01 + p02 * p02 + p12 * p12);
    const double p = std::sqrt(p2 / 6.0);

    Vec3 lam;
    if (p == 0.0) {
        lam = {q, q, q};
    } else {
        Mat3 b;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
        const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                            b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                            b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        const double r = std::clamp(detb / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        lam[2] = q + 2.0 * p * std::cos(phi);
        lam[0] = q + 2.0 * p * std::cos(phi + two_pi / 3.0);
        lam[1] = 3.0 * q - lam[0] - lam[2];
        std::sort(lam.begin(), lam.end());

        // acos loses half the digits when two roots nearly coincide. Polish
        // the isolated root (Newton, well conditioned there) and recover the
        // remaining pair from the exact trace / second-invariant relations.
        const int iso = (lam[1] - lam[0] >= lam[2] - lam[1]) ? 0 : 2;
        double x = lam[iso];
        for (int it = 0; it < 2; ++it) {
            const double fp = char_poly_deriv(m, x);
            if (fp == 0.0) break;
            x -= char_poly(m, x) / fp;
        }
        const double tr = m[0][0] + m[1][1] + m[2][2];
        const double c2 = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) +
                          (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                          (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
        const double s = tr - x;
        const double prod = c2 - x * s;
        const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * prod));
        lam = {x, 0.5 * (s - disc), 0.5 * (s + disc)};
    }
    std::sort(lam.begin(), lam.end());

    // Eigenvectors; gap threshold relative to the normalized matrix (norm ~ 1)
    constexpr double degen_tol = 1e-7;
    const double g01 = lam[1] - lam[0];
    const double g12 = lam[2] - lam[1];

    if (g01 < degen_tol && g12 < degen_tol) {
        out.vector = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    } else if (g01 < degen_tol) {
        out.vector[2] = simple_eigenvector(m, lam[2]);
        const auto pair = double_eigenvectors(m, 0.5 * (lam[0] + lam[1]));
        out.vector[0] = pair[0];
        out.vector[1] = pair[1];
    } else if (g12 < degen_tol) {
        out.vector[0] = simple_eigenvector(m, lam[0]);
        const auto pair = double_eigenvectors(m, 0.5 * (lam[1] + lam[2]));
        out.vector[1] = pair[0];
        out.vector[2] = pair[1];
    } else {
        for (int i = 0; i < 3; ++i) out.vector[i] = simple_eigenvector(m, lam[i]);
        // Gram-Schmidt pass; a no-op at machine precision for separated roots
        for (int j = 1; j < 3; ++j) {
            Vec3 w = out.vector[j];
            for (int k = 0; k < j; ++k) {
                const double c = dot(w, out.vector[k]);
                for (int i = 0; i < 3; ++i) w[i] -= c * out.vector[k][i];
            }
            out.vector[j] = normalized(w);
        }
    }

    for (int i = 0; i < 3; ++i) out.value[i] = lam[i] * nm;
    return out;
}

} // namespace spinmech
