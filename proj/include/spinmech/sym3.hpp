// Closed-form eigendecomposition of real symmetric 3x3 matrices.
#pragma once

#include <array>

namespace spinmech {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

struct Sym3Eigen {
    Vec3 value{};                 // ascending
    std::array<Vec3, 3> vector{}; // orthonormal, vector[i] pairs with value[i]
};

// Eigenvalues from the trigonometric solution of the characteristic cubic,
// one Newton polish step per root; eigenvectors by null-space extraction with
// explicit handling of (near-)degenerate pairs. Exact to machine precision at
// this size; input is normalized internally for dynamic range.
Sym3Eigen sym3_eigensystem(const Mat3& a);

} // namespace spinmech
