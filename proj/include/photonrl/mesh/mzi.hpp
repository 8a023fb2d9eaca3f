#pragma once

#include <array>
#include <complex>

namespace photonrl {

using Mat2c = std::array<std::array<std::complex<double>, 2>, 2>;

// Transfer matrix of a Mach-Zehnder interferometer: a tunable phase shifter
// phi between two symmetric beamsplitters,
//
//   U = 1/2 [[1, -1], [1, 1]] diag(1, e^{i phi}) [[1, -1], [1, 1]].
//
// U is unitary with bar-transmission |U11|^2 = sin^2(phi / 2); a beamsplitter
// of angle theta is realized with internal phase phi = 2 theta.
inline Mat2c mzi_unitary(double phi) {
    const std::complex<double> e(std::cos(phi), std::sin(phi));
    Mat2c u;
    u[0][0] = 0.5 * (1.0 - e);
    u[0][1] = 0.5 * (-1.0 - e);
    u[1][0] = 0.5 * (1.0 + e);
    u[1][1] = 0.5 * (-1.0 + e);
    return u;
}

inline Mat2c mat2c_multiply(const Mat2c& a, const Mat2c& b) {
    Mat2c out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
    return out;
}

inline Mat2c mat2c_adjoint(const Mat2c& a) {
    Mat2c out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out[r][c] = std::conj(a[c][r]);
    return out;
}

}  // namespace photonrl
