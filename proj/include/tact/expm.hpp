// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file expm.hpp
 * @brief Dense matrix exponential by Pade approximation with scaling and squaring.
 *
 * Degree selection and the backward-error thresholds follow Higham's 2005
 * algorithm (degrees 3, 5, 7, 9, 13). Works for real and complex scalars; a
 * real input yields an exactly real result.
 */

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace tact {

namespace detail {

template <typename Matrix>
double one_norm(const Matrix& a) {
    return static_cast<double>(a.cwiseAbs().colwise().sum().maxCoeff());
}

template <typename Matrix, std::size_t N>
Matrix pade_low_order(const Matrix& a, const std::array<double, N>& b) {
    using Scalar = typename Matrix::Scalar;
    const auto n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix power = ident;
    Matrix u_even = Matrix::Zero(n, n);
    Matrix v = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < N; k += 2) {
        u_even.noalias() += Scalar(b[k + 1]) * power;
        v.noalias() += Scalar(b[k]) * power;
        if (k + 2 < N) power = power * a2;
    }
    const Matrix u = a * u_even;
    return (v - u).partialPivLu().solve(v + u);
}

} // namespace detail

/// exp(A) for a square dense matrix.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& input) {
    using Matrix = typename Derived::PlainObject;
    using Scalar = typename Matrix::Scalar;
    if (input.rows() != input.cols()) throw std::invalid_argument("expm requires a square matrix");

    const Matrix a = input;
    const auto n = a.rows();
    if (n == 0) return a;

    static constexpr std::array<double, 4> b3{120., 60., 12., 1.};
    static constexpr std::array<double, 6> b5{30240., 15120., 3360., 420., 30., 1.};
    static constexpr std::array<double, 8> b7{17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    static constexpr std::array<double, 10> b9{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                               2162160.,     110880.,      3960.,       90.,        1.};
    static constexpr std::array<double, 14> b13{64764752532480000., 32382376266240000., 7771770303897600.,
                                                1187353796428800.,  129060195264000.,   10559470521600.,
                                                670442572800.,      33522128640.,       1323241920.,
                                                40840800.,          960960.,            16380.,
                                                182.,               1.};

    const double norm = detail::one_norm(a);
    if (norm <= 1.495585217958292e-2) return detail::pade_low_order(a, b3);
    if (norm <= 2.539398330063230e-1) return detail::pade_low_order(a, b5);
    if (norm <= 9.504178996162932e-1) return detail::pade_low_order(a, b7);
    if (norm <= 2.097847961257068e0) return detail::pade_low_order(a, b9);

    constexpr double theta13 = 5.371920351148152;
    int squarings = 0;
    if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Matrix as = a * Scalar(std::ldexp(1.0, -squarings));

    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = as * as;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const auto c = [&](int k) { return Scalar(b13[k]); };

    Matrix inner = c(13) * a6 + c(11) * a4 + c(9) * a2;
    Matrix u = as * (a6 * inner + c(7) * a6 + c(5) * a4 + c(3) * a2 + c(1) * ident);
    inner = c(12) * a6 + c(10) * a4 + c(8) * a2;
    Matrix v = a6 * inner + c(6) * a6 + c(4) * a4 + c(2) * a2 + c(0) * ident;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

} // namespace tact
