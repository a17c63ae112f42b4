// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file banded_operator.hpp
 * @brief Operators of bandwidth <= 2 on the (2J+1)-dimensional spin space and
 *        the standard collective-spin operators.
 *
 * Band d stores the elements A(r, r + d). Entry k of band d is the element
 * with row r = k + max(0, -d), so every band of offset |d| has 2J+1-|d| entries.
 * In the descending-M basis J+ lives on band +1 and J- on band -1.
 */

#pragma once

#include <tact/spin.hpp>
#include <tact/spin_state.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

namespace tact {

enum class Hermiticity { hermitian, skew_hermitian, general };

enum class SpinOperatorKind { Jx, Jy, Jz, Jplus, Jminus, Jplus2_minus_Jminus2 };

inline constexpr int kMaxBandOffset = 2;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
class BasicBandedOperator {
public:
    using Scalar = std::complex<Real>;
    using Vector = ComplexVector<Real>;
    using Bands = std::array<Vector, 2 * kMaxBandOffset + 1>;

    /// Zero operator with the given tag.
    explicit BasicBandedOperator(Spin j, Hermiticity tag = Hermiticity::hermitian) : j_(j), tag_(tag) {}

    /// Validates band lengths and the declared hermiticity (elementwise within 1e-14).
    BasicBandedOperator(Spin j, Bands bands, Hermiticity tag) : j_(j), bands_(std::move(bands)), tag_(tag) {
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& b = bands_[slot(d)];
            if (b.size() != 0 && b.size() != band_length(d)) {
                throw InvalidArgument("band " + std::to_string(d) + " has length " + std::to_string(b.size()) +
                                      ", expected " + std::to_string(band_length(d)));
            }
        }
        if (tag_ != Hermiticity::general && !satisfies(tag_, Real(1e-14))) {
            throw InvalidArgument("band data does not respect the declared hermiticity tag");
        }
    }

    [[nodiscard]] Spin spin() const noexcept { return j_; }
    [[nodiscard]] int dim() const noexcept { return j_.dim(); }
    [[nodiscard]] Hermiticity hermiticity() const noexcept { return tag_; }

    [[nodiscard]] int band_length(int d) const noexcept { return std::max(0, dim() - std::abs(d)); }

    /// Band d, or an empty vector if the band is structurally zero.
    [[nodiscard]] const Vector& band(int d) const { return bands_.at(slot(d)); }
    [[nodiscard]] bool has_band(int d) const {
        return std::abs(d) <= kMaxBandOffset && bands_[slot(d)].size() != 0 && !bands_[slot(d)].isZero(Real(0));
    }

    [[nodiscard]] Scalar element(int row, int col) const {
        const int d = col - row;
        if (std::abs(d) > kMaxBandOffset) return Scalar(0);
        const auto& b = bands_[slot(d)];
        if (b.size() == 0) return Scalar(0);
        return b(row - std::max(0, -d));
    }

    /// True when every stored element has zero imaginary part.
    [[nodiscard]] bool is_real() const {
        for (const auto& b : bands_) {
            if (b.size() != 0 && !b.imag().isZero(Real(0))) return false;
        }
        return true;
    }

    /// Whether the stored elements obey `tag` within `tol` (relative to max(1, |element|)).
    [[nodiscard]] bool satisfies(Hermiticity tag, Real tol) const {
        if (tag == Hermiticity::general) return true;
        const Real sign = tag == Hermiticity::hermitian ? Real(1) : Real(-1);
        for (int r = 0; r < dim(); ++r) {
            for (int c = std::max(0, r - kMaxBandOffset); c <= std::min(dim() - 1, r + kMaxBandOffset); ++c) {
                const Scalar a = element(r, c);
                if (std::abs(a - sign * std::conj(element(c, r))) > tol * std::max(Real(1), std::abs(a))) return false;
            }
        }
        return true;
    }

    /// Maximum absolute column sum.
    [[nodiscard]] Real norm1() const {
        RealVector<Real> colsum = RealVector<Real>::Zero(dim());
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& b = bands_[slot(d)];
            const int r0 = std::max(0, -d);
            for (Eigen::Index k = 0; k < b.size(); ++k) colsum(r0 + k + d) += std::abs(b(k));
        }
        return dim() > 0 ? colsum.maxCoeff() : Real(0);
    }

    /// y = A x for complex x.
    [[nodiscard]] Vector apply(const Vector& x) const {
        check_length(x.size());
        Vector y = Vector::Zero(dim());
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& b = bands_[slot(d)];
            const int r0 = std::max(0, -d);
            for (Eigen::Index k = 0; k < b.size(); ++k) y(r0 + k) += b(k) * x(r0 + k + d);
        }
        return y;
    }

    /// y = A x for real x; requires is_real().
    [[nodiscard]] RealVector<Real> apply(const RealVector<Real>& x) const {
        check_length(x.size());
        RealVector<Real> y = RealVector<Real>::Zero(dim());
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& b = bands_[slot(d)];
            const int r0 = std::max(0, -d);
            for (Eigen::Index k = 0; k < b.size(); ++k) y(r0 + k) += b(k).real() * x(r0 + k + d);
        }
        return y;
    }

    [[nodiscard]] ComplexMatrix<Real> to_dense() const {
        ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(dim(), dim());
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& b = bands_[slot(d)];
            const int r0 = std::max(0, -d);
            for (Eigen::Index k = 0; k < b.size(); ++k) m(r0 + k, r0 + k + d) = b(k);
        }
        return m;
    }

    /// Real part of the dense matrix; meaningful when is_real().
    [[nodiscard]] Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> to_dense_real() const {
        return to_dense().real();
    }

    [[nodiscard]] BasicBandedOperator scaled(Scalar factor) const {
        Bands out = bands_;
        for (auto& b : out) b *= factor;
        BasicBandedOperator result(j_, std::move(out), Hermiticity::general);
        result.tag_ = detect(result);
        return result;
    }

    friend BasicBandedOperator operator+(const BasicBandedOperator& a, const BasicBandedOperator& b) {
        return combine(a, b, Real(1));
    }
    friend BasicBandedOperator operator-(const BasicBandedOperator& a, const BasicBandedOperator& b) {
        return combine(a, b, Real(-1));
    }
    friend BasicBandedOperator operator*(Scalar factor, const BasicBandedOperator& a) { return a.scaled(factor); }

private:
    static constexpr int slot(int d) { return d + kMaxBandOffset; }

    void check_length(Eigen::Index n) const {
        if (n != dim()) {
            throw InvalidArgument("operator of dimension " + std::to_string(dim()) + " applied to vector of length " +
                                  std::to_string(n));
        }
    }

    static Hermiticity detect(const BasicBandedOperator& op) {
        if (op.satisfies(Hermiticity::hermitian, Real(1e-14))) return Hermiticity::hermitian;
        if (op.satisfies(Hermiticity::skew_hermitian, Real(1e-14))) return Hermiticity::skew_hermitian;
        return Hermiticity::general;
    }

    static BasicBandedOperator combine(const BasicBandedOperator& a, const BasicBandedOperator& b, Real sign) {
        require_same_spin(a.j_, b.j_, "operator sum");
        Bands out;
        for (int d = -kMaxBandOffset; d <= kMaxBandOffset; ++d) {
            const auto& x = a.bands_[slot(d)];
            const auto& y = b.bands_[slot(d)];
            if (x.size() == 0 && y.size() == 0) continue;
            Vector s = Vector::Zero(a.band_length(d));
            if (x.size() != 0) s += x;
            if (y.size() != 0) s += sign * y;
            out[slot(d)] = std::move(s);
        }
        BasicBandedOperator result(a.j_, out, Hermiticity::general);
        result.tag_ = detect(result);
        return result;
    }

    Spin j_;
    Bands bands_{};
    Hermiticity tag_;
};

using BandedOperator = BasicBandedOperator<double>;

namespace detail {

/// <J,M+1|J+|J,M> = sqrt(J(J+1) - M(M+1)).
template <typename Real>
Real ladder_coefficient(Spin j, double m) {
    const Real jj = Real(j.value());
    const Real mm = Real(m);
    return std::sqrt(std::max(Real(0), jj * (jj + 1) - mm * (mm + 1)));
}

/// Band +1 of J+: entry k is <M_k|J+|M_{k+1}> with M_{k+1} = J - k - 1.
template <typename Real>
ComplexVector<Real> raising_band(Spin j) {
    ComplexVector<Real> b(j.dim() - 1);
    for (int k = 0; k + 1 < j.dim(); ++k) b(k) = ladder_coefficient<Real>(j, j.m_at(k + 1));
    return b;
}

/// Band +2 of J+^2: entry k is <M_k|J+^2|M_{k+2}>.
template <typename Real>
ComplexVector<Real> raising_squared_band(Spin j) {
    const int n = std::max(0, j.dim() - 2);
    ComplexVector<Real> b(n);
    for (int k = 0; k < n; ++k) {
        const double m = j.m_at(k + 2);
        b(k) = ladder_coefficient<Real>(j, m) * ladder_coefficient<Real>(j, m + 1);
    }
    return b;
}

} // namespace detail

/**
 * Standard collective-spin operators.
 *
 * Jx, Jy, Jz are tagged Hermitian; J+ and J- are tagged general;
 * Jplus2_minus_Jminus2 (J+^2 - J-^2) is tagged skew-Hermitian.
 */
template <typename Real = double>
BasicBandedOperator<Real> build_operator(Spin j, SpinOperatorKind kind) {
    using Op = BasicBandedOperator<Real>;
    using Scalar = std::complex<Real>;
    typename Op::Bands bands;
    auto at = [&](int d) -> ComplexVector<Real>& { return bands[d + kMaxBandOffset]; };

    switch (kind) {
    case SpinOperatorKind::Jz: {
        ComplexVector<Real> diag(j.dim());
        for (int k = 0; k < j.dim(); ++k) diag(k) = Scalar(Real(j.m_at(k)));
        at(0) = diag;
        return Op(j, std::move(bands), Hermiticity::hermitian);
    }
    case SpinOperatorKind::Jplus:
        at(1) = detail::raising_band<Real>(j);
        return Op(j, std::move(bands), Hermiticity::general);
    case SpinOperatorKind::Jminus:
        at(-1) = detail::raising_band<Real>(j);
        return Op(j, std::move(bands), Hermiticity::general);
    case SpinOperatorKind::Jx: {
        const auto up = detail::raising_band<Real>(j);
        at(1) = Real(0.5) * up;
        at(-1) = Real(0.5) * up;
        return Op(j, std::move(bands), Hermiticity::hermitian);
    }
    case SpinOperatorKind::Jy: {
        // Jy = (J+ - J-) / 2i
        const auto up = detail::raising_band<Real>(j);
        at(1) = Scalar(0, Real(-0.5)) * up;
        at(-1) = Scalar(0, Real(0.5)) * up;
        return Op(j, std::move(bands), Hermiticity::hermitian);
    }
    case SpinOperatorKind::Jplus2_minus_Jminus2: {
        const auto up2 = detail::raising_squared_band<Real>(j);
        at(2) = up2;
        at(-2) = -up2;
        return Op(j, std::move(bands), Hermiticity::skew_hermitian);
    }
    }
    throw InvalidArgument("unknown spin operator kind");
}

/// Parses "Jx", "Jy", "Jz", "Jplus", "Jminus", "Jplus2_minus_Jminus2".
inline SpinOperatorKind parse_operator_kind(std::string_view name) {
    if (name == "Jx") return SpinOperatorKind::Jx;
    if (name == "Jy") return SpinOperatorKind::Jy;
    if (name == "Jz") return SpinOperatorKind::Jz;
    if (name == "Jplus") return SpinOperatorKind::Jplus;
    if (name == "Jminus") return SpinOperatorKind::Jminus;
    if (name == "Jplus2_minus_Jminus2") return SpinOperatorKind::Jplus2_minus_Jminus2;
    throw InvalidArgument("unknown spin operator kind '" + std::string(name) + "'");
}

/// <psi|A|psi>.
template <typename Real>
std::complex<Real> expectation(const BasicBandedOperator<Real>& op, const BasicSpinState<Real>& s) {
    require_same_spin(op.spin(), s.spin(), "expectation");
    return s.amplitudes().dot(op.apply(s.amplitudes()));
}

} // namespace tact
