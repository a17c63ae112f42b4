// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dynamics.hpp
 * @brief Two-axis counter-twisting evolution and collective rotations.
 *
 * Units: hbar = 1. The generator G = -iH/hbar is skew-Hermitian, so the
 * propagator exp(G tau) is unitary. With gamma = 0, G is a real antisymmetric
 * matrix and real states stay exactly real.
 */

#pragma once

#include <tact/banded_operator.hpp>
#include <tact/expm.hpp>
#include <tact/krylov.hpp>
#include <tact/spin_state.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace tact {

enum class PropagationMethod { automatic, dense_expm, krylov };

/// Dimension up to which `automatic` uses the dense exponential.
inline constexpr int kDenseDimensionLimit = 64;

struct PropagatorConfig {
    PropagationMethod method = PropagationMethod::automatic;
    double tolerance = 1e-10;
    int max_substeps = 100000;

    void validate() const {
        if (!(tolerance > 0.0 && tolerance <= 1e-6)) {
            throw InvalidArgument("propagator tolerance must lie in (0, 1e-6], got " + std::to_string(tolerance));
        }
        if (max_substeps <= 0) throw InvalidArgument("max_substeps must be positive");
    }
};

inline PropagationMethod parse_propagation_method(std::string_view name) {
    if (name == "auto" || name == "automatic") return PropagationMethod::automatic;
    if (name == "dense_expm" || name == "dense") return PropagationMethod::dense_expm;
    if (name == "krylov") return PropagationMethod::krylov;
    throw InvalidArgument("unknown propagation method '" + std::string(name) + "'");
}

inline std::string_view to_string(PropagationMethod m) {
    switch (m) {
    case PropagationMethod::automatic: return "auto";
    case PropagationMethod::dense_expm: return "dense_expm";
    case PropagationMethod::krylov: return "krylov";
    }
    return "?";
}

enum class Axis { x, y, z };

inline Axis parse_axis(std::string_view name) {
    if (name == "x") return Axis::x;
    if (name == "y") return Axis::y;
    if (name == "z") return Axis::z;
    throw InvalidArgument("unknown rotation axis '" + std::string(name) + "'");
}

inline Eigen::Vector3d axis_vector(Axis a) {
    switch (a) {
    case Axis::x: return Eigen::Vector3d::UnitX();
    case Axis::y: return Eigen::Vector3d::UnitY();
    case Axis::z: return Eigen::Vector3d::UnitZ();
    }
    return Eigen::Vector3d::UnitY();
}

/**
 * Squeezing protocol: evolve |J,J> under the counter-twisting interaction with
 * strength chi and orientation gamma for time tau, then rotate by
 * rotation_angle about rotation_axis (default pi/2 about y).
 */
struct TwistProtocol {
    double chi = 1.0;
    double gamma = 0.0;
    double tau = 0.0;
    Eigen::Vector3d rotation_axis = Eigen::Vector3d::UnitY();
    double rotation_angle = std::numbers::pi / 2;

    void validate() const {
        if (!(chi > 0.0) || !std::isfinite(chi)) throw InvalidArgument("chi must be positive");
        if (!std::isfinite(gamma)) throw InvalidArgument("gamma must be finite");
        if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be finite and >= 0");
        if (std::abs(rotation_axis.norm() - 1.0) > 1e-12) throw InvalidArgument("rotation axis must be a unit vector");
        if (!std::isfinite(rotation_angle)) throw InvalidArgument("rotation angle must be finite");
    }
};

/**
 * G = -(chi/2) (e^{-2i gamma} J+^2 - e^{2i gamma} J-^2), tagged skew-Hermitian.
 */
template <typename Real = double>
BasicBandedOperator<Real> tact_generator(Spin j, double chi, double gamma) {
    using Scalar = std::complex<Real>;
    const auto up2 = detail::raising_squared_band<Real>(j);
    const Scalar phase = gamma == 0.0 ? Scalar(1) : std::polar(Real(1), Real(-2 * gamma));
    typename BasicBandedOperator<Real>::Bands bands;
    bands[kMaxBandOffset + 2] = (Real(-0.5 * chi) * phase) * up2;
    bands[kMaxBandOffset - 2] = (Real(0.5 * chi) * std::conj(phase)) * up2;
    return BasicBandedOperator<Real>(j, std::move(bands), Hermiticity::skew_hermitian);
}

namespace detail {

/// Bands of a generator restricted to the basis indices of one parity
/// (index = parity + 2k). Valid only for generators without odd bands.
template <typename Real>
class ParityBlock {
public:
    ParityBlock(const BasicBandedOperator<Real>& op, int parity) : op_(op), parity_(parity) {
        size_ = (op.dim() - parity + 1) / 2;
    }

    [[nodiscard]] int size() const noexcept { return size_; }

    template <typename Vector>
    Vector gather(const Vector& full) const {
        Vector out(size_);
        for (int k = 0; k < size_; ++k) out(k) = full(parity_ + 2 * k);
        return out;
    }

    template <typename Vector, typename Full>
    void scatter(const Vector& block, Full& full) const {
        for (int k = 0; k < size_; ++k) full(parity_ + 2 * k) = block(k);
    }

    template <typename Vector>
    Vector operator()(const Vector& x) const {
        using S = typename Vector::Scalar;
        Vector y = Vector::Zero(size_);
        for (int d = -2; d <= 2; d += 2) {
            const auto& b = op_.band(d);
            if (b.size() == 0) continue;
            const int r0 = std::max(0, -d);
            const int step = d / 2;
            for (int k = 0; k < size_; ++k) {
                const int row = parity_ + 2 * k;
                const int idx = row - r0;
                if (idx < 0 || idx >= b.size()) continue;
                const int kk = k + step;
                if (kk < 0 || kk >= size_) continue;
                y(k) += coefficient<S>(b(idx)) * x(kk);
            }
        }
        return y;
    }

private:
    template <typename S>
    static S coefficient(const std::complex<Real>& c) {
        if constexpr (std::is_same_v<S, Real>) {
            return c.real();
        } else {
            return c;
        }
    }

    const BasicBandedOperator<Real>& op_;
    int parity_;
    int size_;
};

template <typename Real, typename Vector>
Vector propagate_dense(const BasicBandedOperator<Real>& gen, double tau, const Vector& v) {
    if constexpr (std::is_same_v<typename Vector::Scalar, Real>) {
        const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> a = gen.to_dense_real() * Real(tau);
        return expm(a) * v;
    } else {
        const ComplexMatrix<Real> a = gen.to_dense() * std::complex<Real>(Real(tau));
        return expm(a) * v;
    }
}

template <typename Real, typename Vector>
Vector propagate_krylov(const BasicBandedOperator<Real>& gen, double tau, const Vector& v,
                        const PropagatorConfig& cfg) {
    KrylovOptions opt;
    opt.tolerance = cfg.tolerance;
    opt.max_substeps = cfg.max_substeps;
    const double anorm = static_cast<double>(gen.norm1());

    if (!gen.has_band(1) && !gen.has_band(-1)) {
        // Generator couples M <-> M, M +/- 2 only: propagate each parity block separately.
        Vector out = Vector::Zero(v.size());
        for (int parity = 0; parity < 2; ++parity) {
            const ParityBlock<Real> block(gen, parity);
            if (block.size() == 0) continue;
            const Vector part = block.gather(v);
            if (part.isZero(Real(0))) continue;
            const Vector evolved = krylov_expv(block, anorm, tau, part, opt);
            block.scatter(evolved, out);
        }
        return out;
    }
    auto apply = [&gen](const Vector& x) { return gen.apply(x); };
    return krylov_expv(apply, anorm, tau, v, opt);
}

template <typename Real, typename Vector>
Vector propagate(const BasicBandedOperator<Real>& gen, double tau, const Vector& v, const PropagatorConfig& cfg) {
    const bool dense = cfg.method == PropagationMethod::dense_expm ||
                       (cfg.method == PropagationMethod::automatic && gen.dim() <= kDenseDimensionLimit);
    return dense ? propagate_dense(gen, tau, v) : propagate_krylov(gen, tau, v, cfg);
}

} // namespace detail

/**
 * exp(G tau) |state>.
 *
 * The generator must be tagged skew-Hermitian. The output norm is checked to
 * be 1 within 1e-10 (PropagationError otherwise) and then renormalized. Real
 * generator and real input run in real arithmetic, so the output stays real.
 */
template <typename Real>
BasicSpinState<Real> evolve(const BasicSpinState<Real>& state, const BasicBandedOperator<Real>& generator, double tau,
                            const PropagatorConfig& cfg = {}) {
    require_same_spin(state.spin(), generator.spin(), "evolve");
    cfg.validate();
    if (generator.hermiticity() != Hermiticity::skew_hermitian) {
        throw InvalidArgument("evolve requires a skew-Hermitian generator");
    }
    if (!std::isfinite(tau)) throw InvalidArgument("evolution time must be finite");
    if (tau == 0.0) return state;

    const auto& amp = state.amplitudes();
    const bool real_path = generator.is_real() && amp.imag().isZero(Real(0));

    ComplexVector<Real> out;
    if (real_path) {
        const RealVector<Real> v = amp.real();
        out = detail::propagate(generator, tau, v, cfg).template cast<std::complex<Real>>();
    } else {
        out = detail::propagate(generator, tau, amp, cfg);
    }

    const double dev = std::abs(static_cast<double>(out.squaredNorm()) - 1.0);
    if (!(dev <= 1e-10)) {
        throw PropagationError("propagated state lost normalization (|norm^2 - 1| = " + std::to_string(dev) + ")");
    }
    out /= out.norm();
    return BasicSpinState<Real>(state.spin(), std::move(out), real_path);
}

/// -i n.J as a skew-Hermitian banded operator.
template <typename Real = double>
BasicBandedOperator<Real> rotation_generator(Spin j, const Eigen::Vector3d& axis) {
    using Scalar = std::complex<Real>;
    const auto up = detail::raising_band<Real>(j);
    typename BasicBandedOperator<Real>::Bands bands;
    // n.J = nz Jz + (nx - i ny)/2 J+ + (nx + i ny)/2 J-, times -i.
    const Scalar plus = Scalar(0, -1) * Scalar(Real(0.5 * axis.x()), Real(-0.5 * axis.y()));
    const Scalar minus = Scalar(0, -1) * Scalar(Real(0.5 * axis.x()), Real(0.5 * axis.y()));
    bands[kMaxBandOffset + 1] = plus * up;
    bands[kMaxBandOffset - 1] = minus * up;
    if (axis.z() != 0.0) {
        ComplexVector<Real> diag(j.dim());
        for (int k = 0; k < j.dim(); ++k) diag(k) = Scalar(0, Real(-axis.z() * j.m_at(k)));
        bands[kMaxBandOffset] = diag;
    }
    return BasicBandedOperator<Real>(j, std::move(bands), Hermiticity::skew_hermitian);
}

/// exp(-i angle n.J) |state> for a unit axis n.
template <typename Real>
BasicSpinState<Real> rotate(const BasicSpinState<Real>& state, const Eigen::Vector3d& axis, double angle,
                            const PropagatorConfig& cfg = {}) {
    if (std::abs(axis.norm() - 1.0) > 1e-12) throw InvalidArgument("rotation axis must be a unit vector");
    if (!std::isfinite(angle)) throw InvalidArgument("rotation angle must be finite");
    if (angle == 0.0) return state;

    const Spin j = state.spin();
    if (axis.x() == 0.0 && axis.y() == 0.0) {
        // Diagonal: apply the phases exactly.
        ComplexVector<Real> out = state.amplitudes();
        const double sign = axis.z() > 0 ? 1.0 : -1.0;
        for (int k = 0; k < j.dim(); ++k) out(k) *= std::polar(Real(1), Real(-sign * angle * j.m_at(k)));
        return BasicSpinState<Real>::normalized(j, std::move(out));
    }
    return evolve(state, rotation_generator<Real>(j, axis), angle, cfg);
}

template <typename Real>
BasicSpinState<Real> rotate(const BasicSpinState<Real>& state, Axis axis, double angle,
                            const PropagatorConfig& cfg = {}) {
    return rotate(state, axis_vector(axis), angle, cfg);
}

/**
 * |Psi_SSS(tau)> = R(axis, angle) exp(G tau) |J,J>, the squeezed state every
 * downstream metric is evaluated on.
 */
template <typename Real = double>
BasicSpinState<Real> make_sss(Spin j, double tau, const TwistProtocol& protocol, const PropagatorConfig& cfg = {}) {
    TwistProtocol p = protocol;
    p.tau = tau;
    p.validate();
    const auto initial = BasicSpinState<Real>::basis(j, j.value());
    const auto twisted = evolve(initial, tact_generator<Real>(j, p.chi, p.gamma), tau, cfg);
    return rotate(twisted, p.rotation_axis, p.rotation_angle, cfg);
}

template <typename Real = double>
BasicSpinState<Real> make_sss(Spin j, const TwistProtocol& protocol, const PropagatorConfig& cfg = {}) {
    return make_sss<Real>(j, protocol.tau, protocol, cfg);
}

} // namespace tact
