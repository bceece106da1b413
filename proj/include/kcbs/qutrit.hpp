#pragma once

// Pure-state linear algebra for a single qutrit and for a pair of qutrits.
// Types are templated on the real scalar; the rest of the library uses the
// double-precision aliases at the bottom of this file.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>

#include "kcbs/rng.hpp"

namespace kcbs {

/// Norms below this are treated as the zero vector.
inline constexpr double kMinNorm = 1e-12;

template <typename Real>
class BasicQutritState
{
public:
    using Scalar = std::complex<Real>;
    using Vector = Eigen::Matrix<Scalar, 3, 1>;

    /// Normalizes on construction; throws std::invalid_argument when the input has no direction.
    explicit BasicQutritState(const Vector& amplitudes) : amplitudes_(amplitudes)
    {
        const Real norm = amplitudes_.norm();
        if (!(norm >= Real(kMinNorm))) {
            throw std::invalid_argument("qutrit state has zero norm");
        }
        amplitudes_ /= norm;
    }

    BasicQutritState(Scalar a0, Scalar a1, Scalar a2) : BasicQutritState(Vector(a0, a1, a2)) {}

    const Vector& amplitudes() const { return amplitudes_; }
    Scalar operator[](Eigen::Index i) const { return amplitudes_(i); }

private:
    Vector amplitudes_;
};

template <typename Real>
class BasicProjector
{
public:
    using Scalar = std::complex<Real>;
    using Matrix = Eigen::Matrix<Scalar, 3, 3>;

    static BasicProjector from_state(const BasicQutritState<Real>& v)
    {
        return BasicProjector(v.amplitudes() * v.amplitudes().adjoint());
    }

    const Matrix& matrix() const { return matrix_; }

    /// I - P. Rank 2, so this is not itself a Projector in the rank-1 sense.
    Matrix complement() const { return Matrix::Identity() - matrix_; }

private:
    explicit BasicProjector(Matrix m) : matrix_(std::move(m)) {}

    Matrix matrix_;
};

/// Nine amplitudes in |jk> order, j indexing subsystem A.
template <typename Real>
class BasicTwoQutritState
{
public:
    using Scalar = std::complex<Real>;
    using Vector = Eigen::Matrix<Scalar, 9, 1>;

    explicit BasicTwoQutritState(const Vector& amplitudes) : amplitudes_(amplitudes)
    {
        const Real norm = amplitudes_.norm();
        if (!(norm >= Real(kMinNorm))) {
            throw std::invalid_argument("two-qutrit state has zero norm");
        }
        amplitudes_ /= norm;
    }

    /// (1/sqrt 3) sum_k |kk>
    static BasicTwoQutritState maximally_entangled()
    {
        Vector v = Vector::Zero();
        v(0) = v(4) = v(8) = Scalar(1);
        return BasicTwoQutritState(v);
    }

    static BasicTwoQutritState product(const BasicQutritState<Real>& a, const BasicQutritState<Real>& b)
    {
        Vector v;
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                v(3 * j + k) = a[j] * b[k];
            }
        }
        return BasicTwoQutritState(v);
    }

    const Vector& amplitudes() const { return amplitudes_; }

    /// Amplitudes reshaped so that row j is subsystem A, column k is subsystem B.
    Eigen::Matrix<Scalar, 3, 3> coefficients() const
    {
        Eigen::Matrix<Scalar, 3, 3> c;
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                c(j, k) = amplitudes_(3 * j + k);
            }
        }
        return c;
    }

private:
    Vector amplitudes_;
};

using QutritState = BasicQutritState<double>;
using Projector = BasicProjector<double>;
using TwoQutritState = BasicTwoQutritState<double>;
using Complex = std::complex<double>;

template <typename Real>
std::complex<Real> inner_product(const BasicQutritState<Real>& a, const BasicQutritState<Real>& b)
{
    return a.amplitudes().dot(b.amplitudes());  // Eigen conjugates the left operand
}

template <typename Real>
BasicProjector<Real> projector_from_state(const BasicQutritState<Real>& v)
{
    return BasicProjector<Real>::from_state(v);
}

/// <s|P|s>, clamped to [0, 1].
template <typename Real>
Real born_probability(const BasicQutritState<Real>& s, const BasicProjector<Real>& p)
{
    const Real value = s.amplitudes().dot(p.matrix() * s.amplitudes()).real();
    return std::clamp(value, Real(0), Real(1));
}

/// Hilbert-Schmidt overlap Tr(P Q) between two projectors.
template <typename Real>
Real overlap(const BasicProjector<Real>& p, const BasicProjector<Real>& q)
{
    return (p.matrix() * q.matrix()).trace().real();
}

template <typename Real>
struct BasicMeasurement
{
    int outcome;
    BasicQutritState<Real> post_state;
};

using Measurement = BasicMeasurement<double>;

/// Two-outcome measurement {P, I - P}. Outcome 1 corresponds to P.
template <typename Real>
BasicMeasurement<Real> measure(const BasicQutritState<Real>& s, const BasicProjector<Real>& p, RngStream& rng)
{
    const Real p1 = born_probability(s, p);
    // Strict comparison: a zero-probability branch is never selected.
    const int outcome = (Real(rng.uniform()) < p1) ? 1 : 0;
    const auto projected = outcome == 1 ? (p.matrix() * s.amplitudes()).eval()
                                        : (p.complement() * s.amplitudes()).eval();
    return {outcome, BasicQutritState<Real>(projected)};
}

template <typename Real>
struct BasicCollapse
{
    int outcome;
    /// Bob's conditional pure state; empty on outcome 0 (round aborted).
    std::optional<BasicQutritState<Real>> bob_state;
};

using Collapse = BasicCollapse<double>;

/// Measures {P (x) I, (I - P) (x) I} on subsystem A of psi.
template <typename Real>
BasicCollapse<Real> entangled_collapse(const BasicTwoQutritState<Real>& psi, const BasicProjector<Real>& p,
                                       RngStream& rng)
{
    // (P (x) I)|psi> in coefficient form is P * C.
    const Eigen::Matrix<std::complex<Real>, 3, 3> projected = p.matrix() * psi.coefficients();
    const Real p1 = std::clamp(projected.squaredNorm(), Real(0), Real(1));
    if (!(Real(rng.uniform()) < p1)) {
        return {0, std::nullopt};
    }
    // P has rank 1, so P * C = |v>(<v|C): every nonzero row is a multiple of Bob's state.
    // The largest row is used, with its global phase fixed so that the largest
    // amplitude is real and positive.
    Eigen::Index row = 0;
    projected.rowwise().squaredNorm().maxCoeff(&row);
    typename BasicQutritState<Real>::Vector bob = projected.row(row).transpose();
    Eigen::Index col = 0;
    bob.cwiseAbs2().maxCoeff(&col);
    bob *= std::conj(bob(col)) / std::abs(bob(col));
    return {1, BasicQutritState<Real>(bob)};
}

}  // namespace kcbs
