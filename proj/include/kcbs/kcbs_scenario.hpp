#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "kcbs/context_graph.hpp"
#include "kcbs/qutrit.hpp"

namespace kcbs {

inline constexpr int kSettings = 5;

/// sqrt(5) = 2 phi - 1
inline constexpr double kSqrt5 = 2.0 * std::numbers::phi - 1.0;

/// Neighbour on the pentagon, or equal.
inline constexpr bool in_context(int i, int j)
{
    const int d = ((j - i) % kSettings + kSettings) % kSettings;
    return d == 0 || d == 1 || d == kSettings - 1;
}

class InvalidBasis : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Five rank-1 projectors whose orthogonality graph is the pentagon:
/// Pi_i Pi_{i+1} = 0 and Pi_i, Pi_{i+2} overlap.
class KcbsBasis
{
public:
    static constexpr double kDefaultTolerance = 1e-8;

    /// Validates the pentagon structure; throws InvalidBasis otherwise.
    explicit KcbsBasis(std::array<QutritState, kSettings> vectors, double tolerance = kDefaultTolerance);

    const QutritState& vector(int i) const { return vectors_[static_cast<std::size_t>(i)]; }
    const Projector& projector(int i) const { return projectors_[static_cast<std::size_t>(i)]; }
    const std::array<QutritState, kSettings>& vectors() const { return vectors_; }
    const std::array<Projector, kSettings>& projectors() const { return projectors_; }

    /// Basis with vector m taken from index permutation[m] of this one.
    KcbsBasis relabeled(std::span<const int, kSettings> permutation) const;

private:
    std::array<QutritState, kSettings> vectors_;
    std::array<Projector, kSettings> projectors_;
};

/// Builds a basis without checking the pentagon structure. Used to probe
/// orthogonality_graph with arbitrary vector sets.
std::array<Projector, kSettings> projectors_of(const std::array<QutritState, kSettings>& vectors);

/// Un-normalized vectors
///   (1, 0, r), (cos 4pi/5, -sin 4pi/5, r), (cos 2pi/5, sin 2pi/5, r),
///   (cos 2pi/5, -sin 2pi/5, r), (cos 4pi/5, sin 4pi/5, r),  r = sqrt(cos pi/5),
/// normalized on load.
std::array<Eigen::Vector3d, kSettings> standard_raw_vectors();

KcbsBasis standard_basis();

/// Exclusive edge (i, j) iff Tr(Pi_i Pi_j) < tol. tol must lie in (0, 1).
ContextGraph orthogonality_graph(std::span<const Projector, kSettings> projectors,
                                 double tol = KcbsBasis::kDefaultTolerance);
ContextGraph orthogonality_graph(const KcbsBasis& basis, double tol = KcbsBasis::kDefaultTolerance);

/// The five-cycle 0-1-2-3-4-0 with exclusive edges.
ContextGraph pentagon_graph();

/// (1/5) sum_i <s|Pi_i|s>
double ktilde(const QutritState& state, const KcbsBasis& basis);

/// (1/5) sum_i P(X_i != X_{i+1}) for X_i = 2 Pi_i - I, from the exact joint
/// distribution of each commuting pair.
double k_anticorr(const QutritState& state, const KcbsBasis& basis);

struct KtildeMaximum
{
    double value;
    QutritState state;
};

/// Largest ktilde over all pure states: the top eigenpair of (1/5) sum_i Pi_i.
KtildeMaximum ktilde_max(const KcbsBasis& basis);

struct Fraction
{
    long numerator;
    long denominator;

    constexpr double value() const { return double(numerator) / double(denominator); }
};

struct KcbsBounds
{
    Fraction noncontextual_projector_form{2, 5};
    /// sqrt(5) / 5
    double quantum_projector_form = kSqrt5 / 5.0;
    Fraction exclusivity_max{1, 2};
    Fraction noncontextual_anticorr_form{3, 5};
    /// (4 sqrt 5 - 5) / 5
    double quantum_anticorr_form = (4.0 * kSqrt5 - 5.0) / 5.0;
    Fraction algebraic_anticorr_max{1, 1};
    Fraction monogamy_projector_form{4, 5};
    Fraction monogamy_anticorr_form{6, 5};
    Fraction security_threshold{5, 8};
};

/// Bounds as printed in the literature.
constexpr KcbsBounds bounds() { return {}; }

/// Values recomputed here from the pentagon, for comparison with bounds().
struct DerivedBounds
{
    /// Deterministic maximum of the anti-correlation form over exclusivity-respecting assignments.
    double noncontextual_anticorr_form;
    /// 2 * sqrt(5)/5, from k_anticorr = 2 ktilde at the maximally violating state.
    double quantum_anticorr_form;
    /// Twice the projector-form monogamy bound.
    double monogamy_anticorr_form;
    /// ktilde at (0, 0, 1) in the standard basis.
    double ktilde_max;
};

DerivedBounds derived_bounds();

nlohmann::json to_json(const KcbsBounds& b);
nlohmann::json to_json(const DerivedBounds& b);

/// Reads {"vectors": [[a0, a1, a2], ...]} where each entry is a number or [re, im].
KcbsBasis basis_from_json(const nlohmann::json& j);

}  // namespace kcbs
