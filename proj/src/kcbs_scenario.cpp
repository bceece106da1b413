#include "kcbs/kcbs_scenario.hpp"

#include <string>
#include <utility>

namespace kcbs {

namespace {

template <typename F, std::size_t... I>
auto generate(F&& f, std::index_sequence<I...>)
{
    return std::array{f(static_cast<int>(I))...};
}

template <typename F>
auto generate5(F&& f)
{
    return generate(std::forward<F>(f), std::make_index_sequence<kSettings>{});
}

void check_pentagon(const std::array<Projector, kSettings>& p, double tol)
{
    for (int i = 0; i < kSettings; ++i) {
        const int next = (i + 1) % kSettings;
        const int skip = (i + 2) % kSettings;
        const double adjacent = std::abs(overlap(p[i], p[next]));
        if (adjacent > tol) {
            throw InvalidBasis("projectors " + std::to_string(i) + " and " + std::to_string(next) +
                               " are not orthogonal (overlap " + std::to_string(adjacent) + ")");
        }
        if (overlap(p[i], p[skip]) <= 1e-6) {
            throw InvalidBasis("non-adjacent projectors " + std::to_string(i) + " and " + std::to_string(skip) +
                               " are orthogonal");
        }
    }
}

Complex amplitude_from_json(const nlohmann::json& a)
{
    if (a.is_number()) return {a.get<double>(), 0.0};
    if (a.is_array() && a.size() == 2) return {a[0].get<double>(), a[1].get<double>()};
    throw std::invalid_argument("amplitude must be a number or [re, im]");
}

}  // namespace

std::array<Projector, kSettings> projectors_of(const std::array<QutritState, kSettings>& vectors)
{
    return generate5([&](int i) { return projector_from_state(vectors[i]); });
}

KcbsBasis::KcbsBasis(std::array<QutritState, kSettings> vectors, double tolerance)
    : vectors_(std::move(vectors)), projectors_(projectors_of(vectors_))
{
    check_pentagon(projectors_, tolerance);
}

KcbsBasis KcbsBasis::relabeled(std::span<const int, kSettings> permutation) const
{
    return KcbsBasis(generate5([&](int m) { return vectors_[permutation[m]]; }));
}

std::array<Eigen::Vector3d, kSettings> standard_raw_vectors()
{
    using std::numbers::pi;
    const double r = std::sqrt(std::cos(pi / 5));
    const double c2 = std::cos(2 * pi / 5);
    const double s2 = std::sin(2 * pi / 5);
    const double c4 = std::cos(4 * pi / 5);
    const double s4 = std::sin(4 * pi / 5);
    return {Eigen::Vector3d(1.0, 0.0, r), Eigen::Vector3d(c4, -s4, r), Eigen::Vector3d(c2, s2, r),
            Eigen::Vector3d(c2, -s2, r), Eigen::Vector3d(c4, s4, r)};
}

KcbsBasis standard_basis()
{
    const auto raw = standard_raw_vectors();
    return KcbsBasis(generate5([&](int i) { return QutritState(raw[i].cast<Complex>()); }));
}

ContextGraph orthogonality_graph(std::span<const Projector, kSettings> projectors, double tol)
{
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("orthogonality tolerance must lie in (0, 1)");
    std::vector<std::string> labels;
    for (int i = 0; i < kSettings; ++i) labels.push_back("Π_" + std::to_string(i));
    ContextGraph g(kSettings, std::move(labels));
    for (int i = 0; i < kSettings; ++i) {
        for (int j = i + 1; j < kSettings; ++j) {
            if (std::abs(overlap(projectors[i], projectors[j])) < tol) g.add_edge(i, j, EdgeKind::Exclusive);
        }
    }
    return g;
}

ContextGraph orthogonality_graph(const KcbsBasis& basis, double tol)
{
    return orthogonality_graph(std::span<const Projector, kSettings>(basis.projectors()), tol);
}

ContextGraph pentagon_graph()
{
    ContextGraph g(kSettings);
    for (int i = 0; i < kSettings; ++i) g.add_edge(i, (i + 1) % kSettings, EdgeKind::Exclusive);
    return g;
}

double ktilde(const QutritState& state, const KcbsBasis& basis)
{
    double sum = 0.0;
    for (const auto& p : basis.projectors()) sum += born_probability(state, p);
    return sum / kSettings;
}

double k_anticorr(const QutritState& state, const KcbsBasis& basis)
{
    double sum = 0.0;
    for (int i = 0; i < kSettings; ++i) {
        const double p_this = born_probability(state, basis.projector(i));
        const double p_next = born_probability(state, basis.projector((i + 1) % kSettings));
        // Orthogonal pair: P(1,1) = 0, P(1,0) = p_this, P(0,1) = p_next.
        const double p11 = 0.0;
        const double p10 = p_this - p11;
        const double p01 = p_next - p11;
        sum += p10 + p01;
    }
    return sum / kSettings;
}

KtildeMaximum ktilde_max(const KcbsBasis& basis)
{
    Eigen::Matrix3cd sum = Eigen::Matrix3cd::Zero();
    for (const auto& p : basis.projectors()) sum += p.matrix();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(sum / double(kSettings));
    // Eigenvalues are sorted ascending.
    return {solver.eigenvalues()(2), QutritState(solver.eigenvectors().col(2))};
}

DerivedBounds derived_bounds()
{
    const auto pentagon = pentagon_graph();
    const double ktilde_max = ktilde(QutritState(0.0, 0.0, 1.0), standard_basis());
    const double projector_monogamy = bounds().monogamy_projector_form.value();
    return {double(noncontextual_anticorrelation_max(pentagon)) / kSettings, 2.0 * ktilde_max,
            2.0 * projector_monogamy, ktilde_max};
}

nlohmann::json to_json(const KcbsBounds& b)
{
    return {{"noncontextual_projector_form", b.noncontextual_projector_form.value()},
            {"quantum_projector_form", b.quantum_projector_form},
            {"exclusivity_max", b.exclusivity_max.value()},
            {"noncontextual_anticorr_form", b.noncontextual_anticorr_form.value()},
            {"quantum_anticorr_form", b.quantum_anticorr_form},
            {"algebraic_anticorr_max", b.algebraic_anticorr_max.value()},
            {"monogamy_projector_form", b.monogamy_projector_form.value()},
            {"monogamy_anticorr_form", b.monogamy_anticorr_form.value()},
            {"security_threshold", b.security_threshold.value()}};
}

nlohmann::json to_json(const DerivedBounds& b)
{
    return {{"noncontextual_anticorr_form", b.noncontextual_anticorr_form},
            {"quantum_anticorr_form", b.quantum_anticorr_form},
            {"monogamy_anticorr_form", b.monogamy_anticorr_form},
            {"ktilde_max", b.ktilde_max}};
}

KcbsBasis basis_from_json(const nlohmann::json& j)
{
    const auto& vectors = j.at("vectors");
    if (!vectors.is_array() || vectors.size() != kSettings) {
        throw std::invalid_argument("basis needs exactly five vectors");
    }
    return KcbsBasis(generate5([&](int i) {
        const auto& v = vectors[static_cast<std::size_t>(i)];
        if (!v.is_array() || v.size() != 3) throw std::invalid_argument("basis vectors need three amplitudes");
        return QutritState(amplitude_from_json(v[0]), amplitude_from_json(v[1]), amplitude_from_json(v[2]));
    }));
}

}  // namespace kcbs
