#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kcbs/context_graph.hpp"
#include "kcbs/qutrit.hpp"

namespace kcbs::test {

/// Haar-random pure qutrit state (normalized complex Gaussian vector).
inline QutritState random_state(std::mt19937_64& gen)
{
    std::normal_distribution<double> normal;
    QutritState::Vector v;
    for (int c = 0; c < 3; ++c) v(c) = Complex(normal(gen), normal(gen));
    return QutritState(v);
}

/// Erdos-Renyi graph; each present edge is exclusive with probability 1/2.
inline ContextGraph random_graph(std::mt19937_64& gen, int n, double density)
{
    std::bernoulli_distribution edge(density);
    std::bernoulli_distribution exclusive(0.5);
    ContextGraph g(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (edge(gen)) g.add_edge(u, v, exclusive(gen) ? EdgeKind::Exclusive : EdgeKind::Compatible);
        }
    }
    return g;
}

/// Largest subset of pairwise non-adjacent vertices, by plain subset enumeration.
inline int brute_force_alpha(const ContextGraph& g, EdgeKind kind)
{
    const int n = g.size();
    int best = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u) {
            if (!((m >> u) & 1)) continue;
            for (int v = u + 1; v < n && ok; ++v) {
                if (((m >> v) & 1) && g.adjacent(u, v, kind)) ok = false;
            }
        }
        if (ok) best = std::max(best, __builtin_popcountll(m));
    }
    return best;
}

/// True iff some induced cycle of length >= 4 exists (Compatible edges).
/// Enumerates every vertex subset of size >= 4 and checks whether the
/// induced subgraph is a single cycle: connected and 2-regular.
inline bool has_long_induced_cycle(const ContextGraph& g)
{
    const int n = g.size();
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        const int size = __builtin_popcount(m);
        if (size < 4) continue;
        bool two_regular = true;
        for (int v = 0; v < n && two_regular; ++v) {
            if ((m >> v) & 1) two_regular = __builtin_popcount(g.neighbors(v, EdgeKind::Compatible) & m) == 2;
        }
        if (!two_regular) continue;
        // Connectivity by flood fill from the lowest vertex.
        std::uint32_t seen = m & (~m + 1);
        std::uint32_t frontier = seen;
        while (frontier) {
            std::uint32_t next = 0;
            for (int v = 0; v < n; ++v) {
                if ((frontier >> v) & 1) next |= g.neighbors(v, EdgeKind::Compatible) & m;
            }
            frontier = next & ~seen;
            seen |= next;
        }
        if (seen == m) return true;
    }
    return false;
}

/// Regularized upper incomplete gamma Q(a, x), series / continued fraction.
inline double gamma_q(double a, double x)
{
    if (x <= 0.0) return 1.0;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double sum = 1.0 / a;
        double term = sum;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    // Lentz's method for the continued fraction.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(log_prefix) * h;
}

struct ChiSquare
{
    double statistic;
    int dof;
    double p_value;
};

/// Two-sample chi-square homogeneity test over matching histogram cells.
/// Cells empty in both samples are dropped.
inline ChiSquare chi_square_homogeneity(const std::vector<double>& a, const std::vector<double>& b)
{
    double total_a = 0.0, total_b = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        total_a += a[c];
        total_b += b[c];
    }
    const double total = total_a + total_b;
    double stat = 0.0;
    int cells = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double row = a[c] + b[c];
        if (row == 0.0) continue;
        ++cells;
        const double ea = row * total_a / total;
        const double eb = row * total_b / total;
        stat += (a[c] - ea) * (a[c] - ea) / ea + (b[c] - eb) * (b[c] - eb) / eb;
    }
    const int dof = cells - 1;
    return {stat, dof, gamma_q(dof / 2.0, stat / 2.0)};
}

}  // namespace kcbs::test
