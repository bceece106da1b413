#pragma once

// Measurement-compatibility graphs and the exact combinatorics used to
// certify contextuality bounds and monogamy decompositions.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kcbs {

/// Exclusive edges join orthogonal projectors (outcomes that cannot both be 1).
/// Compatible edges join commuting projectors. Every Exclusive edge is also Compatible.
enum class EdgeKind
{
    Exclusive,
    Compatible
};

using VertexMask = std::uint32_t;

class InstanceTooLarge : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Edge
{
    int u;
    int v;
    EdgeKind kind;
};

class ContextGraph
{
public:
    static constexpr int kMaxVertices = 32;

    explicit ContextGraph(int n, std::vector<std::string> labels = {});

    /// Throws std::invalid_argument on self-loops, out-of-range vertices and repeated edges.
    void add_edge(int u, int v, EdgeKind kind);

    int size() const { return n_; }
    const std::string& label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Neighbourhood as a bitmask. Compatible includes Exclusive neighbours.
    VertexMask neighbors(int v, EdgeKind kind) const
    {
        return kind == EdgeKind::Exclusive ? exclusive_[static_cast<std::size_t>(v)]
                                           : compatible_[static_cast<std::size_t>(v)];
    }

    bool adjacent(int u, int v, EdgeKind kind) const { return (neighbors(u, kind) >> v) & 1u; }

    /// Strongest kind present between u and v.
    std::optional<EdgeKind> edge_kind(int u, int v) const;

    /// Sorted by (u, v) with u < v.
    std::vector<Edge> edges() const;

    VertexMask all_vertices() const;

    /// Subgraph induced by `vertices`; vertex t of the result is vertices[t].
    ContextGraph induced(std::span<const int> vertices) const;

    int degree(int v, EdgeKind kind) const;

private:
    int n_;
    std::vector<std::string> labels_;
    std::array<VertexMask, kMaxVertices> exclusive_{};
    std::array<VertexMask, kMaxVertices> compatible_{};
};

/// Maximum independent set size w.r.t. edges of `kind`, by branch and bound.
int independence_number(const ContextGraph& g, EdgeKind kind);

/// Maximum number of 1-valued vertices over all assignments that respect
/// exclusivity. Enumerates assignments directly; used as a cross-check of
/// independence_number.
int noncontextual_max(const ContextGraph& g);

/// Minimum number of cliques (w.r.t. Compatible edges) covering every vertex.
/// Throws InstanceTooLarge above 16 vertices.
int clique_cover_number(const ContextGraph& g);

/// Lexicographic breadth-first order over Compatible edges.
std::vector<int> lex_bfs_order(const ContextGraph& g);

/// True iff the Compatible-edge graph has a perfect elimination ordering.
bool is_chordal(const ContextGraph& g);

/// Maximum over exclusivity-respecting 0/1 assignments of the number of
/// Exclusive edges whose endpoints differ: the deterministic bound of the
/// anti-correlation functional.
int noncontextual_anticorrelation_max(const ContextGraph& g);

enum class JointGraphMode
{
    /// Every edge of the joint commutation graph is treated as exclusive.
    PaperAbstract,
    /// Eve mimics Bob: Pi_i and Pi^E_i commute but are not exclusive.
    Mimic
};

std::string to_string(JointGraphMode mode);
JointGraphMode joint_graph_mode_from_string(const std::string& s);

/// Vertices 0..4 are Alice-Bob projectors Pi_i, 5..9 are Alice-Eve projectors Pi^E_i.
ContextGraph joint_commutation_graph(JointGraphMode mode = JointGraphMode::PaperAbstract);

inline constexpr int bob_vertex(int i) { return i; }
inline constexpr int eve_vertex(int i) { return 5 + i; }

struct MonogamyCertificate
{
    ContextGraph joint_graph;
    std::string mode;
    std::array<std::vector<int>, 2> parts;
    std::array<bool, 2> chordal{};
    std::array<int, 2> alpha{};
    int normalization = 5;
    /// (alpha[0] + alpha[1]) / normalization
    double bound = 0.0;
    int deterministic_max = 0;
    int clique_cover = -1;
    /// Names of failed predicates; empty for a valid certificate.
    std::vector<std::string> failures;

    bool valid() const { return failures.empty(); }
};

class MonogamyCheckFailed : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Checks a two-part decomposition of `joint`: the parts partition the
/// vertices, each induced part is chordal, and (when given) each part has the
/// expected independence number. Failures are recorded, not thrown.
MonogamyCertificate certify_decomposition(const ContextGraph& joint, std::array<std::vector<int>, 2> parts,
                                          std::string mode, int normalization = 5,
                                          std::optional<std::array<int, 2>> expected_alpha = std::nullopt);

/// {Pi^E_0, Pi_2, Pi^E_1, Pi_1, Pi^E_2} and {Pi_0, Pi_3, Pi^E_3, Pi_4, Pi^E_4}
std::array<std::vector<int>, 2> monogamy_parts();

/// Certifies monogamy_parts() on the joint commutation graph. In
/// paper-abstract mode each part must have independence number 2; in mimic
/// mode the numbers are only reported. Throws MonogamyCheckFailed when any
/// predicate fails.
MonogamyCertificate verify_monogamy_decomposition(JointGraphMode mode = JointGraphMode::PaperAbstract);

nlohmann::json to_json(const ContextGraph& g);
ContextGraph context_graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MonogamyCertificate& c);

}  // namespace kcbs
