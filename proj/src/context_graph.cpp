#include "kcbs/context_graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace kcbs {

namespace {

VertexMask bit(int v) { return VertexMask{1} << v; }

VertexMask full_mask(int n) { return n >= 32 ? ~VertexMask{0} : (bit(n) - 1); }

const char* kind_name(EdgeKind kind) { return kind == EdgeKind::Exclusive ? "exclusive" : "compatible"; }

EdgeKind kind_from_name(const std::string& s)
{
    if (s == "exclusive") return EdgeKind::Exclusive;
    if (s == "compatible") return EdgeKind::Compatible;
    throw std::invalid_argument("unknown edge kind '" + s + "'");
}

void branch_and_bound(const ContextGraph& g, EdgeKind kind, VertexMask candidates, int size, int& best)
{
    if (size + std::popcount(candidates) <= best) return;
    if (candidates == 0) {
        best = size;
        return;
    }
    // Branch on the candidate with the most neighbours among the candidates; lowest index on ties.
    int pivot = -1;
    int pivot_degree = -1;
    for (VertexMask rest = candidates; rest != 0; rest &= rest - 1) {
        const int v = std::countr_zero(rest);
        const int d = std::popcount(g.neighbors(v, kind) & candidates);
        if (d > pivot_degree) {
            pivot = v;
            pivot_degree = d;
        }
    }
    if (pivot_degree == 0) {
        best = std::max(best, size + std::popcount(candidates));
        return;
    }
    branch_and_bound(g, kind, candidates & ~g.neighbors(pivot, kind) & ~bit(pivot), size + 1, best);
    branch_and_bound(g, kind, candidates & ~bit(pivot), size, best);
}

/// Visits every assignment that respects exclusivity, in lexicographic vertex order.
void for_each_assignment(const ContextGraph& g, const std::function<void(VertexMask)>& visit)
{
    const int n = g.size();
    std::function<void(int, VertexMask)> step = [&](int v, VertexMask ones) {
        if (v == n) {
            visit(ones);
            return;
        }
        step(v + 1, ones);
        if ((g.neighbors(v, EdgeKind::Exclusive) & ones) == 0) step(v + 1, ones | bit(v));
    };
    step(0, 0);
}

}  // namespace

ContextGraph::ContextGraph(int n, std::vector<std::string> labels) : n_(n), labels_(std::move(labels))
{
    if (n < 0 || n > kMaxVertices) {
        throw InstanceTooLarge("context graph supports at most 32 vertices, got " + std::to_string(n));
    }
    if (labels_.empty()) {
        for (int v = 0; v < n; ++v) labels_.push_back(std::to_string(v));
    }
    if (static_cast<int>(labels_.size()) != n) {
        throw std::invalid_argument("label count does not match vertex count");
    }
}

void ContextGraph::add_edge(int u, int v, EdgeKind kind)
{
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    if (adjacent(u, v, EdgeKind::Compatible)) {
        throw std::invalid_argument("parallel edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    compatible_[u] |= bit(v);
    compatible_[v] |= bit(u);
    if (kind == EdgeKind::Exclusive) {
        exclusive_[u] |= bit(v);
        exclusive_[v] |= bit(u);
    }
}

std::optional<EdgeKind> ContextGraph::edge_kind(int u, int v) const
{
    if (adjacent(u, v, EdgeKind::Exclusive)) return EdgeKind::Exclusive;
    if (adjacent(u, v, EdgeKind::Compatible)) return EdgeKind::Compatible;
    return std::nullopt;
}

std::vector<Edge> ContextGraph::edges() const
{
    std::vector<Edge> out;
    for (int u = 0; u < n_; ++u) {
        for (int v = u + 1; v < n_; ++v) {
            if (auto kind = edge_kind(u, v)) out.push_back({u, v, *kind});
        }
    }
    return out;
}

VertexMask ContextGraph::all_vertices() const { return full_mask(n_); }

ContextGraph ContextGraph::induced(std::span<const int> vertices) const
{
    std::vector<std::string> sub_labels;
    for (int v : vertices) sub_labels.push_back(label(v));
    ContextGraph sub(static_cast<int>(vertices.size()), std::move(sub_labels));
    for (std::size_t a = 0; a < vertices.size(); ++a) {
        for (std::size_t b = a + 1; b < vertices.size(); ++b) {
            if (auto kind = edge_kind(vertices[a], vertices[b])) {
                sub.add_edge(static_cast<int>(a), static_cast<int>(b), *kind);
            }
        }
    }
    return sub;
}

int ContextGraph::degree(int v, EdgeKind kind) const { return std::popcount(neighbors(v, kind)); }

int independence_number(const ContextGraph& g, EdgeKind kind)
{
    int best = 0;
    branch_and_bound(g, kind, g.all_vertices(), 0, best);
    return best;
}

int noncontextual_max(const ContextGraph& g)
{
    int best = 0;
    for_each_assignment(g, [&](VertexMask ones) { best = std::max(best, std::popcount(ones)); });
    return best;
}

int noncontextual_anticorrelation_max(const ContextGraph& g)
{
    const auto edges = g.edges();
    int best = 0;
    for_each_assignment(g, [&](VertexMask ones) {
        int count = 0;
        for (const auto& e : edges) {
            if (e.kind == EdgeKind::Exclusive && (((ones >> e.u) ^ (ones >> e.v)) & 1u)) ++count;
        }
        best = std::max(best, count);
    });
    return best;
}

int clique_cover_number(const ContextGraph& g)
{
    constexpr int kLimit = 16;
    const int n = g.size();
    if (n > kLimit) {
        throw InstanceTooLarge("clique cover is exact only up to 16 vertices, got " + std::to_string(n));
    }
    if (n == 0) return 0;
    const std::size_t count = std::size_t{1} << n;
    std::vector<char> is_clique(count, 0);
    is_clique[0] = 1;
    for (std::size_t m = 1; m < count; ++m) {
        const auto mask = static_cast<VertexMask>(m);
        const int low = std::countr_zero(mask);
        const VertexMask rest = mask & (mask - 1);
        is_clique[m] = is_clique[rest] && (g.neighbors(low, EdgeKind::Compatible) & rest) == rest;
    }
    std::vector<int> cover(count, n + 1);
    cover[0] = 0;
    for (std::size_t m = 1; m < count; ++m) {
        const auto mask = static_cast<VertexMask>(m);
        const VertexMask low = mask & (~mask + 1);
        const VertexMask rest = mask ^ low;
        // Every cover of `mask` has a clique containing its lowest vertex.
        for (VertexMask sub = rest;; sub = (sub - 1) & rest) {
            const VertexMask clique = sub | low;
            if (is_clique[clique]) cover[m] = std::min(cover[m], 1 + cover[mask ^ clique]);
            if (sub == 0) break;
        }
    }
    return cover[count - 1];
}

std::vector<int> lex_bfs_order(const ContextGraph& g)
{
    const int n = g.size();
    std::vector<std::vector<int>> labels(static_cast<std::size_t>(n));
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (visited[v]) continue;
            if (pick < 0 || labels[v] > labels[pick]) pick = v;
        }
        visited[pick] = 1;
        order.push_back(pick);
        for (VertexMask nb = g.neighbors(pick, EdgeKind::Compatible); nb != 0; nb &= nb - 1) {
            const int w = std::countr_zero(nb);
            if (!visited[w]) labels[w].push_back(n - step);
        }
    }
    return order;
}

bool is_chordal(const ContextGraph& g)
{
    // The reverse of a LexBFS order is a perfect elimination ordering iff the graph is chordal.
    const auto order = lex_bfs_order(g);
    VertexMask earlier = 0;
    for (int v : order) {
        const VertexMask back = g.neighbors(v, EdgeKind::Compatible) & earlier;
        for (VertexMask rest = back; rest != 0; rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            const VertexMask others = back & ~bit(u);
            if ((g.neighbors(u, EdgeKind::Compatible) & others) != others) return false;
        }
        earlier |= bit(v);
    }
    return true;
}

std::string to_string(JointGraphMode mode)
{
    return mode == JointGraphMode::PaperAbstract ? "paper-abstract" : "mimic";
}

JointGraphMode joint_graph_mode_from_string(const std::string& s)
{
    if (s == "paper-abstract") return JointGraphMode::PaperAbstract;
    if (s == "mimic") return JointGraphMode::Mimic;
    throw std::invalid_argument("unknown joint graph mode '" + s + "'");
}

ContextGraph joint_commutation_graph(JointGraphMode mode)
{
    std::vector<std::string> labels;
    for (int i = 0; i < 5; ++i) labels.push_back("Π_" + std::to_string(i));
    for (int i = 0; i < 5; ++i) labels.push_back("Π^E_" + std::to_string(i));
    ContextGraph g(10, std::move(labels));
    const EdgeKind same_index = mode == JointGraphMode::PaperAbstract ? EdgeKind::Exclusive : EdgeKind::Compatible;
    for (int i = 0; i < 5; ++i) {
        const int next = (i + 1) % 5;
        g.add_edge(bob_vertex(i), bob_vertex(next), EdgeKind::Exclusive);
        g.add_edge(eve_vertex(i), eve_vertex(next), EdgeKind::Exclusive);
        g.add_edge(bob_vertex(i), eve_vertex(next), EdgeKind::Exclusive);
        g.add_edge(bob_vertex(next), eve_vertex(i), EdgeKind::Exclusive);
        g.add_edge(bob_vertex(i), eve_vertex(i), same_index);
    }
    return g;
}

MonogamyCertificate certify_decomposition(const ContextGraph& joint, std::array<std::vector<int>, 2> parts,
                                          std::string mode, int normalization,
                                          std::optional<std::array<int, 2>> expected_alpha)
{
    MonogamyCertificate cert{joint, std::move(mode), std::move(parts), {}, {}, 5, 0.0, 0, -1, {}};
    cert.normalization = normalization;

    std::vector<int> seen(static_cast<std::size_t>(joint.size()), 0);
    bool in_range = true;
    for (const auto& part : cert.parts) {
        for (int v : part) {
            if (v < 0 || v >= joint.size()) {
                in_range = false;
                continue;
            }
            ++seen[v];
        }
    }
    if (!in_range || std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
        cert.failures.push_back("parts_partition_vertices");
    }
    if (normalization <= 0) cert.failures.push_back("positive_normalization");

    if (in_range) {
        for (std::size_t p = 0; p < 2; ++p) {
            const ContextGraph sub = joint.induced(cert.parts[p]);
            cert.chordal[p] = is_chordal(sub);
            cert.alpha[p] = independence_number(sub, EdgeKind::Exclusive);
            if (!cert.chordal[p]) cert.failures.push_back("part_" + std::to_string(p) + "_chordal");
            if (expected_alpha && cert.alpha[p] != (*expected_alpha)[p]) {
                cert.failures.push_back("part_" + std::to_string(p) + "_alpha");
            }
        }
    }
    cert.bound = normalization > 0 ? double(cert.alpha[0] + cert.alpha[1]) / normalization : 0.0;
    cert.deterministic_max = noncontextual_max(joint);
    if (in_range && cert.deterministic_max > cert.alpha[0] + cert.alpha[1]) {
        cert.failures.push_back("deterministic_max_within_bound");
    }
    if (joint.size() <= 16) cert.clique_cover = clique_cover_number(joint);
    return cert;
}

std::array<std::vector<int>, 2> monogamy_parts()
{
    return {std::vector<int>{eve_vertex(0), bob_vertex(2), eve_vertex(1), bob_vertex(1), eve_vertex(2)},
            std::vector<int>{bob_vertex(0), bob_vertex(3), eve_vertex(3), bob_vertex(4), eve_vertex(4)}};
}

MonogamyCertificate verify_monogamy_decomposition(JointGraphMode mode)
{
    // Mimic mode reports recomputed independence numbers instead of expecting 2.
    std::optional<std::array<int, 2>> expected;
    if (mode == JointGraphMode::PaperAbstract) expected = std::array<int, 2>{2, 2};
    auto cert = certify_decomposition(joint_commutation_graph(mode), monogamy_parts(), to_string(mode), 5, expected);
    if (!cert.valid()) {
        std::string names;
        for (const auto& f : cert.failures) names += (names.empty() ? "" : ", ") + f;
        throw MonogamyCheckFailed("monogamy certificate failed: " + names);
    }
    return cert;
}

nlohmann::json to_json(const ContextGraph& g)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"kind", kind_name(e.kind)}});
    return {{"n", g.size()}, {"labels", g.labels()}, {"edges", std::move(edges)}};
}

ContextGraph context_graph_from_json(const nlohmann::json& j)
{
    const int n = j.at("n").get<int>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    ContextGraph g(n, std::move(labels));
    for (const auto& e : j.at("edges")) {
        const auto kind = e.contains("kind") ? kind_from_name(e.at("kind").get<std::string>()) : EdgeKind::Exclusive;
        g.add_edge(e.at("u").get<int>(), e.at("v").get<int>(), kind);
    }
    return g;
}

nlohmann::json to_json(const MonogamyCertificate& c)
{
    return {{"joint_graph", to_json(c.joint_graph)},
            {"mode", c.mode},
            {"parts", c.parts},
            {"chordal", c.chordal},
            {"alpha", c.alpha},
            {"normalization", c.normalization},
            {"bound", c.bound},
            {"deterministic_max", c.deterministic_max},
            {"clique_cover", c.clique_cover >= 0 ? nlohmann::json(c.clique_cover) : nlohmann::json()},
            {"valid", c.valid()},
            {"failures", c.failures}};
}

}  // namespace kcbs
