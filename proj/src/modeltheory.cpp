#include "rewr/modeltheory.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

#include "internal.hpp"

namespace rewr {

namespace {

constexpr std::uint32_t kUnreachable = 0xffffffffu;

std::vector<std::vector<NodeId>> undirected_adjacency(const Ars& ars) {
    std::vector<std::set<NodeId>> nbr(ars.n_nodes());
    for (const Edge& e : ars.edges()) {
        nbr[e.src].insert(e.dst);
        nbr[e.dst].insert(e.src);
    }
    std::vector<std::vector<NodeId>> out(ars.n_nodes());
    for (NodeId v = 0; v < ars.n_nodes(); ++v) out[v].assign(nbr[v].begin(), nbr[v].end());
    return out;
}

std::vector<std::uint32_t> undirected_bfs(const Ars& ars, NodeId from) {
    const auto adj = undirected_adjacency(ars);
    std::vector<std::uint32_t> dist(ars.n_nodes(), kUnreachable);
    std::queue<NodeId> queue;
    dist[from] = 0;
    queue.push(from);
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop();
        for (NodeId w : adj[v]) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
        }
    }
    return dist;
}

}  // namespace

std::uint32_t degree(const Ars& ars, NodeId a) {
    std::set<NodeId> nbr;
    for (const Edge& e : ars.edges()) {
        if (e.src == a) nbr.insert(e.dst);
        if (e.dst == a) nbr.insert(e.src);
    }
    return static_cast<std::uint32_t>(nbr.size());
}

std::optional<std::uint32_t> undirected_distance(const Ars& ars, NodeId a, NodeId b) {
    const std::uint32_t d = undirected_bfs(ars, a)[b];
    if (d == kUnreachable) return std::nullopt;
    return d;
}

RootedGraph neighbourhood(const Ars& ars, NodeId a, std::uint32_t radius) {
    const std::vector<std::uint32_t> dist = undirected_bfs(ars, a);
    // Keep the ball and re-index by (breadth-first layer, original id), which
    // places the root at 0.
    std::vector<std::pair<std::uint32_t, NodeId>> kept;
    for (NodeId v = 0; v < ars.n_nodes(); ++v)
        if (dist[v] != kUnreachable && dist[v] <= radius) kept.push_back({dist[v], v});
    std::sort(kept.begin(), kept.end());
    std::vector<NodeId> new_id(ars.n_nodes(), kUnreachable);
    for (NodeId i = 0; i < kept.size(); ++i) new_id[kept[i].second] = i;
    std::vector<Edge> edges;
    for (const Edge& e : ars.edges())
        if (new_id[e.src] != kUnreachable && new_id[e.dst] != kUnreachable)
            edges.push_back({new_id[e.src], new_id[e.dst]});
    return RootedGraph{Ars(static_cast<NodeId>(kept.size()), std::move(edges)), 0};
}

// ---------------------------------------------------------------------------
// Rooted isomorphism: backtracking search over candidate maps, pruned by the
// (distance-to-root, in-degree, out-degree) signature of every node.

namespace {

struct NodeSignature {
    std::uint32_t dist = 0, indeg = 0, outdeg = 0;
    friend auto operator<=>(const NodeSignature&, const NodeSignature&) = default;
};

std::vector<NodeSignature> signatures(const RootedGraph& g) {
    const std::vector<std::uint32_t> dist = undirected_bfs(g.graph, g.root);
    std::vector<NodeSignature> sig(g.graph.n_nodes());
    for (NodeId v = 0; v < g.graph.n_nodes(); ++v) sig[v].dist = dist[v];
    for (const Edge& e : g.graph.edges()) {
        ++sig[e.src].outdeg;
        ++sig[e.dst].indeg;
    }
    return sig;
}

}  // namespace

bool rooted_isomorphic(const RootedGraph& g1, const RootedGraph& g2) {
    const NodeId n = g1.graph.n_nodes();
    if (n != g2.graph.n_nodes()) return false;
    if (g1.graph.edges().size() != g2.graph.edges().size()) return false;

    const std::vector<NodeSignature> s1 = signatures(g1), s2 = signatures(g2);
    {
        std::vector<NodeSignature> m1 = s1, m2 = s2;
        std::sort(m1.begin(), m1.end());
        std::sort(m2.begin(), m2.end());
        if (m1 != m2) return false;
    }
    if (s1[g1.root] != s2[g2.root]) return false;

    const detail::BitMatrix a1 = detail::adjacency_bits(g1.graph);
    const detail::BitMatrix a2 = detail::adjacency_bits(g2.graph);

    std::vector<std::vector<NodeId>> candidates(n);
    for (NodeId v = 0; v < n; ++v) {
        if (v == g1.root) {
            candidates[v] = {g2.root};
            continue;
        }
        for (NodeId w = 0; w < n; ++w)
            if (w != g2.root && s1[v] == s2[w]) candidates[v].push_back(w);
        if (candidates[v].empty()) return false;
    }

    // Assign the most constrained nodes first (the root is forced).
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
        return std::pair(candidates[x].size(), x) < std::pair(candidates[y].size(), y);
    });

    std::vector<NodeId> image(n, kUnreachable);
    std::vector<bool> used(n, false);
    auto dfs = [&](auto&& self, std::size_t pos) -> bool {
        if (pos == n) return true;
        const NodeId v = order[pos];
        for (NodeId w : candidates[v]) {
            if (used[w]) continue;
            bool ok = true;
            for (std::size_t q = 0; q < pos; ++q) {
                const NodeId u = order[q];
                if (a1.test(v, u) != a2.test(w, image[u]) ||
                    a1.test(u, v) != a2.test(image[u], w)) {
                    ok = false;
                    break;
                }
            }
            if (a1.test(v, v) != a2.test(w, w)) ok = false;
            if (!ok) continue;
            image[v] = w;
            used[w] = true;
            if (self(self, pos + 1)) return true;
            image[v] = kUnreachable;
            used[w] = false;
        }
        return false;
    };
    return dfs(dfs, 0);
}

// ---------------------------------------------------------------------------
// Canonical encoding by individualisation-refinement. Colours are dense ranks
// kept order-stable across rounds, seeded by (distance-to-root, in-degree,
// out-degree); the root's seed is strictly minimal, so it always ends up as
// canonical node 0.

namespace {

using Colouring = std::vector<std::uint32_t>;

struct CanonContext {
    NodeId n = 0;
    std::vector<std::vector<NodeId>> out, in;
    const Ars* graph = nullptr;
    NodeId root = 0;
};

Colouring refine(const CanonContext& ctx, Colouring colour) {
    for (;;) {
        using Signature = std::tuple<std::uint32_t, std::vector<std::uint32_t>,
                                     std::vector<std::uint32_t>>;
        std::vector<Signature> sig(ctx.n);
        for (NodeId v = 0; v < ctx.n; ++v) {
            std::vector<std::uint32_t> outs, ins;
            for (NodeId w : ctx.out[v]) outs.push_back(colour[w]);
            for (NodeId w : ctx.in[v]) ins.push_back(colour[w]);
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            sig[v] = {colour[v], std::move(outs), std::move(ins)};
        }
        std::vector<Signature> keys = sig;
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        Colouring next(ctx.n);
        for (NodeId v = 0; v < ctx.n; ++v)
            next[v] = static_cast<std::uint32_t>(
                std::lower_bound(keys.begin(), keys.end(), sig[v]) - keys.begin());
        if (next == colour) return colour;
        colour = std::move(next);
    }
}

std::string encode_discrete(const CanonContext& ctx, const Colouring& colour) {
    std::vector<NodeId> new_id(ctx.n);
    for (NodeId v = 0; v < ctx.n; ++v) new_id[v] = colour[v];
    std::string out = "n" + std::to_string(ctx.n) + ":r" + std::to_string(new_id[ctx.root]) + ":";
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const Edge& e : ctx.graph->edges()) edges.push_back({new_id[e.src], new_id[e.dst]});
    std::sort(edges.begin(), edges.end());
    if (edges.empty()) return out + "-";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(edges[i].first) + ">" + std::to_string(edges[i].second);
    }
    return out;
}

std::string canonical_search(const CanonContext& ctx, const Colouring& colour) {
    // Find the first colour class with more than one member.
    std::uint32_t target = kUnreachable;
    std::vector<std::uint32_t> count(ctx.n, 0);
    for (NodeId v = 0; v < ctx.n; ++v) ++count[colour[v]];
    for (NodeId v = 0; v < ctx.n; ++v) {
        if (count[colour[v]] > 1 && colour[v] < target) target = colour[v];
    }
    if (target == kUnreachable) return encode_discrete(ctx, colour);

    std::string best;
    for (NodeId v = 0; v < ctx.n; ++v) {
        if (colour[v] != target) continue;
        // Individualise v: it moves strictly ahead of its former classmates
        // while every other colour relation is preserved.
        Colouring split(ctx.n);
        for (NodeId w = 0; w < ctx.n; ++w) split[w] = colour[w] * 2 + 1;
        split[v] = colour[v] * 2;
        const std::string enc = canonical_search(ctx, refine(ctx, split));
        if (best.empty() || enc < best) best = enc;
    }
    return best;
}

}  // namespace

std::string canonical_encoding(const RootedGraph& g) {
    CanonContext ctx;
    ctx.n = g.graph.n_nodes();
    ctx.graph = &g.graph;
    ctx.root = g.root;
    ctx.out.resize(ctx.n);
    ctx.in.resize(ctx.n);
    for (const Edge& e : g.graph.edges()) {
        ctx.out[e.src].push_back(e.dst);
        ctx.in[e.dst].push_back(e.src);
    }
    const std::vector<NodeSignature> seed = signatures(g);
    std::vector<NodeSignature> keys = seed;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    Colouring colour(ctx.n);
    for (NodeId v = 0; v < ctx.n; ++v)
        colour[v] = static_cast<std::uint32_t>(
            std::lower_bound(keys.begin(), keys.end(), seed[v]) - keys.begin());
    return canonical_search(ctx, refine(ctx, colour));
}

LocalIsoResult locally_isomorphic(const Ars& a, const Ars& b, std::uint32_t radius) {
    LocalIsoResult result;
    for (NodeId v = 0; v < a.n_nodes(); ++v)
        ++result.table_a[canonical_encoding(neighbourhood(a, v, radius))];
    for (NodeId v = 0; v < b.n_nodes(); ++v)
        ++result.table_b[canonical_encoding(neighbourhood(b, v, radius))];
    result.isomorphic = result.table_a == result.table_b;
    return result;
}

// ---------------------------------------------------------------------------
// Generated families.

std::optional<FamilyKind> family_from_tag(const std::string& tag) {
    if (tag == "cr") return FamilyKind::cr;
    if (tag == "sn") return FamilyKind::sn;
    if (tag == "inc") return FamilyKind::inc;
    if (tag == "sc") return FamilyKind::sc;
    return std::nullopt;
}

namespace {

struct FamilyBuilder {
    std::vector<Edge> edges;
    std::vector<std::pair<std::string, NodeId>> names;
    NodeId next = 0;

    NodeId add(const std::string& sym, unsigned member) {
        names.push_back({sym + "@" + std::to_string(member), next});
        return next++;
    }
};

void add_cr_member(FamilyBuilder& fb, unsigned m) {
    const NodeId a = fb.add("a", m);
    std::vector<NodeId> b, c;
    for (unsigned j = 0; j < m; ++j) b.push_back(fb.add("b" + std::to_string(j), m));
    for (unsigned j = 0; j < m; ++j) c.push_back(fb.add("c" + std::to_string(j), m));
    const NodeId d = fb.add("d", m);
    fb.edges.push_back({a, b[0]});
    fb.edges.push_back({a, c[0]});
    for (unsigned j = 0; j + 1 < m; ++j) fb.edges.push_back({b[j + 1], b[j]});
    fb.edges.push_back({d, b[m - 1]});
    for (unsigned j = 0; j + 1 < m; ++j) fb.edges.push_back({c[j], c[j + 1]});
    fb.edges.push_back({c[m - 1], d});
}

void add_chain_member(FamilyBuilder& fb, unsigned m, bool reversed) {
    std::vector<NodeId> n;
    for (unsigned j = 0; j <= m; ++j) n.push_back(fb.add("n" + std::to_string(j), m));
    for (unsigned j = 0; j < m; ++j) {
        if (reversed)
            fb.edges.push_back({n[j + 1], n[j]});
        else
            fb.edges.push_back({n[j], n[j + 1]});
    }
}

void add_sc_member(FamilyBuilder& fb, unsigned m) {
    const NodeId a = fb.add("a", m);
    std::vector<NodeId> b, c;
    for (unsigned j = 0; j <= m + 1; ++j) b.push_back(fb.add("b" + std::to_string(j), m));
    for (unsigned j = 0; j <= m + 1; ++j) c.push_back(fb.add("c" + std::to_string(j), m));
    const NodeId d = fb.add("d", m);
    const NodeId x = fb.add("x", m);
    fb.edges.push_back({a, b[0]});
    for (unsigned j = 0; j <= m; ++j) fb.edges.push_back({b[j + 1], b[j]});
    fb.edges.push_back({d, b[m + 1]});
    fb.edges.push_back({a, c[0]});
    for (unsigned j = 0; j <= m; ++j) fb.edges.push_back({c[j], c[j + 1]});
    fb.edges.push_back({c[m + 1], d});
    fb.edges.push_back({b[0], x});
    fb.edges.push_back({x, c[1]});
}

}  // namespace

GeneratedFamily gen_family_named(FamilyKind kind, unsigned p) {
    if (p == 0) throw std::invalid_argument("family index must be at least 1");
    FamilyBuilder fb;
    for (unsigned m = 1; m <= p; ++m) {
        switch (kind) {
            case FamilyKind::cr: add_cr_member(fb, m); break;
            case FamilyKind::sn: add_chain_member(fb, m, false); break;
            case FamilyKind::inc: add_chain_member(fb, m, true); break;
            case FamilyKind::sc: add_sc_member(fb, m); break;
        }
    }
    return GeneratedFamily{Ars(fb.next, std::move(fb.edges)), std::move(fb.names)};
}

Ars gen_family(FamilyKind kind, unsigned p) { return gen_family_named(kind, p).ars; }

}  // namespace rewr
