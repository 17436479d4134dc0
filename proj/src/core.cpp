#include "rewr/core.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "internal.hpp"

namespace rewr {

using detail::BitMatrix;
using detail::Csr;
using detail::kNoDistance;
using detail::kNoNode;

Ars::Ars(NodeId n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
    if (n_nodes_ == 0) throw std::invalid_argument("a rewrite system needs at least one node");
    for (const Edge& e : edges_)
        if (e.src >= n_nodes_ || e.dst >= n_nodes_)
            throw std::invalid_argument("edge endpoint out of range");
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
}

std::vector<NodeId> Ars::successors(NodeId a) const {
    std::vector<NodeId> out;
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, 0});
    for (; it != edges_.end() && it->src == a; ++it) out.push_back(it->dst);
    return out;
}

CommArs::CommArs(NodeId n_nodes, std::vector<Edge> fwd, std::vector<Edge> snd)
    : n_nodes_(n_nodes) {
    Ars f(n_nodes, std::move(fwd));
    Ars s(n_nodes, std::move(snd));
    fwd_ = f.edges();
    snd_ = s.edges();
}

namespace {

constexpr std::array<std::pair<Property, const char*>, 14> kPropertyTags{{
    {Property::CR, "cr"},
    {Property::WCR, "wcr"},
    {Property::SC, "sc"},
    {Property::DIAMOND, "diamond"},
    {Property::UN, "un"},
    {Property::UNR, "unr"},
    {Property::NFP, "nfp"},
    {Property::WN, "wn"},
    {Property::SN, "sn"},
    {Property::AC, "ac"},
    {Property::IND, "ind"},
    {Property::INC, "inc"},
    {Property::CP, "cp"},
    {Property::COMMUTE, "commute"},
}};

PropertyReport holds() { return {true, std::nullopt}; }
PropertyReport fails(Witness w) { return {false, std::move(w)}; }

/// First reduction cycle in DFS order (start nodes and successors ascending),
/// or nullopt if the graph is acyclic.
std::optional<CycleWitness> find_cycle(const Ars& a) {
    const NodeId n = a.n_nodes();
    Csr csr = detail::build_csr(a);
    enum : char { kWhite, kGrey, kBlack };
    std::vector<char> color(n, kWhite);
    std::vector<NodeId> path;
    std::vector<std::pair<NodeId, std::uint32_t>> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (color[s] != kWhite) continue;
        color[s] = kGrey;
        path.push_back(s);
        stack.emplace_back(s, csr.start[s]);
        while (!stack.empty()) {
            NodeId u = stack.back().first;
            std::uint32_t& next = stack.back().second;
            if (next == csr.start[u + 1]) {
                color[u] = kBlack;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            NodeId v = csr.out[next++];
            if (color[v] == kGrey) {
                auto pos = std::find(path.begin(), path.end(), v);
                return CycleWitness{std::vector<NodeId>(pos, path.end())};
            }
            if (color[v] == kWhite) {
                color[v] = kGrey;
                path.push_back(v);
                stack.emplace_back(v, csr.start[v]);
            }
        }
    }
    return std::nullopt;
}

PropertyReport check_acyclic(const Ars& a) {
    if (auto cycle = find_cycle(a)) return fails(*cycle);
    return holds();
}

PropertyReport check_cr(const Ars& a) {
    const NodeId n = a.n_nodes();
    BitMatrix closure = detail::forward_closure(a);
    std::vector<NodeId> reach;
    for (NodeId x = 0; x < n; ++x) {
        reach.clear();
        for (NodeId v = 0; v < n; ++v)
            if (closure.test(x, v)) reach.push_back(v);
        for (NodeId b : reach)
            for (NodeId q : reach)
                if (!closure.rows_intersect(b, q)) return fails(PeakWitness{x, b, q});
    }
    return holds();
}

PropertyReport check_wcr(const Ars& a) {
    BitMatrix closure = detail::forward_closure(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x) {
        auto succ = a.successors(x);
        for (NodeId b : succ)
            for (NodeId q : succ)
                if (!closure.rows_intersect(b, q)) return fails(PeakWitness{x, b, q});
    }
    return holds();
}

// Strong closing of the ordered peak b <- x -> q: b ->= d and q ->> d.
PropertyReport check_sc(const Ars& a) {
    BitMatrix closure = detail::forward_closure(a);
    BitMatrix adj = detail::adjacency_bits(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x) {
        auto succ = a.successors(x);
        for (NodeId b : succ)
            for (NodeId q : succ)
                if (!adj.rows_intersect_with(b, b, closure, q, q))
                    return fails(PeakWitness{x, b, q});
    }
    return holds();
}

PropertyReport check_diamond(const Ars& a) {
    BitMatrix adj = detail::adjacency_bits(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x) {
        auto succ = a.successors(x);
        for (NodeId b : succ)
            for (NodeId q : succ)
                if (!adj.rows_intersect_with(b, b, adj, q, q))
                    return fails(PeakWitness{x, b, q});
    }
    return holds();
}

PropertyReport check_un(const Ars& a) {
    auto comp = detail::component_ids(a);
    auto nfs = normal_forms(a);
    for (std::size_t i = 0; i < nfs.size(); ++i)
        for (std::size_t j = i + 1; j < nfs.size(); ++j)
            if (comp[nfs[i]] == comp[nfs[j]]) return fails(PairWitness{nfs[i], nfs[j]});
    return holds();
}

PropertyReport check_unr(const Ars& a) {
    BitMatrix closure = detail::forward_closure(a);
    auto nfs = normal_forms(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x) {
        NodeId first = kNoNode;
        for (NodeId q : nfs) {
            if (!closure.test(x, q)) continue;
            if (first == kNoNode)
                first = q;
            else
                return fails(PeakWitness{x, first, q});
        }
    }
    return holds();
}

PropertyReport check_nfp(const Ars& a) {
    BitMatrix closure = detail::forward_closure(a);
    auto comp = detail::component_ids(a);
    auto nfs = normal_forms(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x)
        for (NodeId q : nfs)
            if (comp[x] == comp[q] && !closure.test(x, q)) return fails(PairWitness{x, q});
    return holds();
}

PropertyReport check_wn(const Ars& a) {
    BitMatrix closure = detail::forward_closure(a);
    auto nfs = normal_forms(a);
    for (NodeId x = 0; x < a.n_nodes(); ++x) {
        bool reduces = false;
        for (NodeId q : nfs) reduces = reduces || closure.test(x, q);
        if (!reduces) return fails(NodeWitness{x});
    }
    return holds();
}

// Every node's reachable part must contain a cofinal reduction; decided
// constructively by running the sequence builder on each restriction.
PropertyReport check_cp(const Ars& a) {
    const NodeId n = a.n_nodes();
    for (NodeId x = 0; x < n; ++x) {
        std::vector<NodeId> nodes = reachable(a, x);
        std::vector<NodeId> to_sub(n, kNoNode);
        for (NodeId i = 0; i < nodes.size(); ++i) to_sub[nodes[i]] = i;
        std::vector<Edge> sub_edges;
        for (const Edge& e : a.edges())
            if (to_sub[e.src] != kNoNode) sub_edges.push_back({to_sub[e.src], to_sub[e.dst]});
        Ars sub(static_cast<NodeId>(nodes.size()), std::move(sub_edges));
        std::vector<NodeId> all(nodes.size());
        for (NodeId i = 0; i < all.size(); ++i) all[i] = i;
        auto result = find_cofinal_sequence(sub, all);
        if (const auto* pair = std::get_if<UnjoinablePair>(&result))
            return fails(PairWitness{nodes[pair->first], nodes[pair->second]});
    }
    return holds();
}

}  // namespace

std::string property_tag(Property p) {
    for (const auto& [prop, tag] : kPropertyTags)
        if (prop == p) return tag;
    throw std::invalid_argument("unknown property");
}

std::optional<Property> property_from_tag(const std::string& tag) {
    for (const auto& [prop, name] : kPropertyTags)
        if (tag == name) return prop;
    return std::nullopt;
}

std::string witness_to_string(const Witness& w) {
    struct Visitor {
        std::string operator()(const PeakWitness& p) const {
            return std::to_string(p.apex) + " " + std::to_string(p.left) + " " +
                   std::to_string(p.right);
        }
        std::string operator()(const PairWitness& p) const {
            return std::to_string(p.first) + " " + std::to_string(p.second);
        }
        std::string operator()(const CycleWitness& c) const {
            std::string out;
            for (NodeId v : c.nodes) {
                if (!out.empty()) out += ' ';
                out += std::to_string(v);
            }
            return out;
        }
        std::string operator()(const NodeWitness& nw) const { return std::to_string(nw.node); }
    };
    return std::visit(Visitor{}, w);
}

std::vector<NodeId> reachable(const Ars& ars, NodeId from) {
    if (from >= ars.n_nodes()) throw std::invalid_argument("node out of range");
    Csr csr = detail::build_csr(ars);
    auto dist = detail::bfs_distances(csr, ars.n_nodes(), from);
    std::vector<NodeId> out;
    for (NodeId v = 0; v < ars.n_nodes(); ++v)
        if (dist[v] != kNoDistance) out.push_back(v);
    return out;
}

std::vector<std::vector<NodeId>> convertible_components(const Ars& ars) {
    auto comp = detail::component_ids(ars);
    std::uint32_t count = 0;
    for (std::uint32_t c : comp) count = std::max(count, c + 1);
    std::vector<std::vector<NodeId>> out(count);
    for (NodeId v = 0; v < ars.n_nodes(); ++v) out[comp[v]].push_back(v);
    return out;
}

std::vector<NodeId> normal_forms(const Ars& ars) {
    auto nf = detail::nf_mask(ars);
    std::vector<NodeId> out;
    for (NodeId v = 0; v < ars.n_nodes(); ++v)
        if (nf[v]) out.push_back(v);
    return out;
}

PropertyReport check(const Ars& ars, Property prop) {
    switch (prop) {
        case Property::CR: return check_cr(ars);
        case Property::WCR: return check_wcr(ars);
        case Property::SC: return check_sc(ars);
        case Property::DIAMOND: return check_diamond(ars);
        case Property::UN: return check_un(ars);
        case Property::UNR: return check_unr(ars);
        case Property::NFP: return check_nfp(ars);
        case Property::WN: return check_wn(ars);
        case Property::SN: return check_acyclic(ars);
        case Property::AC: return check_acyclic(ars);
        case Property::INC: return check_acyclic(ars);
        case Property::IND:
            // On a finite system every infinite reduction visits some node
            // infinitely often; every visited node reduces to that node, so
            // the property always holds.
            return holds();
        case Property::CP: return check_cp(ars);
        case Property::COMMUTE:
            throw std::invalid_argument("commutation needs two relations: use check_commutation");
    }
    throw std::invalid_argument("unknown property");
}

PropertyReport check_commutation(const CommArs& comm) {
    const NodeId n = comm.n_nodes();
    BitMatrix cf = detail::forward_closure(comm.fwd_ars());
    BitMatrix cs = detail::forward_closure(comm.snd_ars());
    for (NodeId x = 0; x < n; ++x)
        for (NodeId b = 0; b < n; ++b) {
            if (!cf.test(x, b)) continue;
            for (NodeId c = 0; c < n; ++c) {
                if (!cs.test(x, c)) continue;
                // Need some d with b ~>> d and c ->> d.
                if (!cs.rows_intersect(b, cf, c)) return fails(PeakWitness{x, b, c});
            }
        }
    return holds();
}

std::variant<MainRoad, UnjoinablePair> find_cofinal_sequence(
    const Ars& ars, const std::vector<NodeId>& component) {
    const NodeId n = ars.n_nodes();
    if (component.empty()) throw std::invalid_argument("component must be non-empty");
    std::vector<NodeId> sorted = component;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("component has repeated nodes");
    if (sorted.back() >= n) throw std::invalid_argument("component node out of range");
    auto comp_ids = detail::component_ids(ars);
    std::vector<NodeId> cls;
    for (NodeId v = 0; v < n; ++v)
        if (comp_ids[v] == comp_ids[sorted.front()]) cls.push_back(v);
    if (cls != sorted)
        throw std::invalid_argument("component is not a convertibility class of the system");

    Csr csr = detail::build_csr(ars);
    std::vector<NodeId> walk{sorted.front()};
    std::vector<NodeId> parent;
    for (NodeId target : sorted) {
        const NodeId e = walk.back();
        auto dist_e = detail::bfs_distances(csr, n, e, &parent);
        auto dist_t = detail::bfs_distances(csr, n, target);
        NodeId meet = kNoNode;
        std::uint64_t best = 0;
        for (NodeId m = 0; m < n; ++m) {
            if (dist_e[m] == kNoDistance || dist_t[m] == kNoDistance) continue;
            std::uint64_t score = std::uint64_t{dist_e[m]} + dist_t[m];
            if (meet == kNoNode || score < best) {
                meet = m;
                best = score;
            }
        }
        if (meet == kNoNode) return UnjoinablePair{e, target};
        // Append the breadth-first path e ->> meet (excluding e itself).
        std::vector<NodeId> path;
        for (NodeId v = meet; v != e; v = parent[v]) path.push_back(v);
        walk.insert(walk.end(), path.rbegin(), path.rend());
    }

    // Contract loops, keeping the first occurrence of every node. Dropping a
    // loop segment keeps cofinality: everything on the segment reduces to the
    // node it loops back to, which stays on the road.
    std::vector<NodeId> road;
    std::vector<std::uint32_t> position(n, kNoDistance);
    for (NodeId v : walk) {
        if (position[v] != kNoDistance) {
            for (std::size_t i = position[v] + 1; i < road.size(); ++i)
                position[road[i]] = kNoDistance;
            road.resize(position[v] + 1);
        } else {
            position[v] = static_cast<std::uint32_t>(road.size());
            road.push_back(v);
        }
    }
    return MainRoad{std::move(road)};
}

}  // namespace rewr
