#include "rewr/cofinality.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace rewr {

namespace {

std::vector<bool> membership_mask(NodeId n_nodes, const std::vector<NodeId>& nodes,
                                  const char* what) {
    std::vector<bool> mask(n_nodes, false);
    for (NodeId v : nodes) {
        if (v >= n_nodes) throw std::invalid_argument(std::string(what) + " node out of range");
        mask[v] = true;
    }
    return mask;
}

bool has_edge(const detail::Csr& csr, NodeId src, NodeId dst) {
    const auto begin = csr.out.begin() + csr.start[src];
    const auto end = csr.out.begin() + csr.start[src + 1];
    return std::binary_search(begin, end, dst);
}

// Shared validation: the road must be a non-empty reduction path whose nodes
// all lie in the component. `require_acyclic` additionally forbids repeats.
void validate_road(const detail::Csr& csr, const std::vector<bool>& in_comp,
                   const MainRoad& road, bool require_acyclic) {
    if (road.nodes.empty()) throw std::invalid_argument("road must be non-empty");
    for (NodeId m : road.nodes) {
        if (m >= in_comp.size() || !in_comp[m])
            throw std::invalid_argument("road node outside the component");
    }
    for (std::size_t i = 0; i + 1 < road.nodes.size(); ++i) {
        if (!has_edge(csr, road.nodes[i], road.nodes[i + 1]))
            throw std::invalid_argument("road is not a reduction path");
    }
    if (require_acyclic) {
        std::vector<NodeId> sorted = road.nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("road must be acyclic");
    }
}

// Multi-source reverse BFS from the road over edges with both endpoints in
// the component. Unreachable nodes keep DistanceMap::kUnset.
std::vector<std::uint32_t> distances_to(const Ars& ars, const std::vector<bool>& in_comp,
                                        const MainRoad& road) {
    const NodeId n = ars.n_nodes();
    std::vector<std::vector<NodeId>> rev(n);
    for (const Edge& e : ars.edges())
        if (in_comp[e.src] && in_comp[e.dst]) rev[e.dst].push_back(e.src);
    std::vector<std::uint32_t> dist(n, DistanceMap::kUnset);
    std::vector<NodeId> queue;
    for (NodeId m : road.nodes) {
        if (dist[m] != 0) {
            dist[m] = 0;
            queue.push_back(m);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (NodeId src : rev[u]) {
            if (dist[src] == DistanceMap::kUnset) {
                dist[src] = dist[u] + 1;
                queue.push_back(src);
            }
        }
    }
    return dist;
}

}  // namespace

WellOrder WellOrder::index_order(NodeId n_nodes) {
    WellOrder o;
    o.rank.resize(n_nodes);
    for (NodeId i = 0; i < n_nodes; ++i) o.rank[i] = i;
    return o;
}

WellOrder WellOrder::reversed_index_order(NodeId n_nodes) {
    WellOrder o;
    o.rank.resize(n_nodes);
    for (NodeId i = 0; i < n_nodes; ++i) o.rank[i] = n_nodes - 1 - i;
    return o;
}

DistanceMap compute_distances(const Ars& ars, const std::vector<NodeId>& component,
                              const MainRoad& road) {
    if (component.empty()) throw std::invalid_argument("component must be non-empty");
    const std::vector<bool> in_comp = membership_mask(ars.n_nodes(), component, "component");
    const detail::Csr csr = detail::build_csr(ars);
    validate_road(csr, in_comp, road, /*require_acyclic=*/false);
    std::vector<std::uint32_t> dist = distances_to(ars, in_comp, road);
    for (NodeId v : component) {
        if (dist[v] == DistanceMap::kUnset)
            throw std::invalid_argument("road is not cofinal: a component node cannot reach it");
    }
    return DistanceMap{std::move(dist)};
}

LabelledArs label_two(const Ars& ars, const std::vector<NodeId>& component,
                      const MainRoad& road, const WellOrder& order) {
    if (order.rank.size() != ars.n_nodes())
        throw std::invalid_argument("order must rank every node");
    const std::vector<bool> in_comp = membership_mask(ars.n_nodes(), component, "component");
    {
        const detail::Csr csr = detail::build_csr(ars);
        validate_road(csr, in_comp, road, /*require_acyclic=*/true);
    }
    const DistanceMap d = compute_distances(ars, component, road);

    constexpr NodeId kNone = ~NodeId{0};
    std::vector<NodeId> road_next(ars.n_nodes(), kNone);
    std::vector<bool> on_road(ars.n_nodes(), false);
    for (std::size_t i = 0; i < road.nodes.size(); ++i) {
        on_road[road.nodes[i]] = true;
        if (i + 1 < road.nodes.size()) road_next[road.nodes[i]] = road.nodes[i + 1];
    }

    // Per source node, the order-least successor one distance level down; only
    // the step to that node is minimising.
    std::vector<NodeId> minimising_to(ars.n_nodes(), kNone);
    for (const Edge& e : ars.edges()) {
        if (!in_comp[e.src] || !in_comp[e.dst] || on_road[e.src]) continue;
        if (d.to_road[e.dst] + 1 != d.to_road[e.src]) continue;
        NodeId& best = minimising_to[e.src];
        if (best == kNone || order.precedes(e.dst, best)) best = e.dst;
    }

    std::vector<LabelledEdge> labelled;
    for (const Edge& e : ars.edges()) {
        if (!in_comp[e.src] || !in_comp[e.dst]) continue;
        const bool zero =
            on_road[e.src] ? road_next[e.src] == e.dst : minimising_to[e.src] == e.dst;
        labelled.push_back({e.src, e.dst, zero ? Label{0} : Label{1}});
    }
    return LabelledArs(ars.n_nodes(), 2, std::move(labelled));
}

RoadLabellingReport verify_road_labelling(const LabelledArs& sys, const MainRoad& road) {
    const Ars proj = sys.project();
    const NodeId n = proj.n_nodes();
    const detail::Csr csr = detail::build_csr(proj);
    const std::vector<std::uint32_t> class_ids = detail::component_ids(proj);
    std::vector<bool> all_nodes_mask(n, true);
    validate_road(csr, all_nodes_mask, road, /*require_acyclic=*/true);

    const std::uint32_t cid = class_ids[road.nodes.front()];
    std::vector<bool> in_comp(n, false);
    std::vector<NodeId> component;
    for (NodeId v = 0; v < n; ++v) {
        if (class_ids[v] == cid) {
            in_comp[v] = true;
            component.push_back(v);
        }
    }
    for (NodeId m : road.nodes) {
        if (!in_comp[m]) throw std::invalid_argument("road node outside the component");
    }

    std::vector<const LabelledEdge*> comp_edges;
    for (const LabelledEdge& e : sys.edges())
        if (in_comp[e.src]) comp_edges.push_back(&e);

    RoadLabellingReport report;

    // (i) exactly two labels, and no step carries more than one of them.
    report.two_labels_single = sys.label_count() == 2;
    for (std::size_t i = 0; i + 1 < comp_edges.size(); ++i) {
        if (comp_edges[i]->src == comp_edges[i + 1]->src &&
            comp_edges[i]->dst == comp_edges[i + 1]->dst)
            report.two_labels_single = false;
    }

    // Reflexive-transitive closure of the 0-labelled steps in the component.
    std::vector<Edge> zero_edges;
    for (const LabelledEdge* e : comp_edges)
        if (e->label == 0) zero_edges.push_back({e->src, e->dst});
    const detail::BitMatrix reach0 = detail::forward_closure(Ars(n, std::move(zero_edges)));

    // (ii) every pair of road nodes joins inside the 0-labelled subsystem.
    report.road_joins_zero = true;
    for (NodeId x : road.nodes)
        for (NodeId y : road.nodes)
            if (!reach0.rows_intersect(x, reach0, y)) report.road_joins_zero = false;

    // (iii) at most one 0-labelled step out of each component node.
    std::vector<std::uint32_t> zero_out(n, 0);
    for (const LabelledEdge* e : comp_edges)
        if (e->label == 0) ++zero_out[e->src];
    report.zero_unique = true;
    for (NodeId v : component)
        if (zero_out[v] > 1) report.zero_unique = false;

    // (iv) every off-road node has a 0-step that strictly lowers the distance.
    const std::vector<std::uint32_t> dist = distances_to(proj, in_comp, road);
    std::vector<bool> on_road(n, false);
    for (NodeId m : road.nodes) on_road[m] = true;
    std::vector<bool> lowers(n, false);
    for (const LabelledEdge* e : comp_edges) {
        if (e->label != 0) continue;
        if (dist[e->src] != DistanceMap::kUnset && dist[e->dst] != DistanceMap::kUnset &&
            dist[e->src] > dist[e->dst])
            lowers[e->src] = true;
    }
    report.zero_decreases = true;
    for (NodeId v : component)
        if (!on_road[v] && !lowers[v]) report.zero_decreases = false;

    // (v) the 0-labelled subsystem reduces every component node to the road.
    report.zero_reaches_road = true;
    for (NodeId v : component) {
        bool reaches = false;
        for (NodeId m : road.nodes) reaches = reaches || reach0.test(v, m);
        if (!reaches) report.zero_reaches_road = false;
    }

    // (vi) every component peak closes decreasingly, and in addition its two
    // targets join using 0-labelled steps only.
    report.peaks_decrease = true;
    for (std::size_t i = 0; i < comp_edges.size(); ++i) {
        for (std::size_t j = i + 1; j < comp_edges.size() && report.peaks_decrease; ++j) {
            if (comp_edges[i]->src != comp_edges[j]->src) break;
            const Peak peak{comp_edges[i]->src,
                            {comp_edges[i]->dst, comp_edges[i]->label, Rel::fwd},
                            {comp_edges[j]->dst, comp_edges[j]->label, Rel::fwd}};
            if (!decreasing_join_exists(sys, peak).has_value() ||
                !reach0.rows_intersect(peak.left.dst, reach0, peak.right.dst))
                report.peaks_decrease = false;
        }
        if (!report.peaks_decrease) break;
    }
    return report;
}

std::variant<TwoLabelConstruction, NotConfluent> dcr2_construct_full(const Ars& ars) {
    const std::vector<std::vector<NodeId>> components = convertible_components(ars);
    std::vector<MainRoad> roads;
    std::vector<LabelledEdge> all_edges;
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto found = find_cofinal_sequence(ars, components[i]);
        if (std::holds_alternative<UnjoinablePair>(found)) {
            const auto& pair = std::get<UnjoinablePair>(found);
            return NotConfluent{i, pair.first, pair.second};
        }
        MainRoad road = std::get<MainRoad>(std::move(found));
        LabelledArs part =
            label_two(ars, components[i], road, WellOrder::index_order(ars.n_nodes()));
        all_edges.insert(all_edges.end(), part.edges().begin(), part.edges().end());
        roads.push_back(std::move(road));
    }
    return TwoLabelConstruction{LabelledArs(ars.n_nodes(), 2, std::move(all_edges)),
                                components, std::move(roads)};
}

std::variant<LabelledArs, NotConfluent> dcr2_construct(const Ars& ars) {
    auto full = dcr2_construct_full(ars);
    if (std::holds_alternative<NotConfluent>(full)) return std::get<NotConfluent>(full);
    return std::get<TwoLabelConstruction>(std::move(full)).labelled;
}

}  // namespace rewr
