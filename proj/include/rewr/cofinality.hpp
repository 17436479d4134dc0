// Two-label decreasing labellings from cofinal reductions: distance maps to a
// main road, the label assignment itself, its six-point verifier, and the
// end-to-end construction over all convertibility classes.
#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"

namespace rewr {

/// Shortest rewrite distance from each component node to the road (0 on the
/// road itself). Entries for nodes outside the component are meaningless.
struct DistanceMap {
    static constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t> to_road;
};

/// A total order on nodes used to break ties among equidistant successors.
/// rank[a] < rank[b] means a precedes b. Defaults to index order.
struct WellOrder {
    std::vector<std::uint32_t> rank;

    static WellOrder index_order(NodeId n_nodes);
    static WellOrder reversed_index_order(NodeId n_nodes);
    bool precedes(NodeId a, NodeId b) const { return rank[a] < rank[b]; }
};

/// Multi-source reverse breadth-first search from the road nodes, restricted
/// to the component. Throws std::invalid_argument if the road is not a valid
/// reduction path inside the component, or if some component node cannot
/// reach the road (the road is then not cofinal).
DistanceMap compute_distances(const Ars& ars, const std::vector<NodeId>& component,
                              const MainRoad& road);

/// Labels every step inside the component with 0 or 1: road steps get 0, and
/// a step a -> b off the road gets 0 exactly when it is the minimising step
/// of a, i.e. d(a) = d(b) + 1 and b is the order-least successor of a at
/// distance d(b). Everything else gets 1. Steps outside the component are not
/// part of the result. label_count of the result is 2.
LabelledArs label_two(const Ars& ars, const std::vector<NodeId>& component,
                      const MainRoad& road, const WellOrder& order);

/// The six properties that make a two-label road labelling decreasing. The
/// verification domain is the convertibility class of the road's first node
/// in the projection of `sys`.
struct RoadLabellingReport {
    bool two_labels_single = false;   // (i) label_count == 2, one label per step
    bool road_joins_zero = false;     // (ii) road nodes join via 0-steps
    bool zero_unique = false;         // (iii) at most one 0-successor per node
    bool zero_decreases = false;      // (iv) off-road nodes have a 0-step lowering d
    bool zero_reaches_road = false;   // (v) every node 0-reduces to the road
    bool peaks_decrease = false;      // (vi) peaks close decreasingly, 0-only joins
    bool all() const {
        return two_labels_single && road_joins_zero && zero_unique && zero_decreases &&
               zero_reaches_road && peaks_decrease;
    }
};

/// Checks the six properties above. (vi) delegates to decreasing_join_exists
/// and additionally requires a join using only 0-labelled steps on both
/// sides. Throws std::invalid_argument if the road itself is not a valid
/// acyclic reduction path of the projection.
RoadLabellingReport verify_road_labelling(const LabelledArs& sys, const MainRoad& road);

/// Constructive failure: the class with this index (in component order) holds
/// an unjoinable coinitial pair.
struct NotConfluent {
    std::size_t component = 0;
    NodeId first = 0, second = 0;
    friend auto operator<=>(const NotConfluent&, const NotConfluent&) = default;
};

/// Full output of the two-label construction: the labelled system plus the
/// per-class roads that produced it (components ordered by smallest node).
struct TwoLabelConstruction {
    LabelledArs labelled;
    std::vector<std::vector<NodeId>> components;
    std::vector<MainRoad> roads;
};

/// Runs find_cofinal_sequence / compute_distances / label_two on every
/// convertibility class (index well-order) and unions the results. Fails with
/// NotConfluent on the first class without a cofinal sequence.
std::variant<TwoLabelConstruction, NotConfluent> dcr2_construct_full(const Ars& ars);

/// As above, but returns just the labelled system.
std::variant<LabelledArs, NotConfluent> dcr2_construct(const Ars& ars);

}  // namespace rewr
