// The Phi family: a nested sequence of commuting relation pairs whose n-th
// member admits a decreasing labelling with 5n+1 labels but none with n.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"

namespace rewr {

/// phi(n) together with its distinguished nodes. Both relations are
/// deterministic (at most one step per node per relation) and every node
/// reduces to `c` in each relation alone. a1/b1 are the outermost entry
/// nodes; a/b are the previous level's outer entries (at level 0 both
/// coincide with the sink c).
struct PhiSystem {
    CommArs comm;
    unsigned level = 0;
    NodeId a1 = 0;  // outer forward entry
    NodeId a = 0;   // previous level's forward entry
    NodeId c = 0;   // global sink
    NodeId b = 0;   // previous level's second entry
    NodeId b1 = 0;  // outer second entry
};

inline constexpr unsigned kMaxPhiLevel = 20;

/// Builds phi(level). Node numbering: the inner system first (recursively),
/// then the fresh a1..a7 of this level, then the fresh b1..b7; so phi(n) has
/// 7 + 14n nodes and 6 + 14n edges in each relation.
/// Throws std::invalid_argument if level > kMaxPhiLevel.
PhiSystem phi(unsigned level);

/// Human-readable names for every node of phi(level): "a1@0".."b7@2" style,
/// level 0 using the base names a1,a2,a3,c,b2,b3,b1. Pairs are (name, node),
/// in node order.
std::vector<std::pair<std::string, NodeId>> phi_node_names(unsigned level);

/// The witness labelling: level-m edges (m >= 1) are labelled in the band
/// 5(m-1)+1 .. 5(m-1)+5 following the published pattern, level-0 edges get
/// 0. label_count is 5*level + 1, so the labelling uses labels {0..5n}.
LabelledCommArs phi_witness_labelling(unsigned level);

struct PhiPropertiesReport {
    bool deterministic = false;   // at most one step per node per relation
    bool all_reach_sink = false;  // every node reaches c in each relation alone
    bool join_a = false;          // a1 ~>> x <<- b1  iff  a ~>> x and a ->> x
    bool join_b = false;          // a1 ->> x, b1 ~>> x  iff  b ~>> x and b ->> x
    bool all() const { return deterministic && all_reach_sink && join_a && join_b; }
};

/// Checks the four structural facts the family's construction relies on.
PhiPropertiesReport verify_phi_properties(unsigned level);

}  // namespace rewr
