// Neighbourhood-based model comparison: degrees, undirected distances, rooted
// r-neighbourhoods, rooted isomorphism with exact canonical encodings, local
// isomorphism tables, and generators for the property-separating families.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rewr/core.hpp"

namespace rewr {

/// Number of distinct neighbours of `a` (in- or out-); a self-loop
/// contributes one neighbour (a itself).
std::uint32_t degree(const Ars& ars, NodeId a);

/// Length of the shortest undirected path, or nullopt when disconnected.
std::optional<std::uint32_t> undirected_distance(const Ars& ars, NodeId a, NodeId b);

/// A graph with one distinguished node.
struct RootedGraph {
    Ars graph;
    NodeId root = 0;
    friend bool operator==(const RootedGraph&, const RootedGraph&) = default;
};

/// Induced subgraph on the nodes within undirected distance <= radius of
/// `a`, with directed edges (self-loops included). Nodes are re-indexed by
/// (breadth-first layer, original index), so the root becomes node 0.
RootedGraph neighbourhood(const Ars& ars, NodeId a, std::uint32_t radius);

/// Root-preserving directed-graph isomorphism (backtracking with degree and
/// root-distance pruning).
bool rooted_isomorphic(const RootedGraph& g1, const RootedGraph& g2);

/// Exact canonical form: iterated colour refinement seeded with
/// (distance-to-root, in-degree, out-degree), individualising every member of
/// the first non-singleton class and taking the minimal leaf encoding. Two
/// rooted graphs are isomorphic iff their encodings are equal. The encoding
/// is printable: "n<k>:r<root>:<src>><dst>,..." with edges in canonical
/// order ("-" when there are no edges).
std::string canonical_encoding(const RootedGraph& g);

/// Multiset of neighbourhood isomorphism classes: canonical encoding -> count.
using IsoClassTable = std::map<std::string, std::uint64_t>;

struct LocalIsoResult {
    bool isomorphic = false;
    IsoClassTable table_a, table_b;
};

/// Hanf-style comparison: do A and B realise every isomorphism type of
/// radius-r neighbourhoods equally often?
LocalIsoResult locally_isomorphic(const Ars& a, const Ars& b, std::uint32_t radius);

/// The four generated families (disjoint unions of p components of sizes
/// growing with the index). Tags: cr, sn, inc, sc.
enum class FamilyKind { cr, sn, inc, sc };

std::optional<FamilyKind> family_from_tag(const std::string& tag);

struct GeneratedFamily {
    Ars ars;
    /// (symbolic name, node) pairs in node order, e.g. "a@3" for the apex of
    /// the third component.
    std::vector<std::pair<std::string, NodeId>> names;
};

/// Builds the family with p components (p >= 1, std::invalid_argument
/// otherwise; components in index order, nodes numbered component by
/// component).
GeneratedFamily gen_family_named(FamilyKind kind, unsigned p);
Ars gen_family(FamilyKind kind, unsigned p);

}  // namespace rewr
