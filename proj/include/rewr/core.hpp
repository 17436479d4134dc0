// Finite abstract rewrite systems: graph types, reduction relations, and
// decision procedures for the classical confluence-related properties.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rewr {

using NodeId = std::uint32_t;

/// One rewrite step src -> dst.
struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A finite abstract rewrite system: a set of nodes {0, ..., n_nodes-1} and a
/// single step relation. Edges are kept sorted by (src, dst) and duplicate
/// edges are rejected, so structural equality is simply member equality.
class Ars {
  public:
    /// Validates node ids and normalizes the edge list (sorts, rejects
    /// duplicates). Throws std::invalid_argument on out-of-range endpoints,
    /// duplicate edges, or n_nodes == 0.
    Ars(NodeId n_nodes, std::vector<Edge> edges);

    NodeId n_nodes() const { return n_nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Out-neighbours of `a`, ascending. Precondition: a < n_nodes().
    std::vector<NodeId> successors(NodeId a) const;

    friend bool operator==(const Ars&, const Ars&) = default;

  private:
    NodeId n_nodes_;
    std::vector<Edge> edges_;
};

/// Two step relations over a common node set: a forward relation -> and a
/// second relation ~> (used for commutation questions).
class CommArs {
  public:
    CommArs(NodeId n_nodes, std::vector<Edge> fwd, std::vector<Edge> snd);

    NodeId n_nodes() const { return n_nodes_; }
    const std::vector<Edge>& fwd() const { return fwd_; }
    const std::vector<Edge>& snd() const { return snd_; }

    Ars fwd_ars() const { return Ars(n_nodes_, fwd_); }
    Ars snd_ars() const { return Ars(n_nodes_, snd_); }

    friend bool operator==(const CommArs&, const CommArs&) = default;

  private:
    NodeId n_nodes_;
    std::vector<Edge> fwd_;
    std::vector<Edge> snd_;
};

/// Properties of a single step relation, plus COMMUTE for relation pairs.
enum class Property {
    CR,       // confluence: coinitial reductions are joinable
    WCR,      // local confluence: coinitial single steps are joinable
    SC,       // strong confluence: b <- a -> c implies b ->= d <<- c
    DIAMOND,  // diamond property of the reflexive closure of ->
    UN,       // convertible normal forms are equal
    UNR,      // normal forms of a common ancestor are equal
    NFP,      // a <->* b with b normal implies a ->> b
    WN,       // every node reduces to some normal form
    SN,       // no infinite reduction sequences
    AC,       // acyclicity: a ->+ b implies a != b
    IND,      // every infinite sequence has a common reduct of its elements
    INC,      // some f: A -> N increases strictly along every step
    CP,       // every node has a cofinal reduction in its reachable part
    COMMUTE,  // only meaningful for CommArs
};

/// Lowercase command-line tag ("cr", "wcr", ...) <-> enum.
std::string property_tag(Property p);
std::optional<Property> property_from_tag(const std::string& tag);

/// Counterexample shapes. Every failed check carries one; each is
/// independently checkable against the input system.
struct PeakWitness {  // coinitial pair that misbehaves: left <(-) apex (-)> right
    NodeId apex = 0, left = 0, right = 0;
    friend auto operator<=>(const PeakWitness&, const PeakWitness&) = default;
};
struct PairWitness {  // e.g. two distinct convertible normal forms
    NodeId first = 0, second = 0;
    friend auto operator<=>(const PairWitness&, const PairWitness&) = default;
};
struct CycleWitness {  // nodes of a reduction cycle, in step order
    std::vector<NodeId> nodes;
    friend bool operator==(const CycleWitness&, const CycleWitness&) = default;
};
struct NodeWitness {  // a single offending node
    NodeId node = 0;
    friend auto operator<=>(const NodeWitness&, const NodeWitness&) = default;
};
using Witness = std::variant<PeakWitness, PairWitness, CycleWitness, NodeWitness>;

/// Space-separated node list as printed by the command line driver.
std::string witness_to_string(const Witness& w);

struct PropertyReport {
    bool holds = false;
    std::optional<Witness> witness;  // present exactly when holds == false
};

/// Nodes reachable from `from` by ->* (including `from`), ascending.
std::vector<NodeId> reachable(const Ars& ars, NodeId from);

/// Partition of all nodes into convertibility (<->*) classes. Classes are
/// ordered by their smallest node; each class is ascending.
std::vector<std::vector<NodeId>> convertible_components(const Ars& ars);

/// Nodes without outgoing steps, ascending.
std::vector<NodeId> normal_forms(const Ars& ars);

/// Decides `prop` for `ars` exactly (finite-system semantics). COMMUTE is an
/// input error here (throws std::invalid_argument): use check_commutation.
/// Witnesses are deterministic: the lexicographically first counterexample in
/// the documented enumeration order for the property.
PropertyReport check(const Ars& ars, Property prop);

/// Commutation of fwd and snd: b <<-(fwd) a ~>>(snd) c implies there is d
/// with b ~>> d <<- c. Witness: first failing (a, b, c).
PropertyReport check_commutation(const CommArs& comm);

/// A cofinal reduction path: consecutive nodes are single steps, no node
/// repeats, and every node of the enclosing component reduces to some node
/// on the path.
struct MainRoad {
    std::vector<NodeId> nodes;
    friend bool operator==(const MainRoad&, const MainRoad&) = default;
};

/// Coinitial pair found unjoinable while building a cofinal sequence.
struct UnjoinablePair {
    NodeId first = 0, second = 0;
    friend auto operator<=>(const UnjoinablePair&, const UnjoinablePair&) = default;
};

/// Builds a cofinal acyclic reduction sequence for one convertibility class:
/// walk the class nodes in ascending order, repeatedly joining the current
/// endpoint with the next node (breadth-first, nearest meet, ties by node
/// index), then contract loops keeping first occurrences. Returns the road,
/// or the first unjoinable pair encountered (the class is not confluent).
/// Precondition: `component` is exactly one <->*-class of `ars` (checked).
std::variant<MainRoad, UnjoinablePair> find_cofinal_sequence(
    const Ars& ars, const std::vector<NodeId>& component);

}  // namespace rewr
