// Labelled rewrite systems and the decreasing-diagrams machinery: elementary
// diagram checks via a phase automaton, local-decreasingness verdicts, and
// backtracking searches for decreasing labellings.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rewr/core.hpp"

namespace rewr {

using Label = std::uint32_t;

/// One labelled step src -> dst with label `label`.
struct LabelledEdge {
    NodeId src = 0;
    NodeId dst = 0;
    Label label = 0;
    friend auto operator<=>(const LabelledEdge&, const LabelledEdge&) = default;
};

/// An Ars whose steps carry labels drawn from {0, ..., label_count-1}.
/// Distinct labels on the same (src, dst) pair are structurally permitted
/// (multi-label systems); the constructions in this project only produce one
/// label per step. label_count == 0 is allowed only for edgeless systems.
class LabelledArs {
  public:
    LabelledArs(NodeId n_nodes, Label label_count, std::vector<LabelledEdge> edges);

    NodeId n_nodes() const { return n_nodes_; }
    Label label_count() const { return label_count_; }
    const std::vector<LabelledEdge>& edges() const { return edges_; }

    /// Forgets the labels (parallel labelled steps collapse).
    Ars project() const;

    friend bool operator==(const LabelledArs&, const LabelledArs&) = default;

  private:
    NodeId n_nodes_;
    Label label_count_;
    std::vector<LabelledEdge> edges_;
};

/// Labelled pair of relations, for commutation diagrams.
class LabelledCommArs {
  public:
    LabelledCommArs(NodeId n_nodes, Label label_count, std::vector<LabelledEdge> fwd,
                    std::vector<LabelledEdge> snd);

    NodeId n_nodes() const { return n_nodes_; }
    Label label_count() const { return label_count_; }
    const std::vector<LabelledEdge>& fwd() const { return fwd_; }
    const std::vector<LabelledEdge>& snd() const { return snd_; }

    CommArs project() const;

    friend bool operator==(const LabelledCommArs&, const LabelledCommArs&) = default;

  private:
    NodeId n_nodes_;
    Label label_count_;
    std::vector<LabelledEdge> fwd_;
    std::vector<LabelledEdge> snd_;
};

/// Which relation a step belongs to. Plain labelled systems use only `fwd`.
enum class Rel : std::uint8_t { fwd, snd };

/// One of the two steps forming a peak.
struct PeakStep {
    NodeId dst = 0;
    Label label = 0;
    Rel rel = Rel::fwd;
    friend auto operator<=>(const PeakStep&, const PeakStep&) = default;
};

/// A local peak: left.dst <- apex -> right.dst. In commutation systems the
/// left step is from the forward relation and the right step from the second.
struct Peak {
    NodeId apex = 0;
    PeakStep left, right;
    friend auto operator<=>(const Peak&, const Peak&) = default;
};

struct LabelledStep {
    NodeId src = 0, dst = 0;
    Label label = 0;
    friend auto operator<=>(const LabelledStep&, const LabelledStep&) = default;
};

/// One side of an elementary decreasing diagram, starting at a peak target:
///   prefix steps, all labelled < the label of the step that produced the
///   start node; then at most one `middle` step labelled exactly as the
///   opposite peak step; then suffix steps labelled < max of the two peak
///   labels. In commutation diagrams the side starting at the forward-step
///   target runs inside the second relation and vice versa.
struct JoinSide {
    std::vector<LabelledStep> prefix;
    std::optional<LabelledStep> middle;
    std::vector<LabelledStep> suffix;
    friend bool operator==(const JoinSide&, const JoinSide&) = default;
};

/// Certificate that a peak closes into a decreasing elementary diagram.
/// `left` starts at peak.left.dst, `right` at peak.right.dst; both end at
/// `meet`.
struct JoinCertificate {
    NodeId meet = 0;
    JoinSide left, right;
    friend bool operator==(const JoinCertificate&, const JoinCertificate&) = default;
};

/// Structural re-check of a certificate against the system (steps exist with
/// the demanded labels and relations, segments chain, label bounds hold).
bool certificate_valid(const LabelledArs& sys, const Peak& peak, const JoinCertificate& cert);
bool certificate_valid(const LabelledCommArs& sys, const Peak& peak, const JoinCertificate& cert);

/// Searches for a decreasing elementary diagram closing `peak`. The search is
/// a breadth-first exploration of (node, phase) states per side; the returned
/// meet is the smallest node joinable on both sides, and paths follow
/// first-discovery parents (neighbours scanned in (dst, label) order).
/// Certificates are structurally re-validated before being returned.
/// Throws std::invalid_argument if the peak's steps are not steps of `sys`.
std::optional<JoinCertificate> decreasing_join_exists(const LabelledArs& sys, const Peak& peak);
std::optional<JoinCertificate> decreasing_join_exists(const LabelledCommArs& sys,
                                                      const Peak& peak);

struct DecreasingReport {
    bool decreasing = false;
    std::optional<Peak> witness;  // first failing peak in (apex, left, right) order
};

/// Checks every local peak of the system (for commutation systems: every
/// forward/second coinitial step pair).
DecreasingReport is_locally_decreasing(const LabelledArs& sys);
DecreasingReport is_locally_decreasing_comm(const LabelledCommArs& sys);

/// Result of a labelling search. `exhausted` reports whether the whole search
/// space was covered when no labelling was found; when false the step budget
/// ran out and the question is open.
template <typename System>
struct SearchResult {
    std::optional<System> labelling;
    bool exhausted = false;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

/// Backtracking search for a locally decreasing labelling with labels
/// {0..k-1}. Deterministic: edges are ordered by descending number of peaks
/// they participate in, ties by (src, dst, relation); label values are tried
/// in increasing order; the first labelling found is returned. The budget
/// counts (node, phase) expansions across all diagram checks. With
/// `multi_label` every step may carry any non-empty subset of the labels
/// (subsets tried in increasing bitmask order); intended for tiny systems.
SearchResult<LabelledArs> dcr_search(const Ars& ars, Label k,
                                     std::uint64_t budget = kDefaultSearchBudget,
                                     bool multi_label = false);
SearchResult<LabelledCommArs> dc_search(const CommArs& comm, Label k,
                                        std::uint64_t budget = kDefaultSearchBudget,
                                        bool multi_label = false);

/// Specialised verifier for two-label systems produced by the cofinality
/// construction: peaks with both steps labelled 0 must have equal targets,
/// and every other peak must be joinable using 0-labelled steps only on both
/// sides. Throws std::invalid_argument unless label_count == 2.
DecreasingReport verify_simple_01(const LabelledArs& sys);

/// Removes every step carrying the top label and decrements label_count.
/// Precondition: `sys` is locally decreasing (std::invalid_argument
/// otherwise). The result is checked to be locally decreasing again (the
/// join steps of a decreasing diagram never exceed the peak's top label);
/// violation of that internal argument raises std::logic_error.
LabelledArs strip_max_label(const LabelledArs& sys);
LabelledCommArs strip_max_label(const LabelledCommArs& sys);

}  // namespace rewr
