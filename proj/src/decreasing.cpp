#include "rewr/decreasing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "internal.hpp"

namespace rewr {

namespace {

constexpr Label kUnassignedLabel = std::numeric_limits<Label>::max();
constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

/// Unified view of a labelled (or partially labelled) system. Labels live in
/// a separate array indexed by step id, so a search can rebind them without
/// rebuilding adjacency. In multi-label mode a label cell holds a bitmask of
/// labels; kUnassignedLabel marks a step the search has not bound yet.
struct StepGraph {
    struct Out {
        NodeId dst;
        std::uint32_t var;
    };
    struct VarInfo {
        NodeId src, dst;
        Rel rel;
    };

    NodeId n = 0;
    Label k = 0;
    bool comm = false;
    bool multi = false;
    std::vector<std::vector<Out>> out[2];  // [relation][node], (dst, var) ascending
    std::vector<VarInfo> vars;
    std::vector<Label> labels;  // value, bitmask, or kUnassignedLabel

    void init(NodeId n_nodes, Label label_count, bool is_comm) {
        n = n_nodes;
        k = label_count;
        comm = is_comm;
        out[0].assign(n, {});
        out[1].assign(n, {});
    }
    void add_var(NodeId src, NodeId dst, Rel rel, Label label) {
        auto var = static_cast<std::uint32_t>(vars.size());
        vars.push_back({src, dst, rel});
        labels.push_back(label);
        out[static_cast<int>(rel)][src].push_back({dst, var});
    }
};

StepGraph graph_of(const LabelledArs& sys) {
    StepGraph g;
    g.init(sys.n_nodes(), sys.label_count(), false);
    for (const auto& e : sys.edges()) g.add_var(e.src, e.dst, Rel::fwd, e.label);
    return g;
}

StepGraph graph_of(const LabelledCommArs& sys) {
    StepGraph g;
    g.init(sys.n_nodes(), sys.label_count(), true);
    for (const auto& e : sys.fwd()) g.add_var(e.src, e.dst, Rel::fwd, e.label);
    for (const auto& e : sys.snd()) g.add_var(e.src, e.dst, Rel::snd, e.label);
    return g;
}

/// Label admission tests for the three diagram phases. An unassigned step is
/// admitted whenever some concrete label would be (phase A needs a label
/// < own, so any positive bound admits it; the middle phase is always
/// satisfiable). A multi-label step is admitted if any of its labels is.
struct PhaseRules {
    Label own, other, maxl;
    bool multi;

    static bool any_below(Label bound, bool multi_mode, Label value_or_mask) {
        if (multi_mode) {
            if (bound >= 32) return value_or_mask != 0;
            return (value_or_mask & ((Label{1} << bound) - 1)) != 0;
        }
        return value_or_mask < bound;
    }

    bool prefix_ok(Label lv, bool& wildcard) const {
        if (lv == kUnassignedLabel) {
            wildcard = true;
            return own > 0;
        }
        return any_below(own, multi, lv);
    }
    bool middle_ok(Label lv, bool& wildcard) const {
        if (lv == kUnassignedLabel) {
            wildcard = true;
            return true;
        }
        return multi ? ((lv >> other) & 1) != 0 : lv == other;
    }
    bool suffix_ok(Label lv, bool& wildcard) const {
        if (lv == kUnassignedLabel) {
            wildcard = true;
            return maxl > 0;
        }
        return any_below(maxl, multi, lv);
    }
};

enum Phase : int { kPhaseA = 0, kPhaseB = 1 };

/// Breadth-first sweep of one diagram side. Fills `reach_b` with the nodes
/// reachable in the accepting phase. Every state expansion consumes budget;
/// returns false when the budget runs dry. `used_wildcard` is set when an
/// unassigned step contributed a new state (such verdicts are provisional).
/// When `stop_set` is given, the sweep ends early once a phase-B node inside
/// it is found (existence queries); `*hit` reports whether that happened.
bool side_sweep(const StepGraph& g, int rel, NodeId start, const PhaseRules& rules,
                std::uint64_t& budget, std::vector<bool>& reach_b, bool& used_wildcard,
                const std::vector<bool>* stop_set = nullptr, bool* hit = nullptr) {
    const NodeId n = g.n;
    std::vector<bool> seen[2] = {std::vector<bool>(n, false), std::vector<bool>(n, false)};
    reach_b.assign(n, false);
    std::vector<std::pair<NodeId, int>> queue;
    queue.reserve(16);

    bool done = false;
    auto push = [&](NodeId v, int phase, bool wildcard) {
        if (seen[phase][v]) return;
        seen[phase][v] = true;
        if (wildcard) used_wildcard = true;
        if (phase == kPhaseB) {
            reach_b[v] = true;
            if (stop_set && (*stop_set)[v]) {
                *hit = true;
                done = true;
            }
        }
        queue.emplace_back(v, phase);
    };

    push(start, kPhaseA, false);
    for (std::size_t head = 0; head < queue.size() && !done; ++head) {
        if (budget == 0) return false;
        --budget;
        auto [u, phase] = queue[head];
        if (phase == kPhaseA) {
            push(u, kPhaseB, false);  // skip the middle step
            if (done) break;
            for (const auto& step : g.out[rel][u]) {
                Label lv = g.labels[step.var];
                bool wc = false;
                if (rules.prefix_ok(lv, wc)) push(step.dst, kPhaseA, wc);
                if (done) break;
                wc = false;
                if (rules.middle_ok(lv, wc)) push(step.dst, kPhaseB, wc);
                if (done) break;
            }
        } else {
            for (const auto& step : g.out[rel][u]) {
                Label lv = g.labels[step.var];
                bool wc = false;
                if (rules.suffix_ok(lv, wc)) push(step.dst, kPhaseB, wc);
                if (done) break;
            }
        }
    }
    return true;
}

int left_relation(const StepGraph& g) { return g.comm ? 1 : 0; }
int right_relation(const StepGraph&) { return 0; }

/// Existence of a decreasing elementary diagram for the peak
/// left_dst <-[alpha] apex ->[beta] right_dst (labels already resolved).
/// Returns 1 (joinable), 0 (not joinable), -1 (budget exhausted).
int peak_joinable(const StepGraph& g, NodeId left_dst, Label alpha, NodeId right_dst,
                  Label beta, std::uint64_t& budget, bool& used_wildcard) {
    const Label maxl = std::max(alpha, beta);
    std::vector<bool> left_b, right_b;
    PhaseRules left_rules{alpha, beta, maxl, g.multi};
    if (!side_sweep(g, left_relation(g), left_dst, left_rules, budget, left_b, used_wildcard))
        return -1;
    PhaseRules right_rules{beta, alpha, maxl, g.multi};
    bool hit = false;
    if (!side_sweep(g, right_relation(g), right_dst, right_rules, budget, right_b,
                    used_wildcard, &left_b, &hit))
        return -1;
    return hit ? 1 : 0;
}

/// Sweep with first-discovery parents for certificate reconstruction (fixed
/// labels only). how: 0 start, 1 epsilon, 2 prefix, 3 middle, 4 suffix.
struct Trace {
    std::int8_t how = -1;
    NodeId from = 0;
    Label label = 0;
};

void side_sweep_traced(const StepGraph& g, int rel, NodeId start, const PhaseRules& rules,
                       std::vector<Trace>& tr) {
    const NodeId n = g.n;
    tr.assign(2 * std::size_t{n}, Trace{});
    std::vector<std::pair<NodeId, int>> queue;
    auto push = [&](NodeId v, int phase, std::int8_t how, NodeId from, Label label) {
        Trace& t = tr[std::size_t{static_cast<std::size_t>(phase)} * n + v];
        if (t.how != -1) return;
        t = {how, from, label};
        queue.emplace_back(v, phase);
    };
    push(start, kPhaseA, 0, start, 0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [u, phase] = queue[head];
        bool wc = false;
        if (phase == kPhaseA) {
            push(u, kPhaseB, 1, u, 0);
            for (const auto& step : g.out[rel][u]) {
                Label lv = g.labels[step.var];
                if (rules.prefix_ok(lv, wc)) push(step.dst, kPhaseA, 2, u, lv);
                if (rules.middle_ok(lv, wc)) push(step.dst, kPhaseB, 3, u, lv);
            }
        } else {
            for (const auto& step : g.out[rel][u]) {
                Label lv = g.labels[step.var];
                if (rules.suffix_ok(lv, wc)) push(step.dst, kPhaseB, 4, u, lv);
            }
        }
    }
}

JoinSide side_from_trace(const std::vector<Trace>& tr, NodeId n, NodeId meet) {
    std::vector<std::pair<std::int8_t, LabelledStep>> reversed;
    NodeId node = meet;
    int phase = kPhaseB;
    for (;;) {
        const Trace& t = tr[std::size_t{static_cast<std::size_t>(phase)} * n + node];
        if (t.how == 0) break;
        switch (t.how) {
            case 1: phase = kPhaseA; break;
            case 2: reversed.push_back({2, {t.from, node, t.label}}); node = t.from; break;
            case 3:
                reversed.push_back({3, {t.from, node, t.label}});
                node = t.from;
                phase = kPhaseA;
                break;
            default: reversed.push_back({4, {t.from, node, t.label}}); node = t.from; break;
        }
    }
    JoinSide side;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
        if (it->first == 2)
            side.prefix.push_back(it->second);
        else if (it->first == 3)
            side.middle = it->second;
        else
            side.suffix.push_back(it->second);
    }
    return side;
}

bool has_step(const std::vector<LabelledEdge>& edges, NodeId src, NodeId dst, Label label) {
    return std::binary_search(edges.begin(), edges.end(), LabelledEdge{src, dst, label});
}

void require_peak_of(const StepGraph& g, const std::vector<LabelledEdge>& fwd_edges,
                     const std::vector<LabelledEdge>& snd_edges, const Peak& peak) {
    const Rel want_right = g.comm ? Rel::snd : Rel::fwd;
    if (peak.left.rel != Rel::fwd || peak.right.rel != want_right)
        throw std::invalid_argument("peak step relations do not match the system");
    if (!has_step(fwd_edges, peak.apex, peak.left.dst, peak.left.label))
        throw std::invalid_argument("left peak step is not a step of the system");
    const auto& right_edges = g.comm ? snd_edges : fwd_edges;
    if (!has_step(right_edges, peak.apex, peak.right.dst, peak.right.label))
        throw std::invalid_argument("right peak step is not a step of the system");
}

std::optional<JoinCertificate> join_certificate(const StepGraph& g, const Peak& peak) {
    const Label alpha = peak.left.label, beta = peak.right.label;
    const Label maxl = std::max(alpha, beta);
    std::vector<Trace> left_tr, right_tr;
    side_sweep_traced(g, left_relation(g), peak.left.dst, {alpha, beta, maxl, g.multi},
                      left_tr);
    side_sweep_traced(g, right_relation(g), peak.right.dst, {beta, alpha, maxl, g.multi},
                      right_tr);
    const NodeId n = g.n;
    for (NodeId d = 0; d < n; ++d)
        if (left_tr[std::size_t{n} + d].how != -1 && right_tr[std::size_t{n} + d].how != -1) {
            JoinCertificate cert;
            cert.meet = d;
            cert.left = side_from_trace(left_tr, n, d);
            cert.right = side_from_trace(right_tr, n, d);
            return cert;
        }
    return std::nullopt;
}

bool side_valid(const std::vector<LabelledEdge>& edges, NodeId start, Label own, Label other,
                Label maxl, const JoinSide& side, NodeId meet) {
    NodeId cur = start;
    for (const auto& st : side.prefix) {
        if (st.src != cur || st.label >= own || !has_step(edges, st.src, st.dst, st.label))
            return false;
        cur = st.dst;
    }
    if (side.middle) {
        const auto& st = *side.middle;
        if (st.src != cur || st.label != other || !has_step(edges, st.src, st.dst, st.label))
            return false;
        cur = st.dst;
    }
    for (const auto& st : side.suffix) {
        if (st.src != cur || st.label >= maxl || !has_step(edges, st.src, st.dst, st.label))
            return false;
        cur = st.dst;
    }
    return cur == meet;
}

bool certificate_valid_impl(const std::vector<LabelledEdge>& left_peak_edges,
                            const std::vector<LabelledEdge>& right_peak_edges,
                            const std::vector<LabelledEdge>& left_side_edges,
                            const std::vector<LabelledEdge>& right_side_edges, bool comm,
                            const Peak& peak, const JoinCertificate& cert) {
    const Rel want_right = comm ? Rel::snd : Rel::fwd;
    if (peak.left.rel != Rel::fwd || peak.right.rel != want_right) return false;
    if (!has_step(left_peak_edges, peak.apex, peak.left.dst, peak.left.label)) return false;
    if (!has_step(right_peak_edges, peak.apex, peak.right.dst, peak.right.label)) return false;
    const Label alpha = peak.left.label, beta = peak.right.label;
    const Label maxl = std::max(alpha, beta);
    return side_valid(left_side_edges, peak.left.dst, alpha, beta, maxl, cert.left,
                      cert.meet) &&
           side_valid(right_side_edges, peak.right.dst, beta, alpha, maxl, cert.right,
                      cert.meet);
}

}  // namespace

LabelledArs::LabelledArs(NodeId n_nodes, Label label_count, std::vector<LabelledEdge> edges)
    : n_nodes_(n_nodes), label_count_(label_count), edges_(std::move(edges)) {
    if (n_nodes_ == 0) throw std::invalid_argument("a rewrite system needs at least one node");
    if (label_count_ == 0 && !edges_.empty())
        throw std::invalid_argument("steps need at least one label");
    for (const auto& e : edges_) {
        if (e.src >= n_nodes_ || e.dst >= n_nodes_)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.label >= label_count_) throw std::invalid_argument("edge label out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate labelled edge");
}

Ars LabelledArs::project() const {
    std::vector<Edge> plain;
    for (const auto& e : edges_)
        if (plain.empty() || plain.back() != Edge{e.src, e.dst})
            plain.push_back({e.src, e.dst});
    return Ars(n_nodes_, std::move(plain));
}

LabelledCommArs::LabelledCommArs(NodeId n_nodes, Label label_count,
                                 std::vector<LabelledEdge> fwd, std::vector<LabelledEdge> snd)
    : n_nodes_(n_nodes), label_count_(label_count) {
    LabelledArs f(n_nodes, label_count, std::move(fwd));
    LabelledArs s(n_nodes, label_count, std::move(snd));
    fwd_ = f.edges();
    snd_ = s.edges();
}

CommArs LabelledCommArs::project() const {
    LabelledArs f(n_nodes_, label_count_, fwd_);
    LabelledArs s(n_nodes_, label_count_, snd_);
    return CommArs(n_nodes_, f.project().edges(), s.project().edges());
}

bool certificate_valid(const LabelledArs& sys, const Peak& peak, const JoinCertificate& cert) {
    return certificate_valid_impl(sys.edges(), sys.edges(), sys.edges(), sys.edges(), false,
                                  peak, cert);
}

bool certificate_valid(const LabelledCommArs& sys, const Peak& peak,
                       const JoinCertificate& cert) {
    // Left side travels in the second relation, right side in the forward one.
    return certificate_valid_impl(sys.fwd(), sys.snd(), sys.snd(), sys.fwd(), true, peak,
                                  cert);
}

std::optional<JoinCertificate> decreasing_join_exists(const LabelledArs& sys,
                                                      const Peak& peak) {
    StepGraph g = graph_of(sys);
    require_peak_of(g, sys.edges(), sys.edges(), peak);
    auto cert = join_certificate(g, peak);
    if (cert && !certificate_valid(sys, peak, *cert))
        throw std::logic_error("internal error: produced an invalid join certificate");
    return cert;
}

std::optional<JoinCertificate> decreasing_join_exists(const LabelledCommArs& sys,
                                                      const Peak& peak) {
    StepGraph g = graph_of(sys);
    require_peak_of(g, sys.fwd(), sys.snd(), peak);
    auto cert = join_certificate(g, peak);
    if (cert && !certificate_valid(sys, peak, *cert))
        throw std::logic_error("internal error: produced an invalid join certificate");
    return cert;
}

namespace {

/// Enumerates local peaks in (apex, left, right) order and reports the first
/// one without a decreasing join.
DecreasingReport locally_decreasing_impl(const StepGraph& g) {
    std::uint64_t budget = kUnlimited;
    bool wc = false;
    if (!g.comm) {
        for (NodeId a = 0; a < g.n; ++a) {
            const auto& steps = g.out[0][a];
            for (std::size_t i = 0; i < steps.size(); ++i)
                for (std::size_t j = i + 1; j < steps.size(); ++j) {
                    Label la = g.labels[steps[i].var], lb = g.labels[steps[j].var];
                    if (peak_joinable(g, steps[i].dst, la, steps[j].dst, lb, budget, wc) != 1)
                        return {false,
                                Peak{a,
                                     {steps[i].dst, la, Rel::fwd},
                                     {steps[j].dst, lb, Rel::fwd}}};
                }
        }
    } else {
        for (NodeId a = 0; a < g.n; ++a)
            for (const auto& f : g.out[0][a])
                for (const auto& s : g.out[1][a]) {
                    Label la = g.labels[f.var], lb = g.labels[s.var];
                    if (peak_joinable(g, f.dst, la, s.dst, lb, budget, wc) != 1)
                        return {false,
                                Peak{a, {f.dst, la, Rel::fwd}, {s.dst, lb, Rel::snd}}};
                }
    }
    return {true, std::nullopt};
}

}  // namespace

DecreasingReport is_locally_decreasing(const LabelledArs& sys) {
    return locally_decreasing_impl(graph_of(sys));
}

DecreasingReport is_locally_decreasing_comm(const LabelledCommArs& sys) {
    return locally_decreasing_impl(graph_of(sys));
}

namespace {

/// Backtracking labelling search over a fixed variable order. On every
/// assignment extension all peaks whose own steps are fully labelled are
/// (re-)checked: partial labellings are pruned only when such a peak cannot
/// close even with every unassigned side step treated as a wildcard, so
/// pruning never removes a valid completion and the search returns the
/// value-lexicographically first valid labelling in variable order.
/// Wildcard-assisted positive verdicts are provisional and re-proven on
/// deeper extensions until they are exact; exact verdicts are cached and
/// invalidated when a value at or below their check depth changes.
class LabellingSearch {
  public:
    LabellingSearch(StepGraph g, std::uint64_t budget)
        : g_(std::move(g)), budget_(budget) {
        build_peaks();
        order_vars();
        g_.labels.assign(g_.vars.size(), kUnassignedLabel);
    }

    /// Runs the search; true iff a labelling was found (stored in g_.labels).
    bool run() {
        descend(0);
        return found_;
    }

    bool exhausted() const { return !found_ && !aborted_; }
    const StepGraph& graph() const { return g_; }

  private:
    struct PeakVar {
        std::uint32_t left, right;  // var ids; left fwd, right snd in comm mode
    };

    void build_peaks() {
        const auto& vars = g_.vars;
        for (std::uint32_t i = 0; i < vars.size(); ++i)
            for (std::uint32_t j = 0; j < vars.size(); ++j) {
                if (vars[i].src != vars[j].src) continue;
                if (!g_.comm) {
                    if (i < j) peaks_.push_back({i, j});
                } else if (vars[i].rel == Rel::fwd && vars[j].rel == Rel::snd) {
                    peaks_.push_back({i, j});
                }
            }
        provisional_.assign(peaks_.size(), false);
    }

    void order_vars() {
        std::vector<std::uint32_t> incidence(g_.vars.size(), 0);
        for (const auto& p : peaks_) {
            incidence[p.left]++;
            incidence[p.right]++;
        }
        order_.resize(g_.vars.size());
        for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (incidence[a] != incidence[b]) return incidence[a] > incidence[b];
            const auto& va = g_.vars[a];
            const auto& vb = g_.vars[b];
            return std::tuple(va.src, va.dst, va.rel) < std::tuple(vb.src, vb.dst, vb.rel);
        });
        std::vector<std::uint32_t> depth_of(g_.vars.size());
        for (std::uint32_t d = 0; d < order_.size(); ++d) depth_of[order_[d]] = d;
        completed_at_.assign(order_.size(), {});
        last_check_depth_.assign(peaks_.size(), 0);
        for (std::uint32_t p = 0; p < peaks_.size(); ++p) {
            std::uint32_t d = std::max(depth_of[peaks_[p].left], depth_of[peaks_[p].right]);
            completed_at_[d].push_back(p);
            last_check_depth_[p] = d;  // forces the first check on completion
        }
    }

    /// Checks one peak with currently bound labels; multi-label steps induce
    /// one elementary diagram per label pair. Updates provisional_[p].
    bool peak_ok(std::uint32_t p, std::uint32_t depth) {
        last_check_depth_[p] = depth;
        const PeakVar& pv = peaks_[p];
        const auto& vl = g_.vars[pv.left];
        const auto& vr = g_.vars[pv.right];
        Label ll = g_.labels[pv.left], lr = g_.labels[pv.right];
        bool wc = false;
        auto one = [&](Label alpha, Label beta) {
            int r = peak_joinable(g_, vl.dst, alpha, vr.dst, beta, budget_, wc);
            if (r == -1) aborted_ = true;
            return r == 1;
        };
        bool ok = true;
        if (!g_.multi) {
            ok = one(ll, lr);
        } else {
            for (Label a = 0; a < g_.k && ok && !aborted_; ++a) {
                if (!((ll >> a) & 1)) continue;
                for (Label b = 0; b < g_.k && ok && !aborted_; ++b) {
                    if (!((lr >> b) & 1)) continue;
                    ok = one(a, b);
                }
            }
        }
        provisional_[p] = wc;
        return ok && !aborted_;
    }

    void descend(std::uint32_t depth) {
        if (aborted_ || found_) return;
        if (depth == order_.size()) {
            // Every peak was re-checked exactly on the deepest extension that
            // could still affect it, so nothing may remain wildcard-assisted.
            for (std::uint32_t p = 0; p < peaks_.size(); ++p)
                if (provisional_[p])
                    throw std::logic_error("internal error: wildcard in a full labelling");
            found_ = true;
            return;
        }
        const std::size_t active_before = active_.size();
        for (std::uint32_t p : completed_at_[depth]) active_.push_back(p);
        const std::uint32_t var = order_[depth];
        const Label first = g_.multi ? 1 : 0;
        const Label last = g_.multi ? (Label{1} << g_.k) - 1 : g_.k - 1;
        if (g_.k == 0) return;  // no admissible values
        for (Label value = first;; ++value) {
            g_.labels[var] = value;
            bool ok = true;
            for (std::uint32_t p : active_) {
                // A cached verdict stays valid while it is exact and no value
                // at or below its check depth has changed since.
                if (!provisional_[p] && last_check_depth_[p] < depth) continue;
                if (!peak_ok(p, depth)) {
                    ok = false;
                    break;
                }
            }
            if (ok && !aborted_) descend(depth + 1);
            if (aborted_ || found_) return;
            if (value == last) break;
        }
        g_.labels[var] = kUnassignedLabel;
        active_.resize(active_before);
    }

    StepGraph g_;
    std::uint64_t budget_;
    std::vector<PeakVar> peaks_;
    std::vector<std::vector<std::uint32_t>> completed_at_;  // by depth
    std::vector<std::uint32_t> active_;                     // completed so far
    std::vector<std::uint32_t> last_check_depth_;
    std::vector<bool> provisional_;
    std::vector<std::uint32_t> order_;
    bool found_ = false;
    bool aborted_ = false;
};

std::vector<LabelledEdge> labelled_edges_of(const StepGraph& g, Rel rel) {
    std::vector<LabelledEdge> out;
    for (std::uint32_t v = 0; v < g.vars.size(); ++v) {
        if (g.vars[v].rel != rel) continue;
        if (!g.multi) {
            out.push_back({g.vars[v].src, g.vars[v].dst, g.labels[v]});
        } else {
            for (Label l = 0; l < g.k; ++l)
                if ((g.labels[v] >> l) & 1) out.push_back({g.vars[v].src, g.vars[v].dst, l});
        }
    }
    return out;
}

}  // namespace

SearchResult<LabelledArs> dcr_search(const Ars& ars, Label k, std::uint64_t budget,
                                     bool multi_label) {
    if (multi_label && k > 16)
        throw std::invalid_argument("multi-label search supports at most 16 labels");
    StepGraph g;
    g.init(ars.n_nodes(), k, false);
    g.multi = multi_label;
    for (const Edge& e : ars.edges()) g.add_var(e.src, e.dst, Rel::fwd, kUnassignedLabel);
    if (k == 0 && !ars.edges().empty()) return {std::nullopt, true};
    LabellingSearch search(std::move(g), budget);
    if (!search.run()) return {std::nullopt, search.exhausted()};
    return {LabelledArs(ars.n_nodes(), k, labelled_edges_of(search.graph(), Rel::fwd)),
            false};
}

SearchResult<LabelledCommArs> dc_search(const CommArs& comm, Label k, std::uint64_t budget,
                                        bool multi_label) {
    if (multi_label && k > 16)
        throw std::invalid_argument("multi-label search supports at most 16 labels");
    StepGraph g;
    g.init(comm.n_nodes(), k, true);
    g.multi = multi_label;
    for (const Edge& e : comm.fwd()) g.add_var(e.src, e.dst, Rel::fwd, kUnassignedLabel);
    for (const Edge& e : comm.snd()) g.add_var(e.src, e.dst, Rel::snd, kUnassignedLabel);
    if (k == 0 && !(comm.fwd().empty() && comm.snd().empty())) return {std::nullopt, true};
    LabellingSearch search(std::move(g), budget);
    if (!search.run()) return {std::nullopt, search.exhausted()};
    return {LabelledCommArs(comm.n_nodes(), k, labelled_edges_of(search.graph(), Rel::fwd),
                            labelled_edges_of(search.graph(), Rel::snd)),
            false};
}

DecreasingReport verify_simple_01(const LabelledArs& sys) {
    if (sys.label_count() != 2)
        throw std::invalid_argument("the simple-join verifier needs exactly two labels");
    std::vector<Edge> zero_edges;
    for (const auto& e : sys.edges())
        if (e.label == 0) zero_edges.push_back({e.src, e.dst});
    zero_edges.erase(std::unique(zero_edges.begin(), zero_edges.end()), zero_edges.end());
    detail::BitMatrix reach0 = detail::forward_closure(Ars(sys.n_nodes(), zero_edges));

    const auto& es = sys.edges();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            if (es[i].src != es[j].src) continue;
            Peak peak{es[i].src,
                      {es[i].dst, es[i].label, Rel::fwd},
                      {es[j].dst, es[j].label, Rel::fwd}};
            if (es[i].label == 0 && es[j].label == 0) {
                if (es[i].dst != es[j].dst) return {false, peak};
            } else {
                if (!reach0.rows_intersect(es[i].dst, es[j].dst)) return {false, peak};
            }
        }
    return {true, std::nullopt};
}

namespace {

std::vector<LabelledEdge> drop_top(const std::vector<LabelledEdge>& edges, Label top) {
    std::vector<LabelledEdge> out;
    for (const auto& e : edges)
        if (e.label != top) out.push_back(e);
    return out;
}

}  // namespace

LabelledArs strip_max_label(const LabelledArs& sys) {
    if (sys.label_count() == 0) throw std::invalid_argument("no labels left to strip");
    if (!is_locally_decreasing(sys).decreasing)
        throw std::invalid_argument("can only strip a locally decreasing system");
    LabelledArs out(sys.n_nodes(), sys.label_count() - 1,
                    drop_top(sys.edges(), sys.label_count() - 1));
    if (!is_locally_decreasing(out).decreasing)
        throw std::logic_error("internal error: stripped system stopped being decreasing");
    return out;
}

LabelledCommArs strip_max_label(const LabelledCommArs& sys) {
    if (sys.label_count() == 0) throw std::invalid_argument("no labels left to strip");
    if (!is_locally_decreasing_comm(sys).decreasing)
        throw std::invalid_argument("can only strip a locally decreasing system");
    LabelledCommArs out(sys.n_nodes(), sys.label_count() - 1,
                        drop_top(sys.fwd(), sys.label_count() - 1),
                        drop_top(sys.snd(), sys.label_count() - 1));
    if (!is_locally_decreasing_comm(out).decreasing)
        throw std::logic_error("internal error: stripped system stopped being decreasing");
    return out;
}

}  // namespace rewr
