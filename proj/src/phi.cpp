#include "rewr/phi.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace rewr {

namespace {

// Shared builder: emits the labelled edge lists of the witness labelling; the
// plain generator projects the labels away. Per extension level the edges sit
// in the band 5(level-1)+1 .. 5(level-1)+5, the base system is all-0.
struct PhiBuild {
    NodeId n_nodes = 7;
    std::vector<LabelledEdge> fwd, snd;
    NodeId a1 = 0, a = 3, c = 3, b = 3, b1 = 6;
};

PhiBuild build_phi(unsigned level) {
    if (level > kMaxPhiLevel) throw std::invalid_argument("phi level exceeds the practical bound");
    PhiBuild ph;
    ph.fwd = {{0, 1, 0}, {1, 3, 0}, {2, 3, 0}, {4, 3, 0}, {5, 3, 0}, {6, 5, 0}};
    ph.snd = {{0, 2, 0}, {1, 3, 0}, {2, 3, 0}, {4, 3, 0}, {5, 3, 0}, {6, 4, 0}};
    for (unsigned m = 1; m <= level; ++m) {
        const NodeId base = static_cast<NodeId>(7 + 14 * (m - 1));
        // Fresh nodes of this level: A[1..7] then B[1..7].
        auto A = [base](NodeId i) { return static_cast<NodeId>(base + i - 1); };
        auto B = [base](NodeId i) { return static_cast<NodeId>(base + 7 + i - 1); };
        const NodeId pa = ph.a1, pb = ph.b1;  // previous level's outer entries
        const Label l = static_cast<Label>(5 * (m - 1));
        const std::vector<LabelledEdge> new_fwd = {
            {A(1), A(3), l + 5}, {A(3), A(4), l + 4}, {A(4), A(6), l + 3},
            {A(6), A(7), l + 2}, {A(7), pb, l + 1},   {A(2), A(5), l + 4},
            {A(5), pa, l + 2},   {B(1), B(2), l + 5}, {B(2), B(4), l + 4},
            {B(4), B(5), l + 3}, {B(5), B(7), l + 2}, {B(7), pa, l + 1},
            {B(3), B(6), l + 4}, {B(6), pb, l + 2},
        };
        const std::vector<LabelledEdge> new_snd = {
            {A(1), A(2), l + 5}, {A(2), A(4), l + 4}, {A(4), A(5), l + 3},
            {A(5), A(7), l + 2}, {A(7), pa, l + 1},   {A(3), A(6), l + 4},
            {A(6), pb, l + 2},   {B(1), B(3), l + 5}, {B(3), B(4), l + 4},
            {B(4), B(6), l + 3}, {B(6), B(7), l + 2}, {B(7), pb, l + 1},
            {B(2), B(5), l + 4}, {B(5), pa, l + 2},
        };
        ph.fwd.insert(ph.fwd.end(), new_fwd.begin(), new_fwd.end());
        ph.snd.insert(ph.snd.end(), new_snd.begin(), new_snd.end());
        ph.a = pa;
        ph.b = pb;
        ph.a1 = A(1);
        ph.b1 = B(1);
        ph.n_nodes += 14;
    }
    return ph;
}

std::vector<Edge> project_edges(const std::vector<LabelledEdge>& labelled) {
    std::vector<Edge> plain;
    plain.reserve(labelled.size());
    for (const LabelledEdge& e : labelled) plain.push_back({e.src, e.dst});
    return plain;
}

}  // namespace

PhiSystem phi(unsigned level) {
    PhiBuild ph = build_phi(level);
    return PhiSystem{CommArs(ph.n_nodes, project_edges(ph.fwd), project_edges(ph.snd)),
                     level, ph.a1, ph.a, ph.c, ph.b, ph.b1};
}

std::vector<std::pair<std::string, NodeId>> phi_node_names(unsigned level) {
    if (level > kMaxPhiLevel) throw std::invalid_argument("phi level exceeds the practical bound");
    std::vector<std::pair<std::string, NodeId>> names = {
        {"a1", 0}, {"a2", 1}, {"a3", 2}, {"c", 3}, {"b2", 4}, {"b3", 5}, {"b1", 6}};
    for (unsigned m = 1; m <= level; ++m) {
        const NodeId base = static_cast<NodeId>(7 + 14 * (m - 1));
        for (NodeId i = 1; i <= 7; ++i)
            names.emplace_back("a" + std::to_string(i) + "@" + std::to_string(m),
                               static_cast<NodeId>(base + i - 1));
        for (NodeId i = 1; i <= 7; ++i)
            names.emplace_back("b" + std::to_string(i) + "@" + std::to_string(m),
                               static_cast<NodeId>(base + 7 + i - 1));
    }
    return names;
}

LabelledCommArs phi_witness_labelling(unsigned level) {
    PhiBuild ph = build_phi(level);
    return LabelledCommArs(ph.n_nodes, static_cast<Label>(5 * level + 1), std::move(ph.fwd),
                           std::move(ph.snd));
}

PhiPropertiesReport verify_phi_properties(unsigned level) {
    const PhiSystem p = phi(level);
    const NodeId n = p.comm.n_nodes();
    PhiPropertiesReport report;

    std::vector<int> fwd_out(n, 0), snd_out(n, 0);
    for (const Edge& e : p.comm.fwd()) ++fwd_out[e.src];
    for (const Edge& e : p.comm.snd()) ++snd_out[e.src];
    report.deterministic = true;
    for (NodeId v = 0; v < n; ++v)
        if (fwd_out[v] > 1 || snd_out[v] > 1) report.deterministic = false;

    const detail::BitMatrix fwd_star = detail::forward_closure(p.comm.fwd_ars());
    const detail::BitMatrix snd_star = detail::forward_closure(p.comm.snd_ars());

    report.all_reach_sink = true;
    for (NodeId v = 0; v < n; ++v)
        if (!fwd_star.test(v, p.c) || !snd_star.test(v, p.c)) report.all_reach_sink = false;

    report.join_a = true;
    report.join_b = true;
    for (NodeId x = 0; x < n; ++x) {
        const bool outer_a = snd_star.test(p.a1, x) && fwd_star.test(p.b1, x);
        const bool inner_a = snd_star.test(p.a, x) && fwd_star.test(p.a, x);
        if (outer_a != inner_a) report.join_a = false;
        const bool outer_b = fwd_star.test(p.a1, x) && snd_star.test(p.b1, x);
        const bool inner_b = fwd_star.test(p.b, x) && snd_star.test(p.b, x);
        if (outer_b != inner_b) report.join_b = false;
    }
    return report;
}

}  // namespace rewr
