// Shared implementation utilities: compact successor storage, bit-matrix
// closures, and breadth-first searches over rewrite graphs.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rewr/core.hpp"

namespace rewr::detail {

inline constexpr std::uint32_t kNoDistance = std::numeric_limits<std::uint32_t>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Compressed successor lists; relies on Ars edges being sorted by (src, dst).
struct Csr {
    std::vector<std::uint32_t> start;  // n_nodes + 1 offsets into `out`
    std::vector<NodeId> out;
};

inline Csr build_csr(const Ars& a) {
    Csr csr;
    csr.start.assign(a.n_nodes() + 1, 0);
    csr.out.reserve(a.edges().size());
    for (const Edge& e : a.edges()) csr.start[e.src + 1]++;
    for (NodeId i = 0; i < a.n_nodes(); ++i) csr.start[i + 1] += csr.start[i];
    for (const Edge& e : a.edges()) csr.out.push_back(e.dst);
    return csr;
}

/// Square bit matrix with 64-bit row words; rows are node-indexed sets.
class BitMatrix {
  public:
    explicit BitMatrix(std::size_t n)
        : n_(n), words_((n + 63) / 64), data_(n * words_, 0) {}

    std::size_t n() const { return n_; }

    void set(std::size_t i, std::size_t j) {
        data_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
    }
    bool test(std::size_t i, std::size_t j) const {
        return (data_[i * words_ + j / 64] >> (j % 64)) & 1;
    }

    /// True iff row i of *this and row j of other share a set bit.
    bool rows_intersect(std::size_t i, const BitMatrix& other, std::size_t j) const {
        const std::uint64_t* a = &data_[i * words_];
        const std::uint64_t* b = &other.data_[j * words_];
        for (std::size_t w = 0; w < words_; ++w)
            if (a[w] & b[w]) return true;
        return false;
    }
    bool rows_intersect(std::size_t i, std::size_t j) const {
        return rows_intersect(i, *this, j);
    }

    /// True iff (row i of *this, with bit `extra` added) intersects
    /// (row j of other, with bit `extra2` added).
    bool rows_intersect_with(std::size_t i, std::size_t extra, const BitMatrix& other,
                             std::size_t j, std::size_t extra2) const {
        const std::uint64_t* a = &data_[i * words_];
        const std::uint64_t* b = &other.data_[j * words_];
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t aw = a[w], bw = b[w];
            if (extra / 64 == w) aw |= std::uint64_t{1} << (extra % 64);
            if (extra2 / 64 == w) bw |= std::uint64_t{1} << (extra2 % 64);
            if (aw & bw) return true;
        }
        return false;
    }

  private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> data_;
};

/// Single-step adjacency as a bit matrix.
inline BitMatrix adjacency_bits(const Ars& a) {
    BitMatrix m(a.n_nodes());
    for (const Edge& e : a.edges()) m.set(e.src, e.dst);
    return m;
}

/// Reflexive-transitive closure of ->: row a = all b with a ->* b.
inline BitMatrix forward_closure(const Ars& a) {
    const NodeId n = a.n_nodes();
    Csr csr = build_csr(a);
    BitMatrix m(n);
    std::vector<NodeId> queue;
    std::vector<bool> seen(n);
    for (NodeId s = 0; s < n; ++s) {
        seen.assign(n, false);
        queue.assign(1, s);
        seen[s] = true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId u = queue[head];
            m.set(s, u);
            for (std::uint32_t i = csr.start[u]; i < csr.start[u + 1]; ++i)
                if (!seen[csr.out[i]]) {
                    seen[csr.out[i]] = true;
                    queue.push_back(csr.out[i]);
                }
        }
    }
    return m;
}

/// Directed BFS distances from `src` (kNoDistance where unreachable). When
/// `parent` is non-null it records the first-discovery predecessor (kNoNode
/// for src and unreachable nodes); successors are scanned ascending, so the
/// induced shortest paths are deterministic.
inline std::vector<std::uint32_t> bfs_distances(const Csr& csr, NodeId n, NodeId src,
                                                std::vector<NodeId>* parent = nullptr) {
    std::vector<std::uint32_t> dist(n, kNoDistance);
    if (parent) parent->assign(n, kNoNode);
    std::vector<NodeId> queue{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        for (std::uint32_t i = csr.start[u]; i < csr.start[u + 1]; ++i) {
            NodeId v = csr.out[i];
            if (dist[v] != kNoDistance) continue;
            dist[v] = dist[u] + 1;
            if (parent) (*parent)[v] = u;
            queue.push_back(v);
        }
    }
    return dist;
}

/// Convertibility class ids: comp[a] == comp[b] iff a <->* b. Classes are
/// numbered by their smallest member, in increasing order from 0.
inline std::vector<std::uint32_t> component_ids(const Ars& a) {
    const NodeId n = a.n_nodes();
    std::vector<std::vector<NodeId>> und(n);
    for (const Edge& e : a.edges()) {
        und[e.src].push_back(e.dst);
        und[e.dst].push_back(e.src);
    }
    std::vector<std::uint32_t> comp(n, kNoDistance);
    std::uint32_t next = 0;
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != kNoDistance) continue;
        comp[s] = next;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (NodeId v : und[queue[head]])
                if (comp[v] == kNoDistance) {
                    comp[v] = next;
                    queue.push_back(v);
                }
        ++next;
    }
    return comp;
}

/// True at index a iff a has no outgoing step.
inline std::vector<bool> nf_mask(const Ars& a) {
    std::vector<bool> nf(a.n_nodes(), true);
    for (const Edge& e : a.edges()) nf[e.src] = false;
    return nf;
}

}  // namespace rewr::detail
