// Shared fixtures, exhaustive enumerators, and independent brute-force
// oracles used by the test suites. Oracles deliberately use different
// algorithms (matrix closures, explicit path search) than the library.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rewr/core.hpp"

namespace testutil {

using rewr::Ars;
using rewr::Edge;
using rewr::NodeId;

inline Ars e_id() { return Ars(1, {}); }
inline Ars e_ab() { return Ars(2, {{0, 1}}); }
inline Ars e_peak() { return Ars(3, {{0, 1}, {0, 2}}); }
inline Ars e_dia() { return Ars(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }
inline Ars e_cyc2() { return Ars(2, {{0, 1}, {1, 0}}); }

/// Adjacency matrix of a system.
inline std::vector<std::vector<bool>> adjacency(const Ars& a) {
    std::vector<std::vector<bool>> m(a.n_nodes(), std::vector<bool>(a.n_nodes(), false));
    for (const Edge& e : a.edges()) m[e.src][e.dst] = true;
    return m;
}

/// Reflexive-transitive closure by Floyd–Warshall.
inline std::vector<std::vector<bool>> closure_oracle(const Ars& a) {
    auto m = adjacency(a);
    const NodeId n = a.n_nodes();
    for (NodeId i = 0; i < n; ++i) m[i][i] = true;
    for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i)
            if (m[i][k])
                for (NodeId j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
    return m;
}

/// Strict transitive closure (paths of length >= 1).
inline std::vector<std::vector<bool>> plus_closure_oracle(const Ars& a) {
    auto m = adjacency(a);
    const NodeId n = a.n_nodes();
    for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i)
            if (m[i][k])
                for (NodeId j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
    return m;
}

/// Symmetric reflexive-transitive closure (convertibility).
inline std::vector<std::vector<bool>> conv_closure_oracle(const Ars& a) {
    auto m = adjacency(a);
    const NodeId n = a.n_nodes();
    for (NodeId i = 0; i < n; ++i) {
        m[i][i] = true;
        for (NodeId j = 0; j < n; ++j)
            if (m[i][j]) m[j][i] = true;
    }
    for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i)
            if (m[i][k])
                for (NodeId j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
    return m;
}

/// Calls fn with every ARS on exactly n nodes (all 2^(n*n) edge sets).
inline void for_each_ars(NodeId n, const std::function<void(const Ars&)>& fn) {
    const unsigned bits = n * n;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits); ++mask) {
        std::vector<Edge> edges;
        for (unsigned b = 0; b < bits; ++b)
            if (mask >> b & 1) edges.push_back({NodeId(b / n), NodeId(b % n)});
        fn(Ars(n, std::move(edges)));
    }
}

/// Uniformly random ARS on n nodes with edge probability ~1/2.
inline Ars random_ars(NodeId n, std::mt19937& rng) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (rng() & 1) edges.push_back({i, j});
    return Ars(n, std::move(edges));
}

}  // namespace testutil
