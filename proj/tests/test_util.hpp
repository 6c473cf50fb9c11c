#pragma once

#include <vector>

#include "thetalab/hypergraph.hpp"
#include "thetalab/rng.hpp"

namespace testutil {

// Uniform random k-graph: each k-set is an edge independently with
// probability `edge_prob` (as a 1-in-denominator draw for determinism).
inline thetalab::Hypergraph random_hypergraph(int n, int k, double edge_prob,
                                              thetalab::Xoshiro256& rng) {
    std::vector<thetalab::VertexSet> edges;
    thetalab::for_each_k_subset(n, k, [&](const std::vector<int>& sub) {
        if (rng.next_unit() < edge_prob) edges.emplace_back(sub);
    });
    return thetalab::Hypergraph(k, n, std::move(edges));
}

inline thetalab::Hypergraph complete_hypergraph(int n, int k) {
    std::vector<thetalab::VertexSet> edges;
    thetalab::for_each_k_subset(n, k, [&](const std::vector<int>& sub) { edges.emplace_back(sub); });
    return thetalab::Hypergraph(k, n, std::move(edges));
}

inline thetalab::Hypergraph cycle_c5() {
    return thetalab::Hypergraph(2, 5, {thetalab::VertexSet{0, 1}, thetalab::VertexSet{1, 2},
                                       thetalab::VertexSet{2, 3}, thetalab::VertexSet{3, 4},
                                       thetalab::VertexSet{0, 4}});
}

inline thetalab::Hypergraph fano_plane() {
    return thetalab::Hypergraph(3, 7, {thetalab::VertexSet{0, 1, 3}, thetalab::VertexSet{1, 2, 4},
                                       thetalab::VertexSet{2, 3, 5}, thetalab::VertexSet{3, 4, 6},
                                       thetalab::VertexSet{0, 4, 5}, thetalab::VertexSet{1, 5, 6},
                                       thetalab::VertexSet{0, 2, 6}});
}

} // namespace testutil
