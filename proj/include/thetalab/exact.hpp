#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "thetalab/cover.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/hypergraph.hpp"

namespace thetalab {

// Brute-force oracles live behind hard limits: they refuse instances beyond
// the limits instead of silently degrading.
struct SolveLimits {
    int max_vertices = 16;
    std::uint64_t max_candidate_sets = 1'000'000;
    double time_budget_seconds = 30.0;
};

struct CliqueCoverResult {
    std::size_t size = 0;
    CliqueCover cover;
    bool optimal = true;  // false when the time budget expired mid-proof
};

struct ThetaResult {
    std::size_t size = 0;
    bool optimal = true;
};

struct VarthetaResult {
    std::size_t size = 0;
    CoverCertificate certificate;
    bool optimal = true;
};

struct AlphaResult {
    std::size_t alpha = 0;
    bool optimal = true;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline void check_limits(const Hypergraph& g, const SolveLimits& limits, const char* op) {
    if (limits.max_vertices <= 0 || limits.max_candidate_sets == 0 ||
        limits.time_budget_seconds <= 0)
        throw InputError(std::string(op) + ": SolveLimits fields must be positive");
    if (g.n() > limits.max_vertices)
        throw ResourceLimitError(std::string(op) + ": n=" + std::to_string(g.n()) +
                                 " exceeds max_vertices=" + std::to_string(limits.max_vertices));
    if (g.n() > 64)
        throw ResourceLimitError(std::string(op) + ": exact solvers support at most 64 vertices");
}

inline std::vector<int> mask_to_vertices(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        const int v = std::countr_zero(mask);
        out.push_back(v);
        mask &= mask - 1;
    }
    return out;
}

// Generic enumeration of maximal sets under a monotone per-vertex
// compatibility relation (Bron-Kerbosch shape). `keep(c_vec, c_mask, v, u)`
// decides whether candidate u, compatible with C, stays compatible with
// C + v. For 2-graphs an adjacency table enables the classic pivot rule;
// for k >= 3 compatibility is not pairwise, so the plain recursion is used.
inline void enumerate_maximal(int n, int min_size, std::uint64_t cap,
                              const std::vector<std::uint64_t>* pivot_adj,
                              const std::function<bool(const std::vector<int>&, std::uint64_t, int, int)>& keep,
                              std::vector<std::uint64_t>& out) {
    std::vector<int> c_vec;
    std::uint64_t c_mask = 0;

    std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t p, std::uint64_t x) {
        if (p == 0 && x == 0) {
            if (static_cast<int>(c_vec.size()) >= min_size) {
                if (out.size() >= cap)
                    throw ResourceLimitError("candidate enumeration exceeds max_candidate_sets=" +
                                             std::to_string(cap));
                out.push_back(c_mask);
            }
            return;
        }
        std::uint64_t iter = p;
        if (pivot_adj && (p | x)) {
            int pivot = -1;
            int best = -1;
            for (std::uint64_t pool = p | x; pool;) {
                const int u = std::countr_zero(pool);
                pool &= pool - 1;
                const int score = std::popcount(p & (*pivot_adj)[static_cast<std::size_t>(u)]);
                if (score > best) {
                    best = score;
                    pivot = u;
                }
            }
            iter = p & ~(*pivot_adj)[static_cast<std::size_t>(pivot)];
        }
        while (iter) {
            const int v = std::countr_zero(iter);
            const std::uint64_t v_bit = 1ULL << v;
            iter &= ~v_bit;

            std::uint64_t p_next = 0, x_next = 0;
            for (std::uint64_t pool = p & ~v_bit; pool;) {
                const int u = std::countr_zero(pool);
                pool &= pool - 1;
                if (keep(c_vec, c_mask, v, u)) p_next |= 1ULL << u;
            }
            for (std::uint64_t pool = x; pool;) {
                const int u = std::countr_zero(pool);
                pool &= pool - 1;
                if (keep(c_vec, c_mask, v, u)) x_next |= 1ULL << u;
            }
            c_vec.push_back(v);
            c_mask |= v_bit;
            rec(p_next, x_next);
            c_vec.pop_back();
            c_mask &= ~v_bit;

            p &= ~v_bit;
            x |= v_bit;
        }
    };

    rec(n >= 64 ? ~0ULL : ((1ULL << n) - 1), 0);
}

struct EdgeMasks {
    std::vector<std::uint64_t> sorted_masks;  // edge bitmasks, ascending
    std::vector<std::vector<std::uint64_t>> by_vertex;

    explicit EdgeMasks(const Hypergraph& g) : by_vertex(static_cast<std::size_t>(g.n())) {
        sorted_masks.reserve(g.num_edges());
        for (const auto& e : g.edges()) {
            std::uint64_t m = 0;
            for (int v : e) m |= 1ULL << v;
            sorted_masks.push_back(m);
            for (int v : e) by_vertex[static_cast<std::size_t>(v)].push_back(m);
        }
        std::sort(sorted_masks.begin(), sorted_masks.end());
    }

    bool contains(std::uint64_t mask) const {
        return std::binary_search(sorted_masks.begin(), sorted_masks.end(), mask);
    }
};

// All inclusion-maximal cliques (vertex sets of size >= k whose k-subsets
// are all edges).
inline std::vector<std::uint64_t> maximal_cliques(const Hypergraph& g, const SolveLimits& limits) {
    const EdgeMasks em(g);
    const int k = g.k();
    std::vector<std::uint64_t> out;

    std::vector<std::uint64_t> adj;
    const std::vector<std::uint64_t>* pivot = nullptr;
    if (k == 2) {
        adj.assign(static_cast<std::size_t>(g.n()), 0);
        for (const auto& e : g.edges()) {
            adj[static_cast<std::size_t>(e[0])] |= 1ULL << e[1];
            adj[static_cast<std::size_t>(e[1])] |= 1ULL << e[0];
        }
        pivot = &adj;
    }

    // u stays compatible after v joins C iff every new k-subset, i.e. every
    // {u,v} + (k-2)-subset of C, is an edge.
    auto keep = [&](const std::vector<int>& c_vec, std::uint64_t, int v, int u) {
        if (static_cast<int>(c_vec.size()) < k - 2) return true;
        bool ok = true;
        for_each_k_subset_of(c_vec, k - 2, [&](const std::vector<int>& sub) {
            if (!ok) return;
            std::uint64_t m = (1ULL << v) | (1ULL << u);
            for (int w : sub) m |= 1ULL << w;
            if (!em.contains(m)) ok = false;
        });
        return ok;
    };

    enumerate_maximal(g.n(), k, limits.max_candidate_sets, pivot, keep, out);
    std::sort(out.begin(), out.end());
    return out;
}

// All inclusion-maximal independent sets of G.
inline std::vector<std::uint64_t> maximal_independent_sets(const Hypergraph& g,
                                                           const SolveLimits& limits) {
    const EdgeMasks em(g);
    std::vector<std::uint64_t> out;

    std::vector<std::uint64_t> non_adj;
    const std::vector<std::uint64_t>* pivot = nullptr;
    if (g.k() == 2) {
        const std::uint64_t all = g.n() >= 64 ? ~0ULL : ((1ULL << g.n()) - 1);
        non_adj.assign(static_cast<std::size_t>(g.n()), 0);
        for (int v = 0; v < g.n(); ++v) non_adj[static_cast<std::size_t>(v)] = all & ~(1ULL << v);
        for (const auto& e : g.edges()) {
            non_adj[static_cast<std::size_t>(e[0])] &= ~(1ULL << e[1]);
            non_adj[static_cast<std::size_t>(e[1])] &= ~(1ULL << e[0]);
        }
        pivot = &non_adj;
    }

    // u stays compatible iff no edge through both u and v fits inside C+v+u.
    auto keep = [&](const std::vector<int>&, std::uint64_t c_mask, int v, int u) {
        const std::uint64_t closure = c_mask | (1ULL << v) | (1ULL << u);
        for (std::uint64_t e : em.by_vertex[static_cast<std::size_t>(v)])
            if ((e & (1ULL << u)) && (e & ~closure) == 0) return false;
        return true;
    };

    enumerate_maximal(g.n(), 1, limits.max_candidate_sets, pivot, keep, out);
    std::sort(out.begin(), out.end());
    return out;
}

// Exact minimum set cover by branch and bound. Elements are bit positions in
// word-packed masks; `cover_sets[i]` is the element set of candidate i.
struct SetCoverSolver {
    using Bits = std::vector<std::uint64_t>;

    std::size_t element_count;
    const std::vector<Bits>& cover_sets;
    Clock::time_point deadline;

    std::vector<std::vector<std::size_t>> candidates_of;  // element -> covering candidates
    std::vector<std::size_t> best;
    bool timed_out = false;
    std::uint64_t nodes = 0;

    SetCoverSolver(std::size_t elements, const std::vector<Bits>& sets, Clock::time_point dl)
        : element_count(elements), cover_sets(sets), deadline(dl),
          candidates_of(elements) {
        for (std::size_t i = 0; i < cover_sets.size(); ++i)
            for (std::size_t e = 0; e < element_count; ++e)
                if (test(cover_sets[i], e)) candidates_of[e].push_back(i);
        for (std::size_t e = 0; e < element_count; ++e)
            if (candidates_of[e].empty())
                throw std::logic_error("set cover: element with no covering candidate");
    }

    static bool test(const Bits& b, std::size_t e) { return (b[e >> 6] >> (e & 63)) & 1ULL; }

    static std::size_t intersect_count(const Bits& a, const Bits& b) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < a.size(); ++w)
            c += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        return c;
    }

    std::vector<std::size_t> greedy() const {
        Bits uncovered((element_count + 63) / 64, 0);
        for (std::size_t e = 0; e < element_count; ++e) uncovered[e >> 6] |= 1ULL << (e & 63);
        std::size_t remaining = element_count;
        std::vector<std::size_t> picked;
        while (remaining > 0) {
            std::size_t best_i = 0, best_gain = 0;
            for (std::size_t i = 0; i < cover_sets.size(); ++i) {
                const std::size_t gain = intersect_count(cover_sets[i], uncovered);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_i = i;
                }
            }
            picked.push_back(best_i);
            for (std::size_t w = 0; w < uncovered.size(); ++w)
                uncovered[w] &= ~cover_sets[best_i][w];
            remaining -= best_gain;
        }
        return picked;
    }

    void run() {
        best = greedy();
        if (Clock::now() > deadline) {
            timed_out = true;
            return;
        }
        Bits uncovered((element_count + 63) / 64, 0);
        for (std::size_t e = 0; e < element_count; ++e) uncovered[e >> 6] |= 1ULL << (e & 63);
        std::vector<std::size_t> stack;
        dfs(uncovered, element_count, stack);
    }

    void dfs(Bits& uncovered, std::size_t uncovered_count, std::vector<std::size_t>& stack) {
        if (timed_out) return;
        if ((++nodes & 1023) == 0 && Clock::now() > deadline) {
            timed_out = true;
            return;
        }
        if (uncovered_count == 0) {
            if (stack.size() < best.size()) best = stack;
            return;
        }
        // Lower bound: each further set covers at most max_gain elements.
        std::size_t max_gain = 0;
        for (const auto& s : cover_sets) max_gain = std::max(max_gain, intersect_count(s, uncovered));
        const std::size_t lb = (uncovered_count + max_gain - 1) / max_gain;
        if (stack.size() + lb >= best.size()) return;

        // Branch on the uncovered element with the fewest candidates overall;
        // ties go to the lexicographically first element.
        std::size_t pick = element_count;
        std::size_t pick_cands = std::numeric_limits<std::size_t>::max();
        for (std::size_t e = 0; e < element_count; ++e) {
            if (!test(uncovered, e)) continue;
            if (candidates_of[e].size() < pick_cands) {
                pick_cands = candidates_of[e].size();
                pick = e;
            }
        }

        std::vector<std::pair<std::size_t, std::size_t>> order;  // (gain, index), gain desc
        order.reserve(candidates_of[pick].size());
        for (std::size_t i : candidates_of[pick])
            order.emplace_back(intersect_count(cover_sets[i], uncovered), i);
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        for (const auto& [gain, i] : order) {
            Bits next = uncovered;
            for (std::size_t w = 0; w < next.size(); ++w) next[w] &= ~cover_sets[i][w];
            stack.push_back(i);
            dfs(next, uncovered_count - gain, stack);
            stack.pop_back();
            if (timed_out) return;
        }
    }
};

} // namespace detail

// Minimum clique cover via maximal-clique enumeration followed by exact set
// cover over the edges. The returned cover is verified before returning.
inline CliqueCoverResult cc_exact(const Hypergraph& g, const SolveLimits& limits = {}) {
    detail::check_limits(g, limits, "cc_exact");
    if (g.num_edges() == 0) return {0, {}, true};

    const auto deadline = detail::Clock::now() +
                          std::chrono::duration_cast<detail::Clock::duration>(
                              std::chrono::duration<double>(limits.time_budget_seconds));
    const std::vector<std::uint64_t> cliques = detail::maximal_cliques(g, limits);

    std::vector<std::uint64_t> edge_masks;
    edge_masks.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        std::uint64_t m = 0;
        for (int v : e) m |= 1ULL << v;
        edge_masks.push_back(m);
    }

    const std::size_t words = (g.num_edges() + 63) / 64;
    std::vector<detail::SetCoverSolver::Bits> cover_sets(cliques.size(),
                                                         detail::SetCoverSolver::Bits(words, 0));
    for (std::size_t i = 0; i < cliques.size(); ++i)
        for (std::size_t e = 0; e < edge_masks.size(); ++e)
            if ((edge_masks[e] & ~cliques[i]) == 0) cover_sets[i][e >> 6] |= 1ULL << (e & 63);

    detail::SetCoverSolver solver(g.num_edges(), cover_sets, deadline);
    solver.run();

    CliqueCoverResult result;
    result.optimal = !solver.timed_out;
    std::vector<VertexSet> chosen;
    chosen.reserve(solver.best.size());
    for (std::size_t i : solver.best) chosen.emplace_back(detail::mask_to_vertices(cliques[i]));
    std::sort(chosen.begin(), chosen.end());
    result.cover.cliques = std::move(chosen);
    result.size = result.cover.cliques.size();
    if (!verify_clique_cover(g, result.cover).ok)
        throw std::logic_error("cc_exact: produced an invalid cover");
    return result;
}

// Independent oracle for the representation number: minimum number of
// "closed" vertex sets (no non-edge k-subset, at least k vertices) covering
// all edges, found by exhaustive depth-first cover search over every closed
// subset. Deliberately avoids the maximal-clique reduction and the
// branch-and-bound machinery of cc_exact. Feasible for n <= 10.
inline std::size_t theta_direct(const Hypergraph& g) {
    if (g.n() > 10)
        throw ResourceLimitError("theta_direct: oracle limited to n <= 10 (got n=" +
                                 std::to_string(g.n()) + ")");
    if (g.num_edges() == 0) return 0;

    const int n = g.n();
    const int k = g.k();
    const detail::EdgeMasks em(g);
    const std::uint64_t total = 1ULL << n;

    // closed[m]: every k-subset of m is an edge.
    std::vector<char> closed(total, 1);
    std::vector<std::uint64_t> by_popcount_order(total);
    for (std::uint64_t m = 0; m < total; ++m) by_popcount_order[m] = m;
    std::sort(by_popcount_order.begin(), by_popcount_order.end(),
              [](std::uint64_t a, std::uint64_t b) {
                  const int pa = std::popcount(a), pb = std::popcount(b);
                  if (pa != pb) return pa < pb;
                  return a < b;
              });
    for (std::uint64_t m : by_popcount_order) {
        const int pc = std::popcount(m);
        if (pc < k) continue;
        if (pc == k) {
            closed[m] = em.contains(m) ? 1 : 0;
            continue;
        }
        closed[m] = 1;
        for (std::uint64_t rest = m; rest;) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            if (!closed[m & ~(1ULL << v)]) {
                closed[m] = 0;
                break;
            }
        }
    }

    std::vector<std::uint64_t> candidates;
    for (std::uint64_t m = 0; m < total; ++m)
        if (closed[m] && std::popcount(m) >= k) candidates.push_back(m);

    const std::size_t m_edges = g.num_edges();
    std::vector<std::uint64_t> edge_masks = em.sorted_masks;
    std::size_t best = m_edges;  // one closed set per edge always works

    std::function<void(std::size_t, std::vector<char>&, std::size_t)> rec =
        [&](std::size_t used, std::vector<char>& covered, std::size_t covered_count) {
            if (covered_count == m_edges) {
                best = std::min(best, used);
                return;
            }
            if (used + 1 >= best) return;
            std::size_t first = 0;
            while (covered[first]) ++first;
            for (std::uint64_t cand : candidates) {
                if ((edge_masks[first] & ~cand) != 0) continue;
                std::vector<std::size_t> flipped;
                for (std::size_t e = 0; e < m_edges; ++e)
                    if (!covered[e] && (edge_masks[e] & ~cand) == 0) {
                        covered[e] = 1;
                        flipped.push_back(e);
                    }
                rec(used + 1, covered, covered_count + flipped.size());
                for (std::size_t e : flipped) covered[e] = 0;
            }
        };
    std::vector<char> covered(m_edges, 0);
    rec(0, covered, 0);
    return best;
}

// Theta(G) = cc(G). For n <= 6 the clique-cover answer is cross-checked
// against the direct representation search.
inline ThetaResult theta_exact(const Hypergraph& g, const SolveLimits& limits = {}) {
    const CliqueCoverResult cc = cc_exact(g, limits);
    if (g.n() <= 6 && cc.optimal) {
        if (theta_direct(g) != cc.size)
            throw std::logic_error("theta_exact: representation search disagrees with clique cover");
    }
    return {cc.size, cc.optimal};
}

// vartheta(G): minimum number of independent sets of G covering every
// complement edge, via maximal independent sets and exact set cover.
inline VarthetaResult vartheta_exact(const Hypergraph& g, const SolveLimits& limits = {}) {
    detail::check_limits(g, limits, "vartheta_exact");

    std::vector<VertexSet> nonedges;
    {
        ComplementEdgeStream stream(g);
        std::vector<int> e;
        while (stream.next(e)) nonedges.emplace_back(e);
    }

    VarthetaResult result;
    result.certificate.provenance.algorithm = "exact";
    {
        char fp[32];
        std::snprintf(fp, sizeof(fp), "%016llx",
                      static_cast<unsigned long long>(fingerprint(g)));
        result.certificate.provenance.instance_fingerprint = fp;
    }
    if (nonedges.empty()) return result;  // complete hypergraph: empty certificate

    const auto deadline = detail::Clock::now() +
                          std::chrono::duration_cast<detail::Clock::duration>(
                              std::chrono::duration<double>(limits.time_budget_seconds));
    const std::vector<std::uint64_t> mis = detail::maximal_independent_sets(g, limits);

    const std::size_t words = (nonedges.size() + 63) / 64;
    std::vector<detail::SetCoverSolver::Bits> cover_sets(mis.size(),
                                                         detail::SetCoverSolver::Bits(words, 0));
    for (std::size_t i = 0; i < mis.size(); ++i) {
        for (std::size_t e = 0; e < nonedges.size(); ++e) {
            std::uint64_t em = 0;
            for (int v : nonedges[e]) em |= 1ULL << v;
            if ((em & ~mis[i]) == 0) cover_sets[i][e >> 6] |= 1ULL << (e & 63);
        }
    }

    detail::SetCoverSolver solver(nonedges.size(), cover_sets, deadline);
    solver.run();

    result.optimal = !solver.timed_out;
    std::vector<VertexSet> chosen;
    chosen.reserve(solver.best.size());
    for (std::size_t i : solver.best) chosen.emplace_back(detail::mask_to_vertices(mis[i]));
    std::sort(chosen.begin(), chosen.end());
    result.certificate.independent_sets = std::move(chosen);
    result.size = result.certificate.t();
    if (!verify_theta_cover(g, result.certificate).ok)
        throw std::logic_error("vartheta_exact: produced an invalid certificate");
    return result;
}

// Exact independence number by include/exclude DFS with the remaining-vertex
// bound.
inline AlphaResult independence_number(const Hypergraph& g, const SolveLimits& limits = {}) {
    detail::check_limits(g, limits, "independence_number");
    const detail::EdgeMasks em(g);
    const auto deadline = detail::Clock::now() +
                          std::chrono::duration_cast<detail::Clock::duration>(
                              std::chrono::duration<double>(limits.time_budget_seconds));

    AlphaResult result;
    std::size_t best = 0;
    bool timed_out = false;
    std::uint64_t nodes = 0;

    std::function<void(int, std::uint64_t, std::size_t)> rec = [&](int v, std::uint64_t mask,
                                                                   std::size_t count) {
        if (timed_out) return;
        if ((++nodes & 4095) == 0 && detail::Clock::now() > deadline) {
            timed_out = true;
            return;
        }
        if (count + static_cast<std::size_t>(g.n() - v) <= best) return;
        if (v == g.n()) {
            best = std::max(best, count);
            return;
        }
        const std::uint64_t with_v = mask | (1ULL << v);
        bool can_take = true;
        for (std::uint64_t e : em.by_vertex[static_cast<std::size_t>(v)])
            if ((e & ~with_v) == 0) {
                can_take = false;
                break;
            }
        if (can_take) rec(v + 1, with_v, count + 1);
        rec(v + 1, mask, count);
    };
    rec(0, 0, 0);

    result.alpha = best;
    result.optimal = !timed_out;
    return result;
}

} // namespace thetalab
