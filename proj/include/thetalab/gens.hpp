#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "thetalab/errors.hpp"
#include "thetalab/hypergraph.hpp"
#include "thetalab/rng.hpp"

namespace thetalab {

// A generated hypergraph together with its vertex partition and enough
// metadata to regenerate it.
struct PartitionedInstance {
    Hypergraph hypergraph;
    std::vector<VertexSet> parts;
    std::map<std::string, std::string> metadata;
};

// Clique size used inside each part of the balanced-hard construction,
// rounded to the nearest positive integer. Balancedness is verified after
// generation; the check, not the formula, is the contract.
inline int balanced_hard_clique_size(std::int64_t d, int k) {
    const long long p = std::llround(std::pow(d / 2.0, 1.0 / (k - 1)));
    return static_cast<int>(std::max(p, 1LL));
}

// Largest n' <= n satisfying the divisibility constraints of
// gen_balanced_hard (k | n' and p | n'/k).
inline int round_parameters(int n, std::int64_t d, int k) {
    if (k < 2) throw InputError("round_parameters: k must be >= 2");
    if (d < 2) throw InputError("round_parameters: d must be >= 2");
    const int p = balanced_hard_clique_size(d, k);
    const int block = k * p;
    const int rounded = (n / block) * block;
    if (rounded <= 0)
        throw InputError("round_parameters: no valid n <= " + std::to_string(n) +
                         " (need a positive multiple of k*p = " + std::to_string(block) + ")");
    return rounded;
}

namespace detail {

inline std::uint64_t pair_key(int a, int b, int n) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(b);
}

// Sequential random construction of a linear k-partite k-graph with parts of
// size m and maximum degree at most d: each new transversal edge must share
// at most one vertex with every earlier edge and avoid vertices that already
// reached degree d. Works for k >= 2; the public entry point restricts to
// k >= 3, the regime of the size guarantee.
inline PartitionedInstance linear_kpartite(int m, std::int64_t d, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("linear_kpartite: k must be >= 2");
    if (m < 1) throw InputError("linear_kpartite: m must be >= 1");
    if (d < 1 || d > m)
        throw InputError("linear_kpartite: requires 1 <= d <= m");

    const int n = k * m;
    const std::uint64_t s = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(m) /
                            (2ULL * static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k));
    // The proof guarantees at least half of all transversal tuples stay
    // valid at every step, so a small constant number of attempts suffices
    // with overwhelming probability.
    const std::uint64_t attempt_cap =
        std::max<std::uint64_t>(64, 64ULL * 2 * static_cast<std::uint64_t>(k) *
                                        static_cast<std::uint64_t>(k) /
                                        static_cast<std::uint64_t>(d));

    Xoshiro256 rng(seed);
    std::set<std::uint64_t> used_pairs;
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
    std::vector<VertexSet> edges;
    std::vector<int> tuple(static_cast<std::size_t>(k));

    for (std::uint64_t i = 0; i < s; ++i) {
        bool accepted = false;
        for (std::uint64_t attempt = 0; attempt < attempt_cap; ++attempt) {
            for (int part = 0; part < k; ++part)
                tuple[static_cast<std::size_t>(part)] =
                    part * m + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
            bool ok = true;
            for (int v : tuple)
                if (deg[static_cast<std::size_t>(v)] >= d) {
                    ok = false;
                    break;
                }
            if (ok) {
                for (int a = 0; a < k && ok; ++a)
                    for (int b = a + 1; b < k; ++b)
                        if (used_pairs.count(pair_key(tuple[static_cast<std::size_t>(a)],
                                                      tuple[static_cast<std::size_t>(b)], n))) {
                            ok = false;
                            break;
                        }
            }
            if (!ok) continue;
            for (int v : tuple) ++deg[static_cast<std::size_t>(v)];
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    used_pairs.insert(pair_key(tuple[static_cast<std::size_t>(a)],
                                               tuple[static_cast<std::size_t>(b)], n));
            edges.emplace_back(tuple);
            accepted = true;
            break;
        }
        if (!accepted)
            throw GenerationError("linear_kpartite: rejection cap exhausted after " +
                                  std::to_string(edges.size()) +
                                  " edges; parameters outside the viable regime");
    }

    PartitionedInstance inst{Hypergraph(k, n, std::move(edges)), {}, {}};
    for (int part = 0; part < k; ++part) {
        std::vector<int> vs(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) vs[static_cast<std::size_t>(i)] = part * m + i;
        inst.parts.emplace_back(std::move(vs));
    }
    inst.metadata["generator"] = "linear";
    inst.metadata["m"] = std::to_string(m);
    inst.metadata["d"] = std::to_string(d);
    inst.metadata["k"] = std::to_string(k);
    inst.metadata["seed"] = std::to_string(seed);
    inst.metadata["edges"] = std::to_string(s);
    if (m < 2 * k * k)
        inst.metadata["warning"] = "m below heuristic threshold 2k^2; size guarantee may not apply";
    return inst;
}

} // namespace detail

// Random member of the linear k-partite family with s = floor(dm / 2k^2)
// edges.
inline PartitionedInstance gen_linear_kpartite(int m, std::int64_t d, int k, std::uint64_t seed) {
    if (k < 3) throw InputError("gen_linear_kpartite: k must be >= 3");
    return detail::linear_kpartite(m, d, k, seed);
}

// The extremal d-balanced construction: k parts, disjoint complete k-graphs
// on p = round((d/2)^{1/(k-1)}) consecutive vertices inside each part, plus
// a linear transversal family with degree cap floor(d/2). The output is
// verified to be d-balanced.
inline PartitionedInstance gen_balanced_hard(int n, std::int64_t d, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("gen_balanced_hard: k must be >= 2");
    if (d < 2) throw InputError("gen_balanced_hard: d must be >= 2");
    if (n <= 0 || n % k != 0)
        throw InputError("gen_balanced_hard: n must be a positive multiple of k "
                         "(adjust with round_parameters)");
    const int m = n / k;
    const int p = balanced_hard_clique_size(d, k);
    if (m % p != 0)
        throw InputError("gen_balanced_hard: n/k must be divisible by p = " + std::to_string(p) +
                         " (adjust with round_parameters)");

    // Transversal degree cap floor(d/2), clamped to the m ceiling forced by
    // linearity.
    const std::int64_t f_cap = std::clamp<std::int64_t>(d / 2, 1, m);
    PartitionedInstance linear = detail::linear_kpartite(m, f_cap, k, seed);
    std::vector<VertexSet> edges(linear.hypergraph.edges().begin(),
                                 linear.hypergraph.edges().end());

    if (p >= k) {
        std::vector<int> block(static_cast<std::size_t>(p));
        for (int part = 0; part < k; ++part) {
            for (int b = 0; b < m / p; ++b) {
                const int base = part * m + b * p;
                for (int i = 0; i < p; ++i) block[static_cast<std::size_t>(i)] = base + i;
                for_each_k_subset_of(block, k,
                                     [&](const std::vector<int>& sub) { edges.emplace_back(sub); });
            }
        }
    }

    PartitionedInstance inst{Hypergraph(k, n, std::move(edges)), std::move(linear.parts), {}};
    inst.metadata["generator"] = "balanced-hard";
    inst.metadata["n"] = std::to_string(n);
    inst.metadata["d"] = std::to_string(d);
    inst.metadata["k"] = std::to_string(k);
    inst.metadata["p"] = std::to_string(p);
    inst.metadata["seed"] = std::to_string(seed);

    if (auto bad = balanced_violation(inst.hypergraph, d))
        throw GenerationError("gen_balanced_hard: output not d-balanced (Delta_" +
                              std::to_string(bad->first) + " = " + std::to_string(bad->second) +
                              ")");
    return inst;
}

// 2l-uniform blowup of a 2-graph: vertex i becomes a group of l fresh
// vertices, edge {i,j} becomes the union of the two groups. Degrees are
// preserved.
inline PartitionedInstance gen_blowup_even(const Hypergraph& f, int ell) {
    if (f.k() != 2) throw InputError("gen_blowup_even: base hypergraph must be 2-uniform");
    if (ell < 1) throw InputError("gen_blowup_even: ell must be >= 1");

    const int n = f.n() * ell;
    std::vector<VertexSet> groups;
    groups.reserve(static_cast<std::size_t>(f.n()));
    for (int i = 0; i < f.n(); ++i) {
        std::vector<int> grp(static_cast<std::size_t>(ell));
        for (int j = 0; j < ell; ++j) grp[static_cast<std::size_t>(j)] = i * ell + j;
        groups.emplace_back(std::move(grp));
    }

    std::vector<VertexSet> edges;
    edges.reserve(f.num_edges());
    for (const auto& e : f.edges()) {
        std::vector<int> lifted;
        lifted.reserve(static_cast<std::size_t>(2 * ell));
        for (int v : groups[static_cast<std::size_t>(e[0])]) lifted.push_back(v);
        for (int v : groups[static_cast<std::size_t>(e[1])]) lifted.push_back(v);
        edges.emplace_back(std::move(lifted));
    }

    PartitionedInstance inst{Hypergraph(2 * ell, n, std::move(edges)), std::move(groups), {}};
    inst.metadata["generator"] = "blowup";
    inst.metadata["ell"] = std::to_string(ell);
    inst.metadata["base_n"] = std::to_string(f.n());
    return inst;
}

// Random greedy partial (n,k,2)-Steiner system: sample uniform k-sets and
// accept while all pairs are unoccupied; stops after a run of rejections.
inline Hypergraph gen_partial_steiner(int n, int k, std::uint64_t seed) {
    if (k < 3) throw InputError("gen_partial_steiner: k must be >= 3");
    if (n < k) throw InputError("gen_partial_steiner: n must be >= k");

    Xoshiro256 rng(seed);
    std::set<std::uint64_t> used_pairs;
    std::vector<VertexSet> edges;
    const std::uint64_t rejection_budget = 1000 + 50ULL * static_cast<std::uint64_t>(n);
    std::uint64_t rejections = 0;
    std::vector<int> tuple;

    while (rejections < rejection_budget) {
        tuple.clear();
        for (int j = n - k; j < n; ++j) {
            const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
            if (std::find(tuple.begin(), tuple.end(), t) == tuple.end())
                tuple.push_back(t);
            else
                tuple.push_back(j);
        }
        std::sort(tuple.begin(), tuple.end());
        bool ok = true;
        for (std::size_t a = 0; a < tuple.size() && ok; ++a)
            for (std::size_t b = a + 1; b < tuple.size(); ++b)
                if (used_pairs.count(detail::pair_key(tuple[a], tuple[b], n))) {
                    ok = false;
                    break;
                }
        if (!ok) {
            ++rejections;
            continue;
        }
        rejections = 0;
        for (std::size_t a = 0; a < tuple.size(); ++a)
            for (std::size_t b = a + 1; b < tuple.size(); ++b)
                used_pairs.insert(detail::pair_key(tuple[a], tuple[b], n));
        edges.emplace_back(tuple);
    }
    return Hypergraph(k, n, std::move(edges));
}

// Random k-graph with maximum degree at most d: accept sampled k-sets while
// every member vertex has degree below d; stops after a run of rejections.
inline Hypergraph gen_random_bounded(int n, std::int64_t d, int k, std::uint64_t seed) {
    if (d < 1) throw InputError("gen_random_bounded: d must be >= 1");
    if (k < 2) throw InputError("gen_random_bounded: k must be >= 2");
    if (n < k) throw InputError("gen_random_bounded: n must be >= k");

    Xoshiro256 rng(seed);
    std::set<std::vector<int>> edge_set;
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
    const std::uint64_t rejection_budget = 1000 + 50ULL * static_cast<std::uint64_t>(n);
    std::uint64_t rejections = 0;
    std::vector<int> tuple;

    while (rejections < rejection_budget) {
        tuple.clear();
        for (int j = n - k; j < n; ++j) {
            const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
            if (std::find(tuple.begin(), tuple.end(), t) == tuple.end())
                tuple.push_back(t);
            else
                tuple.push_back(j);
        }
        std::sort(tuple.begin(), tuple.end());
        bool ok = true;
        for (int v : tuple)
            if (deg[static_cast<std::size_t>(v)] >= d) {
                ok = false;
                break;
            }
        if (ok && edge_set.count(tuple)) ok = false;
        if (!ok) {
            ++rejections;
            continue;
        }
        rejections = 0;
        for (int v : tuple) ++deg[static_cast<std::size_t>(v)];
        edge_set.insert(tuple);
    }

    std::vector<VertexSet> edges;
    edges.reserve(edge_set.size());
    for (const auto& e : edge_set) edges.emplace_back(e);
    return Hypergraph(k, n, std::move(edges));
}

// Serializes a generated instance with a comment header recording the
// generator id, parameters and seed.
inline void write_instance(std::ostream& out, const Hypergraph& g,
                           const std::map<std::string, std::string>& metadata) {
    for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
    write_hypergraph(out, g);
}

inline void write_instance(std::ostream& out, const PartitionedInstance& inst) {
    write_instance(out, inst.hypergraph, inst.metadata);
}

// Reads an instance file along with its "# key: value" comment header.
inline std::pair<Hypergraph, std::map<std::string, std::string>> read_instance(std::istream& in) {
    std::map<std::string, std::string> metadata;
    std::ostringstream body;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            std::string text = line.substr(1);
            const auto colon = text.find(':');
            if (colon != std::string::npos) {
                auto strip = [](std::string s) {
                    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                    while (!s.empty() && s.back() == ' ') s.pop_back();
                    return s;
                };
                metadata[strip(text.substr(0, colon))] = strip(text.substr(colon + 1));
            }
            continue;
        }
        body << line << '\n';
    }
    std::istringstream parsed(body.str());
    return {parse_hypergraph(parsed), std::move(metadata)};
}

// Audits a generated instance against the contract of the family named in
// its metadata. Returns a failure description, or an empty string when every
// check passes (or when no generator id is recorded).
inline std::string audit_instance(const Hypergraph& g,
                                  const std::map<std::string, std::string>& metadata) {
    const auto it = metadata.find("generator");
    if (it == metadata.end()) return "";
    const std::string& family = it->second;

    const auto get_int = [&](const char* key, std::int64_t fallback) {
        const auto m = metadata.find(key);
        return m == metadata.end() ? fallback : std::stoll(m->second);
    };

    if (family == "balanced-hard") {
        const std::int64_t d = get_int("d", 0);
        if (d < 1) return "missing d parameter";
        if (auto bad = balanced_violation(g, d))
            return "not " + std::to_string(d) + "-balanced: Delta_" + std::to_string(bad->first) +
                   " = " + std::to_string(bad->second);
        return "";
    }
    if (family == "linear" || family == "steiner") {
        if (max_degree(g, 2) > 1) return "a vertex pair lies in more than one edge";
        if (family == "linear") {
            const std::int64_t d = get_int("d", 0);
            if (d >= 1 && max_degree(g, 1) > static_cast<std::uint64_t>(d))
                return "vertex degree exceeds cap " + std::to_string(d);
        }
        return "";
    }
    if (family == "random") {
        const std::int64_t d = get_int("d", 0);
        if (d >= 1 && g.num_edges() > 0 && max_degree(g, 1) > static_cast<std::uint64_t>(d))
            return "vertex degree exceeds cap " + std::to_string(d);
        return "";
    }
    if (family == "blowup") {
        const std::int64_t ell = get_int("ell", 0);
        if (ell >= 1 && g.k() != 2 * ell) return "uniformity does not match 2*ell";
        return "";
    }
    return "";
}

} // namespace thetalab
