#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "thetalab/combinatorics.hpp"
#include "thetalab/errors.hpp"

namespace thetalab {

// A strictly increasing sequence of vertex ids. Edges, cliques, independent
// sets and random samples are all VertexSets; context decides the validation.
class VertexSet {
public:
    VertexSet() = default;

    // Accepts vertices in any order; rejects duplicates and negative ids.
    explicit VertexSet(std::vector<int> vertices) : v_(std::move(vertices)) {
        std::sort(v_.begin(), v_.end());
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (v_[i] < 0) throw InputError("VertexSet: negative vertex id");
            if (i > 0 && v_[i] == v_[i - 1])
                throw InputError("VertexSet: duplicate vertex id " + std::to_string(v_[i]));
        }
    }

    VertexSet(std::initializer_list<int> vertices) : VertexSet(std::vector<int>(vertices)) {}

    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }
    const std::vector<int>& vertices() const { return v_; }
    int operator[](std::size_t i) const { return v_[i]; }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    int max_vertex() const { return v_.empty() ? -1 : v_.back(); }

    bool contains(int vertex) const {
        return std::binary_search(v_.begin(), v_.end(), vertex);
    }

    bool is_subset_of(const VertexSet& other) const {
        return std::includes(other.v_.begin(), other.v_.end(), v_.begin(), v_.end());
    }

    friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.v_ == b.v_; }
    friend bool operator!=(const VertexSet& a, const VertexSet& b) { return a.v_ != b.v_; }
    friend bool operator<(const VertexSet& a, const VertexSet& b) { return a.v_ < b.v_; }

private:
    std::vector<int> v_;
};

// Maximum i-tuple degrees (Delta_1, ..., Delta_k).
struct DegreeProfile {
    std::vector<std::uint64_t> delta;
};

namespace detail {

// Word-packed vertex mask for subset tests on the hot paths.
class VertexMask {
public:
    VertexMask() = default;
    explicit VertexMask(int n) : words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

    VertexMask(int n, const std::vector<int>& vertices) : VertexMask(n) {
        for (int v : vertices) set(v);
    }

    void set(int v) { words_[static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63); }
    void reset(int v) { words_[static_cast<std::size_t>(v) >> 6] &= ~(1ULL << (v & 63)); }
    bool test(int v) const { return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1ULL; }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    bool contains_all(const VertexMask& sub) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((sub.words_[i] & ~words_[i]) != 0) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> words_;
};

} // namespace detail

// Immutable k-uniform hypergraph on vertices 0..n-1 with a sorted,
// duplicate-free edge list. Isolated vertices are allowed: n is explicit.
class Hypergraph {
public:
    Hypergraph(int k, int n, std::vector<VertexSet> edges)
        : k_(k), n_(n), edges_(std::move(edges)) {
        if (k_ < 2) throw InputError("Hypergraph: uniformity k must be >= 2");
        if (n_ < 0) throw InputError("Hypergraph: negative vertex count");
        if (!edges_.empty() && k_ > n_)
            throw InputError("Hypergraph: k > n with a non-empty edge set");
        for (const auto& e : edges_) {
            if (static_cast<int>(e.size()) != k_)
                throw InputError("Hypergraph: edge of size " + std::to_string(e.size()) +
                                 " in a " + std::to_string(k_) + "-uniform hypergraph");
            if (!e.empty() && e.max_vertex() >= n_)
                throw InputError("Hypergraph: vertex id " + std::to_string(e.max_vertex()) +
                                 " out of range [0," + std::to_string(n_) + ")");
        }
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i] == edges_[i - 1]) throw InputError("Hypergraph: duplicate edge");
    }

    int k() const { return k_; }
    int n() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    std::span<const VertexSet> edges() const { return edges_; }
    const VertexSet& edge(std::size_t i) const { return edges_[i]; }

    bool contains_edge(const VertexSet& s) const {
        return std::binary_search(edges_.begin(), edges_.end(), s);
    }

    std::uint64_t complement_size() const {
        return binom(static_cast<std::uint64_t>(n_), static_cast<std::uint64_t>(k_)) -
               edges_.size();
    }

private:
    int k_;
    int n_;
    std::vector<VertexSet> edges_;
};

// deg_G(S): number of edges containing S.
inline std::uint64_t degree(const Hypergraph& g, const VertexSet& s) {
    if (static_cast<int>(s.size()) > g.k())
        throw InputError("degree: |S| exceeds uniformity k");
    if (!s.empty() && s.max_vertex() >= g.n())
        throw InputError("degree: vertex id out of range");
    if (static_cast<int>(s.size()) == g.k()) return g.contains_edge(s) ? 1 : 0;
    std::uint64_t count = 0;
    for (const auto& e : g.edges())
        if (s.is_subset_of(e)) ++count;
    return count;
}

// Delta_i(G): maximum degree over i-subsets. Only i-subsets occurring inside
// some edge can have positive degree, so the maximum is taken over those
// (and is 0 for an empty hypergraph).
inline std::uint64_t max_degree(const Hypergraph& g, int i) {
    if (i < 1 || i > g.k()) throw InputError("max_degree: i out of range [1,k]");
    std::map<std::vector<int>, std::uint64_t> counts;
    std::uint64_t best = 0;
    for (const auto& e : g.edges()) {
        for_each_k_subset_of(e.vertices(), i, [&](const std::vector<int>& sub) {
            best = std::max(best, ++counts[sub]);
        });
    }
    return best;
}

inline DegreeProfile degree_profile(const Hypergraph& g) {
    DegreeProfile p;
    p.delta.reserve(static_cast<std::size_t>(g.k()));
    for (int i = 1; i <= g.k(); ++i) p.delta.push_back(max_degree(g, i));
    return p;
}

// First i with Delta_i(G) > d^{(k-i)/(k-1)}, if any. The comparison is the
// exact integer test Delta_i^{k-1} <= d^{k-i}.
inline std::optional<std::pair<int, std::uint64_t>> balanced_violation(const Hypergraph& g,
                                                                       std::int64_t d) {
    if (d < 1) throw InputError("d-balancedness is defined for integer d >= 1");
    for (int i = 1; i <= g.k(); ++i) {
        const std::uint64_t delta_i = max_degree(g, i);
        if (!pow_leq(delta_i, static_cast<unsigned>(g.k() - 1),
                     static_cast<std::uint64_t>(d), static_cast<unsigned>(g.k() - i)))
            return std::make_pair(i, delta_i);
    }
    return std::nullopt;
}

inline bool is_d_balanced(const Hypergraph& g, std::int64_t d) {
    return !balanced_violation(g, d).has_value();
}

// true iff no edge of G is contained in S.
inline bool is_independent(const Hypergraph& g, const VertexSet& s) {
    for (const auto& e : g.edges())
        if (e.is_subset_of(s)) return false;
    return true;
}

// true iff every k-subset of C is an edge. Sets smaller than k are not
// cliques here: they cover no edges and are rejected.
inline bool is_clique(const Hypergraph& g, const VertexSet& c) {
    if (static_cast<int>(c.size()) < g.k())
        throw InputError("is_clique: cliques must have at least k vertices");
    bool ok = true;
    for_each_k_subset_of(c.vertices(), g.k(), [&](const std::vector<int>& sub) {
        if (ok && !g.contains_edge(VertexSet(sub))) ok = false;
    });
    return ok;
}

// Lazily enumerates the k-subsets of [0,n) that are not edges of G, in
// lexicographic order.
class ComplementEdgeStream {
public:
    explicit ComplementEdgeStream(const Hypergraph& g)
        : g_(&g), current_(static_cast<std::size_t>(g.k())) {
        if (g.k() > g.n()) {
            done_ = true;
            return;
        }
        for (int i = 0; i < g.k(); ++i) current_[static_cast<std::size_t>(i)] = i;
        if (is_edge()) advance_raw();
    }

    // Fills `out` with the next complement edge; false when exhausted.
    bool next(std::vector<int>& out) {
        if (done_) return false;
        out = current_;
        advance_raw();
        return true;
    }

private:
    bool is_edge() { return g_->contains_edge(VertexSet(current_)); }

    void advance_raw() {
        const int n = g_->n();
        const int k = g_->k();
        do {
            int i = k - 1;
            while (i >= 0 && current_[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) {
                done_ = true;
                return;
            }
            ++current_[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                current_[static_cast<std::size_t>(j)] = current_[static_cast<std::size_t>(j - 1)] + 1;
        } while (is_edge());
    }

    const Hypergraph* g_;
    std::vector<int> current_;
    bool done_ = false;
};

// Materialized complement (same n, same k).
inline Hypergraph complement(const Hypergraph& g) {
    std::vector<VertexSet> edges;
    ComplementEdgeStream stream(g);
    std::vector<int> e;
    while (stream.next(e)) edges.emplace_back(e);
    return Hypergraph(g.k(), g.n(), std::move(edges));
}

// ---------------------------------------------------------------------------
// Text instance format: optional '#' comment lines, a header line "k n m",
// then m edge lines of k increasing ids, sorted lexicographically.
// ---------------------------------------------------------------------------

inline Hypergraph parse_hypergraph(std::istream& in) {
    std::string line;
    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_data_line(header)) throw ParseError("instance: missing header line");
    std::istringstream hs(header);
    long long k = 0, n = 0, m = 0;
    if (!(hs >> k >> n >> m)) throw ParseError("instance: header must be 'k n m'");
    std::string extra;
    if (hs >> extra) throw ParseError("instance: trailing tokens on header line");
    if (k < 2 || n < 0 || m < 0) throw ParseError("instance: invalid header values");

    std::vector<VertexSet> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        std::string edge_line;
        if (!next_data_line(edge_line))
            throw ParseError("instance: expected " + std::to_string(m) + " edges, got " +
                             std::to_string(i));
        std::istringstream es(edge_line);
        std::vector<int> verts;
        long long v;
        while (es >> v) {
            if (v < 0 || v >= n)
                throw ParseError("instance: vertex id " + std::to_string(v) + " out of range");
            verts.push_back(static_cast<int>(v));
        }
        if (static_cast<long long>(verts.size()) != k)
            throw ParseError("instance: edge with " + std::to_string(verts.size()) +
                             " vertices, expected " + std::to_string(k));
        for (std::size_t j = 1; j < verts.size(); ++j)
            if (verts[j] <= verts[j - 1])
                throw ParseError("instance: edge vertices must be strictly increasing");
        edges.emplace_back(std::move(verts));
    }
    std::string tail;
    if (next_data_line(tail) && !tail.empty()) throw ParseError("instance: trailing content");

    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i] == edges[i - 1]) throw ParseError("instance: duplicate edge");
        if (edges[i] < edges[i - 1]) throw ParseError("instance: edges not sorted");
    }
    return Hypergraph(static_cast<int>(k), static_cast<int>(n), std::move(edges));
}

inline void write_hypergraph(std::ostream& out, const Hypergraph& g) {
    out << g.k() << ' ' << g.n() << ' ' << g.num_edges() << '\n';
    for (const auto& e : g.edges()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i != 0) out << ' ';
            out << e[i];
        }
        out << '\n';
    }
}

inline std::string format_hypergraph(const Hypergraph& g) {
    std::ostringstream out;
    write_hypergraph(out, g);
    return out.str();
}

// FNV-1a over the canonical serialization; used to tie certificates to the
// instance they were computed for.
inline std::uint64_t fingerprint(const Hypergraph& g) {
    const std::string text = format_hypergraph(g);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace thetalab
