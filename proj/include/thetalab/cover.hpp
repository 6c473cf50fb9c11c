#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "thetalab/combinatorics.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/hypergraph.hpp"

namespace thetalab {

// O(k) lexicographic ranking of k-subsets of [0,n) via a precomputed
// binomial table.
class SubsetRanker {
public:
    SubsetRanker(int n, int k) : n_(n), k_(k), table_((n + 1) * (k + 1), 0) {
        for (int v = 0; v <= n; ++v)
            for (int j = 0; j <= k; ++j)
                table_[static_cast<std::size_t>(v * (k + 1) + j)] =
                    binom(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(j));
    }

    std::uint64_t total() const { return at(n_, k_); }

    std::uint64_t rank(const std::vector<int>& subset) const {
        std::uint64_t r = 0;
        int prev = -1;
        for (int i = 0; i < k_; ++i) {
            const int a = subset[static_cast<std::size_t>(i)];
            r += at(n_ - prev - 1, k_ - i) - at(n_ - a, k_ - i);
            prev = a;
        }
        return r;
    }

    std::vector<int> unrank(std::uint64_t r) const {
        std::vector<int> subset(static_cast<std::size_t>(k_));
        int v = 0;
        for (int i = 0; i < k_; ++i) {
            while (true) {
                const std::uint64_t block = at(n_ - 1 - v, k_ - 1 - i);
                if (r < block) break;
                r -= block;
                ++v;
            }
            subset[static_cast<std::size_t>(i)] = v++;
        }
        return subset;
    }

private:
    std::uint64_t at(int v, int j) const {
        return table_[static_cast<std::size_t>(v * (k_ + 1) + j)];
    }

    int n_;
    int k_;
    std::vector<std::uint64_t> table_;
};

// Tracks which complement edges of G have been covered so far. Uses a rank
// bitmap while binom(n,k) fits in 31 bits and a hash set of ranks beyond
// that; edges of G are excluded from the count at construction.
class CoverageMap {
public:
    explicit CoverageMap(const Hypergraph& g)
        : n_(g.n()), k_(g.k()), ranker_(g.n(), g.k()) {
        const std::uint64_t total = ranker_.total();
        target_ = total - g.num_edges();
        use_bitmap_ = total <= (1ULL << 31);
        if (use_bitmap_) bits_.assign((total + 63) / 64, 0);
        for (const auto& e : g.edges()) mark_rank(ranker_.rank(e.vertices()));
        covered_ = 0;  // edges marked above are excluded, not counted
    }

    // Marks every k-subset of the sorted vertex list; returns how many
    // complement edges became covered for the first time.
    std::uint64_t mark_all_subsets(const std::vector<int>& sorted_set) {
        if (static_cast<int>(sorted_set.size()) < k_) return 0;
        std::uint64_t newly = 0;
        scratch_.resize(static_cast<std::size_t>(k_));
        const int s = static_cast<int>(sorted_set.size());
        std::vector<int>& idx = scratch_;
        for (int i = 0; i < k_; ++i) idx[static_cast<std::size_t>(i)] = i;
        buffer_.resize(static_cast<std::size_t>(k_));
        while (true) {
            for (int i = 0; i < k_; ++i)
                buffer_[static_cast<std::size_t>(i)] =
                    sorted_set[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            if (mark_rank(ranker_.rank(buffer_))) ++newly;
            int i = k_ - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == s - k_ + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k_; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
        covered_ += newly;
        return newly;
    }

    bool complete() const { return covered_ == target_; }
    std::uint64_t uncovered() const { return target_ - covered_; }
    std::uint64_t target() const { return target_; }

    // Lexicographically first uncovered complement edge, if any.
    std::optional<std::vector<int>> first_uncovered() const {
        if (complete()) return std::nullopt;
        if (use_bitmap_) {
            for (std::size_t w = 0; w < bits_.size(); ++w) {
                if (bits_[w] == ~0ULL) continue;
                const std::uint64_t total = ranker_.total();
                for (int b = 0; b < 64; ++b) {
                    const std::uint64_t r = (static_cast<std::uint64_t>(w) << 6) | static_cast<unsigned>(b);
                    if (r >= total) break;
                    if (((bits_[w] >> b) & 1ULL) == 0) return ranker_.unrank(r);
                }
            }
            return std::nullopt;
        }
        const std::uint64_t total = ranker_.total();
        for (std::uint64_t r = 0; r < total; ++r)
            if (!covered_set_.count(r)) return ranker_.unrank(r);
        return std::nullopt;
    }

private:
    // Returns true if the rank was not yet marked.
    bool mark_rank(std::uint64_t r) {
        if (use_bitmap_) {
            std::uint64_t& word = bits_[r >> 6];
            const std::uint64_t bit = 1ULL << (r & 63);
            if (word & bit) return false;
            word |= bit;
            return true;
        }
        return covered_set_.insert(r).second;
    }

    int n_;
    int k_;
    SubsetRanker ranker_;
    std::uint64_t target_ = 0;
    std::uint64_t covered_ = 0;
    bool use_bitmap_ = true;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<std::uint64_t> covered_set_;
    std::vector<int> scratch_;
    std::vector<int> buffer_;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Per-vertex label sets over a ground set [0,t). Valid for G iff k vertices
// share a common label exactly when they form an edge.
struct SetRepresentation {
    int t = 0;
    std::vector<std::vector<int>> labels;  // labels[v], strictly increasing
};

struct CliqueCover {
    std::vector<VertexSet> cliques;
};

// Reproducibility metadata carried by certificates; ignored by validity
// checks.
struct Provenance {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    std::string instance_fingerprint;
};

// A cover of the complement edges of G by independent sets of G; witnesses
// vartheta(G) <= t().
struct CoverCertificate {
    std::vector<VertexSet> independent_sets;
    Provenance provenance;
    // Trial index that produced each set, when emitted by a randomized run.
    std::vector<std::uint64_t> trial_indices;

    std::size_t t() const { return independent_sets.size(); }
};

struct VerifyResult {
    bool ok = true;
    std::string reason;
    std::optional<VertexSet> witness;     // offending k-subset or set
    std::optional<std::size_t> index;     // offending clique/set index

    explicit operator bool() const { return ok; }

    std::string describe() const {
        if (ok) return "valid";
        std::ostringstream out;
        out << reason;
        if (index) out << " [index " << *index << "]";
        if (witness) {
            out << " {";
            for (std::size_t i = 0; i < witness->size(); ++i)
                out << (i ? " " : "") << (*witness)[i];
            out << "}";
        }
        return out.str();
    }
};

inline VerifyResult verify_ok() { return {}; }

inline VerifyResult verify_fail(std::string reason, std::optional<VertexSet> witness = std::nullopt,
                                std::optional<std::size_t> index = std::nullopt) {
    VerifyResult r;
    r.ok = false;
    r.reason = std::move(reason);
    r.witness = std::move(witness);
    r.index = index;
    return r;
}

// ---------------------------------------------------------------------------
// Validity checks. Violations are return values, never exceptions, and the
// reported k-subset is the lexicographically first one so failures are
// deterministic.
// ---------------------------------------------------------------------------

inline VerifyResult verify_clique_cover(const Hypergraph& g, const CliqueCover& cover) {
    for (std::size_t i = 0; i < cover.cliques.size(); ++i) {
        const VertexSet& c = cover.cliques[i];
        if (static_cast<int>(c.size()) < g.k())
            return verify_fail("clique has fewer than k vertices", c, i);
        if (c.max_vertex() >= g.n())
            return verify_fail("clique vertex out of range", c, i);
        VerifyResult bad = verify_ok();
        for_each_k_subset_of(c.vertices(), g.k(), [&](const std::vector<int>& sub) {
            if (bad.ok && !g.contains_edge(VertexSet(sub)))
                bad = verify_fail("clique contains a non-edge", VertexSet(sub), i);
        });
        if (!bad.ok) return bad;
    }
    std::vector<detail::VertexMask> masks;
    masks.reserve(cover.cliques.size());
    for (const auto& c : cover.cliques) masks.emplace_back(g.n(), c.vertices());
    for (const auto& e : g.edges()) {
        const detail::VertexMask edge_mask(g.n(), e.vertices());
        bool covered = false;
        for (const auto& m : masks) {
            if (m.contains_all(edge_mask)) {
                covered = true;
                break;
            }
        }
        if (!covered) return verify_fail("edge not covered by any clique", e);
    }
    return verify_ok();
}

inline VerifyResult verify_representation(const Hypergraph& g, const SetRepresentation& rep) {
    if (static_cast<int>(rep.labels.size()) != g.n())
        throw InputError("verify_representation: representation must cover all n vertices");
    if (rep.t < 0) throw InputError("verify_representation: negative ground set size");
    for (const auto& s : rep.labels)
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] >= rep.t)
                throw InputError("verify_representation: label id out of range [0,t)");
            if (i > 0 && s[i] <= s[i - 1])
                throw InputError("verify_representation: labels must be strictly increasing");
        }
    if (binom(static_cast<std::uint64_t>(g.n()), static_cast<std::uint64_t>(g.k())) > (1ULL << 31))
        throw ResourceLimitError("verify_representation: binom(n,k) exceeds 2^31 subsets");

    const std::size_t words = (static_cast<std::size_t>(std::max(rep.t, 1)) + 63) / 64;
    std::vector<std::uint64_t> label_bits(static_cast<std::size_t>(g.n()) * words, 0);
    for (int v = 0; v < g.n(); ++v)
        for (int s : rep.labels[static_cast<std::size_t>(v)])
            label_bits[static_cast<std::size_t>(v) * words + (static_cast<std::size_t>(s) >> 6)] |=
                1ULL << (s & 63);

    VerifyResult bad = verify_ok();
    std::vector<std::uint64_t> meet(words);
    for_each_k_subset(g.n(), g.k(), [&](const std::vector<int>& sub) {
        if (!bad.ok) return;
        for (std::size_t w = 0; w < words; ++w)
            meet[w] = label_bits[static_cast<std::size_t>(sub[0]) * words + w];
        for (int i = 1; i < g.k(); ++i)
            for (std::size_t w = 0; w < words; ++w)
                meet[w] &= label_bits[static_cast<std::size_t>(sub[static_cast<std::size_t>(i)]) * words + w];
        bool common = false;
        for (std::size_t w = 0; w < words; ++w) common = common || meet[w] != 0;
        const bool edge = g.contains_edge(VertexSet(sub));
        if (common && !edge)
            bad = verify_fail("non-edge whose vertices share a label", VertexSet(sub));
        else if (!common && edge)
            bad = verify_fail("edge whose vertices share no label", VertexSet(sub));
    });
    return bad;
}

inline VerifyResult verify_theta_cover(const Hypergraph& g, const CoverCertificate& cert) {
    for (std::size_t i = 0; i < cert.independent_sets.size(); ++i) {
        const VertexSet& s = cert.independent_sets[i];
        if (s.max_vertex() >= g.n()) return verify_fail("set vertex out of range", s, i);
        const detail::VertexMask mask(g.n(), s.vertices());
        for (const auto& e : g.edges()) {
            if (s.size() < e.size()) continue;
            if (mask.contains_all(detail::VertexMask(g.n(), e.vertices())))
                return verify_fail("set is not independent: contains edge", e, i);
        }
    }
    CoverageMap coverage(g);
    for (const auto& s : cert.independent_sets) coverage.mark_all_subsets(s.vertices());
    if (auto missing = coverage.first_uncovered())
        return verify_fail("complement edge not covered", VertexSet(*missing));
    return verify_ok();
}

// Empty sets are legal but usually indicate wasted trials.
inline std::vector<std::string> lint_certificate(const CoverCertificate& cert) {
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < cert.independent_sets.size(); ++i)
        if (cert.independent_sets[i].empty())
            warnings.push_back("empty independent set at index " + std::to_string(i));
    return warnings;
}

// ---------------------------------------------------------------------------
// The constructive equivalence between representations and clique covers.
// ---------------------------------------------------------------------------

// C(s) = { v : s in S_v }, keeping only the sets with at least k vertices
// (smaller ones cover no edges). At most t cliques.
inline CliqueCover representation_to_cover(const Hypergraph& g, const SetRepresentation& rep) {
    const VerifyResult vr = verify_representation(g, rep);
    if (!vr.ok) throw PreconditionError("representation_to_cover: " + vr.describe());
    std::vector<std::vector<int>> members(static_cast<std::size_t>(rep.t));
    for (int v = 0; v < g.n(); ++v)
        for (int s : rep.labels[static_cast<std::size_t>(v)])
            members[static_cast<std::size_t>(s)].push_back(v);
    CliqueCover cover;
    for (auto& c : members)
        if (static_cast<int>(c.size()) >= g.k()) cover.cliques.emplace_back(std::move(c));
    return cover;
}

// S_v = indices of the cliques containing v; t = number of cliques.
inline SetRepresentation cover_to_representation(const Hypergraph& g, const CliqueCover& cover) {
    const VerifyResult vr = verify_clique_cover(g, cover);
    if (!vr.ok) throw PreconditionError("cover_to_representation: " + vr.describe());
    SetRepresentation rep;
    rep.t = static_cast<int>(cover.cliques.size());
    rep.labels.assign(static_cast<std::size_t>(g.n()), {});
    for (std::size_t i = 0; i < cover.cliques.size(); ++i)
        for (int v : cover.cliques[i]) rep.labels[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
    return rep;
}

// Projects a certificate for a blowup hypergraph down to its 2-graph base:
// index i survives into the projected set exactly when its whole group is
// contained in the lifted set. The projected certificate keeps the input
// length, empty sets included.
inline CoverCertificate project_representation(const Hypergraph& blowup,
                                               const CoverCertificate& cert,
                                               const std::vector<VertexSet>& groups) {
    std::vector<bool> seen(static_cast<std::size_t>(blowup.n()), false);
    for (const auto& grp : groups) {
        for (int v : grp) {
            if (v >= blowup.n() || seen[static_cast<std::size_t>(v)])
                throw InputError("project_representation: groups must partition the vertex set");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }
    for (bool s : seen)
        if (!s) throw InputError("project_representation: groups must partition the vertex set");

    const VerifyResult vr = verify_theta_cover(blowup, cert);
    if (!vr.ok) throw PreconditionError("project_representation: certificate invalid: " + vr.describe());

    CoverCertificate projected;
    projected.provenance = cert.provenance;
    projected.provenance.params["projected_from"] = projected.provenance.instance_fingerprint;
    projected.provenance.instance_fingerprint.clear();
    for (const auto& lifted : cert.independent_sets) {
        const detail::VertexMask mask(blowup.n(), lifted.vertices());
        std::vector<int> base;
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (mask.contains_all(detail::VertexMask(blowup.n(), groups[i].vertices())))
                base.push_back(static_cast<int>(i));
        projected.independent_sets.emplace_back(std::move(base));
    }
    projected.trial_indices = cert.trial_indices;
    return projected;
}

// ---------------------------------------------------------------------------
// Line-oriented text formats.
// Representation: "t n", then one line of label ids per vertex.
// Certificate:    "t", then one line of vertex ids per set.
// Writers emit canonical (sorted) files; parsers reject non-canonical input
// so parse/write round-trips are byte-identical.
// ---------------------------------------------------------------------------

namespace detail {

inline void write_id_line(std::ostream& out, const std::vector<int>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i != 0) out << ' ';
        out << ids[i];
    }
    out << '\n';
}

inline std::vector<int> parse_id_line(const std::string& line, int upper, const char* what) {
    std::istringstream in(line);
    std::vector<int> ids;
    long long v;
    while (in >> v) {
        if (v < 0 || v >= upper)
            throw ParseError(std::string(what) + ": id " + std::to_string(v) + " out of range");
        if (!ids.empty() && static_cast<int>(v) <= ids.back())
            throw ParseError(std::string(what) + ": ids must be strictly increasing");
        ids.push_back(static_cast<int>(v));
    }
    if (!in.eof()) throw ParseError(std::string(what) + ": malformed id line");
    return ids;
}

inline bool next_content_line(std::istream& in, std::string& out,
                              std::map<std::string, std::string>* comments) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            if (comments) {
                std::string body = line.substr(1);
                const auto colon = body.find(':');
                if (colon != std::string::npos) {
                    std::string key = body.substr(0, colon);
                    std::string value = body.substr(colon + 1);
                    const auto strip = [](std::string& s) {
                        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                        while (!s.empty() && s.back() == ' ') s.pop_back();
                    };
                    strip(key);
                    strip(value);
                    (*comments)[key] = value;
                }
            }
            continue;
        }
        out = line;
        return true;
    }
    return false;
}

} // namespace detail

inline void write_representation(std::ostream& out, const SetRepresentation& rep) {
    out << rep.t << ' ' << rep.labels.size() << '\n';
    for (const auto& s : rep.labels) detail::write_id_line(out, s);
}

inline SetRepresentation parse_representation(std::istream& in) {
    std::string header;
    if (!detail::next_content_line(in, header, nullptr))
        throw ParseError("representation: missing header line");
    std::istringstream hs(header);
    long long t = 0, n = 0;
    if (!(hs >> t >> n) || t < 0 || n < 0)
        throw ParseError("representation: header must be 't n'");
    std::string extra;
    if (hs >> extra) throw ParseError("representation: trailing tokens on header line");
    SetRepresentation rep;
    rep.t = static_cast<int>(t);
    rep.labels.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("representation: expected " + std::to_string(n) + " label lines");
        rep.labels.push_back(detail::parse_id_line(line, rep.t, "representation"));
    }
    return rep;
}

inline void write_certificate(std::ostream& out, const CoverCertificate& cert,
                              bool with_provenance = true) {
    if (with_provenance) {
        const Provenance& p = cert.provenance;
        if (!p.algorithm.empty()) out << "# algorithm: " << p.algorithm << '\n';
        if (!p.algorithm.empty()) out << "# seed: " << p.seed << '\n';
        for (const auto& [key, value] : p.params) out << "# " << key << ": " << value << '\n';
        if (!p.instance_fingerprint.empty()) out << "# instance: " << p.instance_fingerprint << '\n';
    }
    out << cert.independent_sets.size() << '\n';
    for (const auto& s : cert.independent_sets) detail::write_id_line(out, s.vertices());
}

inline CoverCertificate parse_certificate(std::istream& in) {
    CoverCertificate cert;
    std::string header;
    if (!detail::next_content_line(in, header, &cert.provenance.params))
        throw ParseError("certificate: missing header line");
    std::istringstream hs(header);
    long long t = 0;
    if (!(hs >> t) || t < 0) throw ParseError("certificate: header must be 't'");
    std::string extra;
    if (hs >> extra) throw ParseError("certificate: trailing tokens on header line");
    cert.independent_sets.reserve(static_cast<std::size_t>(t));
    for (long long i = 0; i < t; ++i) {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("certificate: expected " + std::to_string(t) + " set lines");
        cert.independent_sets.emplace_back(
            detail::parse_id_line(line, std::numeric_limits<int>::max(), "certificate"));
    }
    auto it = cert.provenance.params.find("algorithm");
    if (it != cert.provenance.params.end()) {
        cert.provenance.algorithm = it->second;
        cert.provenance.params.erase(it);
    }
    it = cert.provenance.params.find("seed");
    if (it != cert.provenance.params.end()) {
        cert.provenance.seed = std::stoull(it->second);
        cert.provenance.params.erase(it);
    }
    it = cert.provenance.params.find("instance");
    if (it != cert.provenance.params.end()) {
        cert.provenance.instance_fingerprint = it->second;
        cert.provenance.params.erase(it);
    }
    return cert;
}

} // namespace thetalab
