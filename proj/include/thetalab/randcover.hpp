#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "thetalab/bounds.hpp"
#include "thetalab/cover.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/hypergraph.hpp"
#include "thetalab/rng.hpp"

namespace thetalab {

enum class TrialMode { adaptive, fixed_t };

// Configuration of the covering algorithm for d-balanced inputs. The derived
// sampling probability is p = 1/(2k d^{1/(k-1)}).
struct BalancedConfig {
    std::int64_t d = 2;
    std::uint64_t seed = 0;
    std::uint64_t t_cap = 0;  // 0: twice the theorem trial count
    TrialMode mode = TrialMode::adaptive;
};

// Configuration of the covering algorithm for bounded-degree inputs.
// Derived constants: delta = 1/((k-1) 2^{k+2}), p = delta/sqrt(d),
// c = 2k/delta^k.
struct GeneralConfig {
    std::int64_t d = 3;
    std::uint64_t seed = 0;
    std::uint64_t t_cap = 0;
    TrialMode mode = TrialMode::adaptive;
};

// The (k-1)-uniform hypergraph of large-degree tuples:
// S in H iff deg_G(S) >= sqrt(d), tested exactly as deg^2 >= d.
struct AuxGraph {
    Hypergraph graph;
    std::int64_t d;
};

struct CoverRunResult {
    CoverCertificate certificate;
    std::uint64_t trials_run = 0;  // achieved t: trials consumed, skips included
    bool complete = false;
    std::uint64_t uncovered = 0;
};

// ---------------------------------------------------------------------------
// Trial sampling.
//
// A trial draws W by keeping each vertex independently with probability p.
// Equivalently |W| ~ Binomial(n, p) followed by a uniform |W|-subset, which
// is how trials are materialized here. Trials with |W| < min_size cannot
// change the cover (every k-subset of I_j needs k vertices), so runs of such
// trials are skipped in one step by sampling the geometric gap between
// materialized trials; the joint distribution of (trial index, W) over the
// materialized trials is exactly that of the per-trial process.
//
// Stream discipline: materialized trial j draws from the substream
// derive_stream_seed(seed, j); gap lengths come from the dedicated substream
// with tag 2^64-1. Identical seeds give identical runs.
// ---------------------------------------------------------------------------
class TrialSampler {
public:
    TrialSampler(int n, double p, int min_size, std::uint64_t seed)
        : n_(n), min_size_(min_size), seed_(seed),
          gap_rng_(derive_stream_seed(seed, 0xFFFFFFFFFFFFFFFFULL)) {
        if (!(p > 0.0) || !(p < 1.0))
            throw InputError("TrialSampler: sampling probability must lie in (0,1)");
        // Binomial pmf by the multiplicative recurrence, in extended precision.
        std::vector<long double> pmf(static_cast<std::size_t>(n) + 1, 0.0L);
        const long double lp = p;
        pmf[0] = std::pow(1.0L - lp, n);
        for (int i = 0; i < n; ++i)
            pmf[static_cast<std::size_t>(i) + 1] = pmf[static_cast<std::size_t>(i)] *
                                                   (static_cast<long double>(n - i) / (i + 1)) *
                                                   (lp / (1.0L - lp));
        long double below = 0.0L;
        for (int i = 0; i < min_size && i <= n; ++i) below += pmf[static_cast<std::size_t>(i)];
        skip_prob_ = std::min(below, 1.0L);
        long double tail = 0.0L;
        for (int i = std::max(min_size, 0); i <= n; ++i) tail += pmf[static_cast<std::size_t>(i)];
        if (tail <= 0.0L)
            throw InputError("TrialSampler: min_size unreachable for these n,p");
        // Conditional CDF over sizes >= min_size.
        size_cdf_.assign(static_cast<std::size_t>(n) + 1, 0.0L);
        long double acc = 0.0L;
        for (int i = 0; i <= n; ++i) {
            if (i >= min_size) acc += pmf[static_cast<std::size_t>(i)] / tail;
            size_cdf_[static_cast<std::size_t>(i)] = acc;
        }
        size_cdf_[static_cast<std::size_t>(n)] = 1.0L;
    }

    // Advances to the next trial with |W| >= min_size, stopping if its index
    // would reach `limit`. On success fills `w` (sorted) and returns true;
    // trial_index() identifies the materialized trial.
    bool next_trial(std::uint64_t limit, std::vector<int>& w) {
        std::uint64_t j = next_index_;
        if (min_size_ > 0 && skip_prob_ > 0.0L) {
            if (skip_prob_ >= 1.0L) return exhaust(limit);
            const long double u = unit_pos(gap_rng_);
            const long double gap = std::floor(std::log(u) / std::log(skip_prob_));
            if (gap >= static_cast<long double>(limit - j)) return exhaust(limit);
            j += static_cast<std::uint64_t>(gap);
        }
        if (j >= limit) return exhaust(limit);

        Xoshiro256 rng(derive_stream_seed(seed_, j));
        const int size = draw_size(rng);
        sample_subset(rng, size, w);
        current_index_ = j;
        next_index_ = j + 1;
        return true;
    }

    std::uint64_t trial_index() const { return current_index_; }

    // Re-derives the sample W of a specific materialized trial.
    static std::vector<int> materialize(int n, double p, int min_size, std::uint64_t seed,
                                        std::uint64_t trial) {
        TrialSampler s(n, p, min_size, seed);
        Xoshiro256 rng(derive_stream_seed(seed, trial));
        const int size = s.draw_size(rng);
        std::vector<int> w;
        s.sample_subset(rng, size, w);
        return w;
    }

private:
    bool exhaust(std::uint64_t limit) {
        next_index_ = limit;
        return false;
    }

    static long double unit_pos(Xoshiro256& rng) {
        return static_cast<long double>((rng.next_u64() >> 11) + 1) * 0x1.0p-53L;
    }

    int draw_size(Xoshiro256& rng) const {
        const long double u = static_cast<long double>(rng.next_u64() >> 11) * 0x1.0p-53L;
        int i = min_size_;
        while (i < n_ && size_cdf_[static_cast<std::size_t>(i)] <= u) ++i;
        return i;
    }

    // Floyd's algorithm: uniform `size`-subset of [0,n).
    void sample_subset(Xoshiro256& rng, int size, std::vector<int>& w) const {
        w.clear();
        for (int j = n_ - size; j < n_; ++j) {
            const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
            if (std::find(w.begin(), w.end(), t) == w.end())
                w.push_back(t);
            else
                w.push_back(j);
        }
        std::sort(w.begin(), w.end());
    }

    int n_;
    int min_size_;
    std::uint64_t seed_;
    Xoshiro256 gap_rng_;
    long double skip_prob_ = 0.0L;
    std::vector<long double> size_cdf_;
    std::uint64_t next_index_ = 0;
    std::uint64_t current_index_ = 0;
};

// ---------------------------------------------------------------------------
// Auxiliary graph and the cleaning strategy.
// ---------------------------------------------------------------------------

inline AuxGraph build_aux_graph(const Hypergraph& g, std::int64_t d) {
    if (d < 1) throw InputError("build_aux_graph: d must be >= 1");
    if (g.k() < 3)
        throw InputError("build_aux_graph: requires k >= 3 (H must be at least 2-uniform)");
    // Bulk (k-1)-subset degree index: one pass over the edges.
    std::map<std::vector<int>, std::uint64_t> deg;
    for (const auto& e : g.edges())
        for_each_k_subset_of(e.vertices(), g.k() - 1,
                             [&](const std::vector<int>& sub) { ++deg[sub]; });
    std::vector<VertexSet> h_edges;
    for (const auto& [tuple, count] : deg)
        if (count * count >= static_cast<std::uint64_t>(d)) h_edges.emplace_back(tuple);
    return AuxGraph{Hypergraph(g.k() - 1, g.n(), std::move(h_edges)), d};
}

namespace detail {

// Static per-edge data for the cleaning loop. h_count and the operation (i)
// removal vertex depend only on G and H, never on the sampled set.
struct CleanContext {
    struct EdgeInfo {
        VertexMask mask;
        const VertexSet* vertices;
        int h_count;
        int op1_vertex;  // the vertex outside the unique H-tuple, if h_count == 1
    };
    std::vector<EdgeInfo> edges;

    CleanContext(const Hypergraph& g, const AuxGraph& h) {
        if (h.graph.k() != g.k() - 1)
            throw InputError("clean: auxiliary graph must be (k-1)-uniform");
        edges.reserve(g.num_edges());
        for (const auto& e : g.edges()) {
            EdgeInfo info{VertexMask(g.n(), e.vertices()), &e, 0, -1};
            std::vector<int> tuple(e.vertices().size() - 1);
            for (std::size_t drop = 0; drop < e.size(); ++drop) {
                std::size_t w = 0;
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (i != drop) tuple[w++] = e[i];
                if (h.graph.contains_edge(VertexSet(tuple))) {
                    ++info.h_count;
                    info.op1_vertex = e[drop];
                }
            }
            if (info.h_count != 1) info.op1_vertex = -1;
            edges.push_back(std::move(info));
        }
    }
};

// The cleaning strategy: while the sample induces an edge, delete the vertex
// outside the unique large-degree tuple when some induced edge has exactly
// one (operation (i), lexicographically first such edge), otherwise delete
// the largest vertex of the lexicographically first induced edge
// (operation (ii) with a deterministic tie-break).
inline std::vector<int> clean_impl(const std::vector<int>& w, const VertexMask& w_mask, int n,
                                   const CleanContext& ctx) {
    std::vector<std::size_t> induced;
    for (std::size_t i = 0; i < ctx.edges.size(); ++i)
        if (w_mask.contains_all(ctx.edges[i].mask)) induced.push_back(i);

    VertexMask deleted(n);
    while (true) {
        std::size_t first_alive = induced.size();
        std::size_t op1 = induced.size();
        for (std::size_t pos = 0; pos < induced.size(); ++pos) {
            const auto& info = ctx.edges[induced[pos]];
            bool alive = true;
            for (int v : *info.vertices)
                if (deleted.test(v)) {
                    alive = false;
                    break;
                }
            if (!alive) continue;
            if (first_alive == induced.size()) first_alive = pos;
            if (info.h_count == 1) {
                op1 = pos;
                break;
            }
        }
        if (first_alive == induced.size()) break;
        const auto& pick = ctx.edges[induced[op1 < induced.size() ? op1 : first_alive]];
        const int victim = op1 < induced.size() ? pick.op1_vertex : pick.vertices->max_vertex();
        deleted.set(victim);
    }

    std::vector<int> x;
    x.reserve(w.size());
    for (int v : w)
        if (!deleted.test(v)) x.push_back(v);
    return x;
}

} // namespace detail

inline VertexSet clean(const VertexSet& w, const Hypergraph& g, const AuxGraph& h) {
    if (!w.empty() && w.max_vertex() >= g.n()) throw InputError("clean: vertex out of range");
    const detail::CleanContext ctx(g, h);
    const detail::VertexMask w_mask(g.n(), w.vertices());
    return VertexSet(detail::clean_impl(w.vertices(), w_mask, g.n(), ctx));
}

// ---------------------------------------------------------------------------
// Trial-loop driver shared by both algorithms.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string hex_fingerprint(const Hypergraph& g) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fingerprint(g)));
    return buf;
}

// Runs trials until the complement is covered (adaptive) or the trial budget
// is exhausted. `make_independent(w, w_mask, out)` turns a sample into an
// independent set. Only sets that cover at least one new complement edge are
// appended to the certificate; the trial count includes every trial.
template <typename MakeIndependent>
CoverRunResult run_cover_trials(const Hypergraph& g, std::uint64_t seed, TrialMode mode,
                                std::uint64_t t_cap, std::uint64_t t_theorem, double p,
                                const std::string& algorithm,
                                std::map<std::string, std::string> params,
                                MakeIndependent&& make_independent) {
    CoverRunResult result;
    result.certificate.provenance.algorithm = algorithm;
    result.certificate.provenance.seed = seed;
    result.certificate.provenance.instance_fingerprint = hex_fingerprint(g);
    params["mode"] = mode == TrialMode::adaptive ? "adaptive" : "fixed-t";
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9g", p);
        params["p"] = buf;
    }
    params["t_theorem"] = std::to_string(t_theorem);
    result.certificate.provenance.params = std::move(params);

    CoverageMap coverage(g);
    if (coverage.complete()) {
        result.complete = true;
        return result;  // nothing to cover: zero trials
    }

    const std::uint64_t limit =
        mode == TrialMode::fixed_t ? t_theorem : (t_cap != 0 ? t_cap : 2 * t_theorem);

    TrialSampler sampler(g.n(), p, g.k(), seed);
    std::vector<int> w;
    std::vector<int> independent;
    VertexMask w_mask(g.n());

    while (sampler.next_trial(limit, w)) {
        w_mask.clear();
        for (int v : w) w_mask.set(v);
        make_independent(w, w_mask, independent);
        const std::uint64_t newly = coverage.mark_all_subsets(independent);
        if (newly > 0) {
            result.certificate.independent_sets.emplace_back(independent);
            result.certificate.trial_indices.push_back(sampler.trial_index());
        }
        if (mode == TrialMode::adaptive && coverage.complete()) {
            result.trials_run = sampler.trial_index() + 1;
            result.complete = true;
            result.uncovered = 0;
            return result;
        }
    }
    result.trials_run = limit;
    result.complete = coverage.complete();
    result.uncovered = coverage.uncovered();
    return result;
}

} // namespace detail

// Covering algorithm for d-balanced hypergraphs: sample W with
// p = 1/(2k d^{1/(k-1)}) and delete every vertex of every edge induced in W.
// Aims at t = ceil(2^{k+2} k^{k+1} d^{k/(k-1)} ln n) trials.
inline CoverRunResult balanced_cover(const Hypergraph& g, const BalancedConfig& cfg) {
    if (cfg.d < 2) throw InputError("balanced_cover: d must be >= 2");
    if (auto bad = balanced_violation(g, cfg.d))
        throw PreconditionError("balanced_cover: input is not " + std::to_string(cfg.d) +
                                "-balanced: Delta_" + std::to_string(bad->first) + " = " +
                                std::to_string(bad->second));

    const double p = sampling_probability_balanced(g.k(), cfg.d);
    const std::uint64_t t_theorem = balanced_trial_count(g.n(), cfg.d, g.k());

    std::vector<detail::VertexMask> edge_masks;
    edge_masks.reserve(g.num_edges());
    for (const auto& e : g.edges()) edge_masks.emplace_back(g.n(), e.vertices());

    auto make_independent = [&](const std::vector<int>& w, const detail::VertexMask& w_mask,
                                std::vector<int>& out) {
        detail::VertexMask doomed(g.n());
        bool any = false;
        for (std::size_t i = 0; i < edge_masks.size(); ++i) {
            if (w_mask.contains_all(edge_masks[i])) {
                for (int v : g.edge(i)) doomed.set(v);
                any = true;
            }
        }
        out.clear();
        if (!any) {
            out = w;
            return;
        }
        for (int v : w)
            if (!doomed.test(v)) out.push_back(v);
    };

    return detail::run_cover_trials(g, cfg.seed, cfg.mode, cfg.t_cap, t_theorem, p, "balanced",
                                    {{"d", std::to_string(cfg.d)}}, make_independent);
}

// Covering algorithm for hypergraphs of maximum degree at most d: sample W
// with p = delta/sqrt(d) and clean it against the auxiliary graph H. Aims at
// t = ceil((2k/delta^k) d^{k/2} ln n) trials.
inline CoverRunResult general_cover(const Hypergraph& g, const GeneralConfig& cfg) {
    if (cfg.d < 3) throw InputError("general_cover: d must be >= 3");
    if (g.k() < 3) throw InputError("general_cover: requires k >= 3");
    const std::uint64_t max_deg = max_degree(g, 1);
    if (max_deg > static_cast<std::uint64_t>(cfg.d))
        throw PreconditionError("general_cover: Delta(G) = " + std::to_string(max_deg) +
                                " exceeds d = " + std::to_string(cfg.d));

    const AuxGraph h = build_aux_graph(g, cfg.d);
    const detail::CleanContext ctx(g, h);
    const double p = sampling_probability_general(g.k(), cfg.d);
    const std::uint64_t t_theorem = general_trial_count(g.n(), cfg.d, g.k());

    auto make_independent = [&](const std::vector<int>& w, const detail::VertexMask& w_mask,
                                std::vector<int>& out) {
        out = detail::clean_impl(w, w_mask, g.n(), ctx);
    };

    return detail::run_cover_trials(g, cfg.seed, cfg.mode, cfg.t_cap, t_theorem, p, "general",
                                    {{"d", std::to_string(cfg.d)}}, make_independent);
}

} // namespace thetalab
