#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "test_util.hpp"
#include "thetalab/gens.hpp"
#include "thetalab/randcover.hpp"

using namespace thetalab;

TEST_CASE("derived sampling constants") {
    CHECK(sampling_probability_balanced(2, 2) == Catch::Approx(0.125));
    CHECK(general_delta(3) == Catch::Approx(1.0 / 64));
    CHECK(general_delta(4) == Catch::Approx(1.0 / 192));
    CHECK(general_epsilon(3) == Catch::Approx(1.0 / 32));
    for (int k = 2; k <= 8; ++k)
        for (std::int64_t d = 2; d <= 64; d *= 2) {
            const double p = sampling_probability_balanced(k, d);
            CHECK(p > 0.0);
            CHECK(p <= 0.25);
        }
}

TEST_CASE("trial sampler statistics and determinism") {
    const int n = 50;
    const double p = 0.2;
    TrialSampler sampler(n, p, 0, 12345);
    std::vector<int> w;
    double sum = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        REQUIRE(sampler.next_trial(trials, w));
        CHECK(sampler.trial_index() == static_cast<std::uint64_t>(i));
        for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j] > w[j - 1]);
        sum += static_cast<double>(w.size());
    }
    CHECK_FALSE(sampler.next_trial(trials, w));

    // E[|W|] = pn; the empirical mean stays within five standard errors.
    const double mean = sum / trials;
    const double sigma = std::sqrt(n * p * (1 - p) / trials);
    CHECK(std::abs(mean - n * p) <= 5 * sigma);

    // Same seed, same trials, including per-index rematerialization.
    TrialSampler again(n, p, 0, 12345);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(again.next_trial(trials, w));
        CHECK(TrialSampler::materialize(n, p, 0, 12345, again.trial_index()) == w);
    }
}

TEST_CASE("trial sampler skips undersized trials") {
    TrialSampler sampler(40, 0.02, 3, 777);
    std::vector<int> w;
    std::uint64_t last = 0;
    int materialized = 0;
    while (sampler.next_trial(200000, w)) {
        CHECK(w.size() >= 3);
        CHECK(sampler.trial_index() >= last);
        last = sampler.trial_index() + 1;
        ++materialized;
    }
    // P(|W| >= 3) ~ 0.045 at n=40, p=0.02: skipping must leave large gaps.
    CHECK(materialized > 2000);
    CHECK(materialized < 20000);
}

TEST_CASE("build_aux_graph thresholds exactly") {
    const Hypergraph star(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4}});
    const AuxGraph h4 = build_aux_graph(star, 4);
    REQUIRE(h4.graph.num_edges() == 1);
    CHECK(h4.graph.edge(0) == VertexSet{0, 1});
    CHECK(h4.graph.k() == 2);

    // d = 1: every (k-1)-subset of an edge qualifies.
    const AuxGraph h1 = build_aux_graph(star, 1);
    CHECK(h1.graph.num_edges() == 7);  // {01},{02},{03},{04},{12},{13},{14}

    // deg = 2 vs sqrt(5): 4 < 5, excluded; vs sqrt(4): included.
    const Hypergraph pair2(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}});
    CHECK(build_aux_graph(pair2, 5).graph.num_edges() == 0);
    CHECK(build_aux_graph(pair2, 4).graph.num_edges() == 1);

    CHECK_THROWS_AS(build_aux_graph(star, 0), InputError);
    CHECK_THROWS_AS(build_aux_graph(testutil::cycle_c5(), 4), InputError);
}

TEST_CASE("aux graph degree bound") {
    Xoshiro256 rng(2321);
    for (int round = 0; round < 30; ++round) {
        const int n = 10 + static_cast<int>(rng.next_below(8));
        const int k = 3 + static_cast<int>(rng.next_below(2));
        const std::int64_t d = 3 + static_cast<std::int64_t>(rng.next_below(8));
        const Hypergraph g = gen_random_bounded(n, d, k, rng.next_u64());
        const AuxGraph h = build_aux_graph(g, d);
        const std::uint64_t delta_h = h.graph.num_edges() == 0 ? 0 : max_degree(h.graph, 1);
        // Delta(H) <= (k-1) sqrt(d), integer form Delta(H)^2 <= (k-1)^2 d.
        CHECK(delta_h * delta_h <=
              static_cast<std::uint64_t>(k - 1) * static_cast<std::uint64_t>(k - 1) *
                  static_cast<std::uint64_t>(d));
    }
}

TEST_CASE("clean follows operations (i) and (ii)") {
    const Hypergraph star(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4}});
    const AuxGraph h = build_aux_graph(star, 4);  // H = {{0,1}}
    // Operation (i): edge {0,1,2} has exactly one H-pair {0,1}; remove 2.
    CHECK(clean(VertexSet{0, 1, 2}, star, h) == VertexSet{0, 1});

    // Operation (ii): H empty, delete the largest vertex of the first edge.
    const Hypergraph single(3, 3, {VertexSet{0, 1, 2}});
    const AuxGraph hempty = build_aux_graph(single, 4);
    CHECK(hempty.graph.num_edges() == 0);
    CHECK(clean(VertexSet{0, 1, 2}, single, hempty) == VertexSet{0, 1});

    // Already independent: unchanged.
    CHECK(clean(VertexSet{0, 2, 3}, star, h) == VertexSet{0, 2, 3});
    CHECK(clean(VertexSet{}, star, h) == VertexSet{});
}

TEST_CASE("clean always returns an independent set") {
    Xoshiro256 rng(515151);
    for (int round = 0; round < 40; ++round) {
        const int n = 8 + static_cast<int>(rng.next_below(6));
        const std::int64_t d = 2 + static_cast<std::int64_t>(rng.next_below(6));
        const Hypergraph g = gen_random_bounded(n, d, 3, rng.next_u64());
        const AuxGraph h = build_aux_graph(g, d);
        std::vector<int> w;
        for (int v = 0; v < n; ++v)
            if (rng.next_bernoulli(0.6)) w.push_back(v);
        const VertexSet x = clean(VertexSet(w), g, h);
        CHECK(is_independent(g, x));
        CHECK(x.is_subset_of(VertexSet(w)));
    }
}

TEST_CASE("balanced_cover preconditions") {
    const Hypergraph star(3, 7,
                          {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4},
                           VertexSet{0, 1, 5}, VertexSet{0, 1, 6}});
    BalancedConfig cfg;
    cfg.d = 5;
    CHECK_THROWS_WITH(balanced_cover(star, cfg),
                      Catch::Matchers::ContainsSubstring("Delta_2"));
    cfg.d = 1;
    CHECK_THROWS_AS(balanced_cover(star, cfg), InputError);
}

TEST_CASE("balanced_cover on a complete hypergraph is instantly complete") {
    BalancedConfig cfg;
    cfg.d = 16;  // complete K_6^(3): Delta_1 = 10, Delta_2 = 4, so 16-balanced
    const CoverRunResult r = balanced_cover(testutil::complete_hypergraph(6, 3), cfg);
    CHECK(r.complete);
    CHECK(r.trials_run == 0);
    CHECK(r.certificate.t() == 0);
}

TEST_CASE("balanced_cover on the empty hypergraph keeps whole samples") {
    const Hypergraph g(3, 10, {});
    BalancedConfig cfg;
    cfg.d = 2;
    cfg.seed = 5;
    const CoverRunResult r = balanced_cover(g, cfg);
    CHECK(r.complete);
    CHECK(r.trials_run <= balanced_trial_count(10, 2, 3));
    CHECK(verify_theta_cover(g, r.certificate).ok);

    // No edges, so nothing is ever deleted: every stored set is exactly the
    // sample of its trial.
    const double p = sampling_probability_balanced(3, 2);
    REQUIRE(r.certificate.trial_indices.size() == r.certificate.t());
    for (std::size_t i = 0; i < r.certificate.t(); ++i) {
        const auto w = TrialSampler::materialize(10, p, 3, cfg.seed, r.certificate.trial_indices[i]);
        CHECK(VertexSet(w) == r.certificate.independent_sets[i]);
    }
}

TEST_CASE("balanced_cover covers balanced-hard instances within the bound") {
    const PartitionedInstance inst = gen_balanced_hard(48, 8, 3, 1);
    BalancedConfig cfg;
    cfg.d = 8;
    cfg.seed = 1;
    const CoverRunResult r = balanced_cover(inst.hypergraph, cfg);
    CHECK(r.complete);
    CHECK(r.trials_run <= balanced_trial_count(48, 8, 3));
    CHECK(verify_theta_cover(inst.hypergraph, r.certificate).ok);
    // Provenance records the run.
    CHECK(r.certificate.provenance.algorithm == "balanced");
    CHECK(r.certificate.provenance.params.at("d") == "8");
}

TEST_CASE("balanced_cover fixed-t mode runs the theorem trial count") {
    const Hypergraph g(3, 8, {});
    BalancedConfig cfg;
    cfg.d = 2;
    cfg.seed = 9;
    cfg.mode = TrialMode::fixed_t;
    const CoverRunResult r = balanced_cover(g, cfg);
    CHECK(r.trials_run == balanced_trial_count(8, 2, 3));
    CHECK(r.complete);  // the bound overshoots by far on this instance
}

TEST_CASE("adaptive t_cap yields an incomplete result, not an exception") {
    const Hypergraph g(3, 12, {});
    BalancedConfig cfg;
    cfg.d = 2;
    cfg.seed = 3;
    cfg.t_cap = 2;
    const CoverRunResult r = balanced_cover(g, cfg);
    CHECK_FALSE(r.complete);
    CHECK(r.trials_run == 2);
    CHECK(r.uncovered > 0);
}

TEST_CASE("general_cover preconditions") {
    const Hypergraph star(3, 8,
                          {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4},
                           VertexSet{0, 1, 5}, VertexSet{0, 1, 6}, VertexSet{0, 1, 7}});
    GeneralConfig cfg;
    cfg.d = 4;
    CHECK_THROWS_WITH(general_cover(star, cfg), Catch::Matchers::ContainsSubstring("Delta(G) = 6"));
    cfg.d = 2;
    CHECK_THROWS_AS(general_cover(star, cfg), InputError);
    CHECK_THROWS_AS(general_cover(testutil::cycle_c5(), GeneralConfig{}), InputError);
}

TEST_CASE("general_cover covers a perfect matching") {
    std::vector<VertexSet> edges;
    for (int i = 0; i < 4; ++i) edges.push_back(VertexSet{3 * i, 3 * i + 1, 3 * i + 2});
    const Hypergraph g(3, 12, std::move(edges));
    GeneralConfig cfg;
    cfg.d = 3;
    cfg.seed = 11;
    const CoverRunResult r = general_cover(g, cfg);
    CHECK(r.complete);
    CHECK(r.trials_run <= general_trial_count(12, 3, 3));
    CHECK(verify_theta_cover(g, r.certificate).ok);
    for (const auto& s : r.certificate.independent_sets) CHECK(is_independent(g, s));
}

TEST_CASE("general_cover on a complete hypergraph") {
    GeneralConfig cfg;
    cfg.d = 20;
    const CoverRunResult r = general_cover(testutil::complete_hypergraph(6, 3), cfg);
    CHECK(r.complete);
    CHECK(r.certificate.t() == 0);
}

TEST_CASE("randomized runs are byte-deterministic") {
    const PartitionedInstance inst = gen_balanced_hard(36, 8, 3, 21);
    BalancedConfig bcfg;
    bcfg.d = 8;
    bcfg.seed = 77;
    const CoverRunResult b1 = balanced_cover(inst.hypergraph, bcfg);
    const CoverRunResult b2 = balanced_cover(inst.hypergraph, bcfg);
    std::ostringstream s1, s2;
    write_certificate(s1, b1.certificate);
    write_certificate(s2, b2.certificate);
    CHECK(s1.str() == s2.str());
    CHECK(b1.trials_run == b2.trials_run);

    const Hypergraph g = gen_random_bounded(20, 4, 3, 5);
    GeneralConfig gcfg;
    gcfg.d = 4;
    gcfg.seed = 31;
    const CoverRunResult g1 = general_cover(g, gcfg);
    const CoverRunResult g2 = general_cover(g, gcfg);
    std::ostringstream t1, t2;
    write_certificate(t1, g1.certificate);
    write_certificate(t2, g2.certificate);
    CHECK(t1.str() == t2.str());

    BalancedConfig other = bcfg;
    other.seed = 78;
    const CoverRunResult b3 = balanced_cover(inst.hypergraph, other);
    std::ostringstream s3;
    write_certificate(s3, b3.certificate);
    CHECK(s1.str() != s3.str());
}

TEST_CASE("every certificate set is independent, even on incomplete runs") {
    Xoshiro256 rng(6161);
    for (int round = 0; round < 10; ++round) {
        const Hypergraph g = gen_random_bounded(18, 4, 3, rng.next_u64());
        GeneralConfig cfg;
        cfg.d = 4;
        cfg.seed = rng.next_u64();
        cfg.t_cap = 50;  // deliberately far too small
        const CoverRunResult r = general_cover(g, cfg);
        for (const auto& s : r.certificate.independent_sets) CHECK(is_independent(g, s));
        CHECK(r.trials_run <= 50);
    }
}
