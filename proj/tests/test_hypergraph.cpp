#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "test_util.hpp"
#include "thetalab/gens.hpp"
#include "thetalab/hypergraph.hpp"

using namespace thetalab;

TEST_CASE("construction validates invariants") {
    CHECK_THROWS_AS(Hypergraph(1, 3, {}), InputError);
    CHECK_THROWS_AS(Hypergraph(3, 2, {VertexSet{0, 1, 2}}), InputError);
    CHECK_THROWS_AS(Hypergraph(3, 5, {VertexSet{0, 1}}), InputError);
    CHECK_THROWS_AS(Hypergraph(3, 5, {VertexSet{0, 1, 5}}), InputError);
    CHECK_THROWS_AS(Hypergraph(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 2}}), InputError);
    CHECK_THROWS_AS(VertexSet({1, 1}), InputError);
    // Isolated vertices are fine: n is explicit.
    const Hypergraph g(3, 10, {VertexSet{0, 1, 2}});
    CHECK(g.n() == 10);
    CHECK(g.num_edges() == 1);
}

TEST_CASE("degree") {
    const Hypergraph complete = testutil::complete_hypergraph(5, 3);
    CHECK(degree(complete, VertexSet{0, 1}) == 3);

    const Hypergraph single(3, 5, {VertexSet{0, 1, 2}});
    CHECK(degree(single, VertexSet{3}) == 0);
    CHECK(degree(single, VertexSet{0, 1, 2}) == 1);
    CHECK(degree(single, VertexSet{0, 1, 3}) == 0);

    CHECK_THROWS_AS(degree(single, VertexSet{0, 1, 2, 3}), InputError);
    CHECK_THROWS_AS(degree(single, VertexSet{7}), InputError);

    // Independent edge-scan oracle on the Fano plane.
    const Hypergraph fano = testutil::fano_plane();
    std::size_t scan = 0;
    for (const auto& e : fano.edges())
        if (e.contains(0)) ++scan;
    CHECK(scan == 3);
    CHECK(degree(fano, VertexSet{0}) == scan);
}

TEST_CASE("max_degree") {
    const Hypergraph complete = testutil::complete_hypergraph(5, 3);
    CHECK(max_degree(complete, 1) == 6);
    CHECK(max_degree(Hypergraph(3, 5, {}), 1) == 0);
    CHECK(max_degree(Hypergraph(3, 5, {}), 3) == 0);

    const Hypergraph star(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4}});
    CHECK(max_degree(star, 2) == 3);
    CHECK_THROWS_AS(max_degree(star, 0), InputError);
    CHECK_THROWS_AS(max_degree(star, 4), InputError);
}

TEST_CASE("degree profile properties on random instances") {
    Xoshiro256 rng(20240901);
    for (int round = 0; round < 30; ++round) {
        const int n = 4 + static_cast<int>(rng.next_below(5));
        const int k = 2 + static_cast<int>(rng.next_below(2));
        const Hypergraph g = testutil::random_hypergraph(n, k, 0.4, rng);
        const DegreeProfile prof = degree_profile(g);

        // Delta_i non-increasing, Delta_k binary, Delta_i <= binom(n-i, k-i).
        for (int i = 1; i < k; ++i)
            CHECK(prof.delta[static_cast<std::size_t>(i - 1)] >=
                  prof.delta[static_cast<std::size_t>(i)]);
        CHECK(prof.delta[static_cast<std::size_t>(k - 1)] <= 1);
        for (int i = 1; i <= k; ++i)
            CHECK(prof.delta[static_cast<std::size_t>(i - 1)] <=
                  binom(static_cast<std::uint64_t>(n - i), static_cast<std::uint64_t>(k - i)));

        // Vertex degrees sum to k * |edges|.
        std::uint64_t total = 0;
        for (int v = 0; v < n; ++v) total += degree(g, VertexSet{v});
        CHECK(total == static_cast<std::uint64_t>(k) * g.num_edges());

        // Counting identity: (k-1) deg(v) equals the sum of deg(S) over
        // (k-1)-sets S containing v.
        for (int v = 0; v < n; ++v) {
            std::uint64_t lhs = static_cast<std::uint64_t>(k - 1) * degree(g, VertexSet{v});
            std::uint64_t rhs = 0;
            for_each_k_subset(n, k - 1, [&](const std::vector<int>& sub) {
                if (std::find(sub.begin(), sub.end(), v) != sub.end())
                    rhs += degree(g, VertexSet(sub));
            });
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("d-balancedness") {
    CHECK(is_d_balanced(Hypergraph(3, 3, {VertexSet{0, 1, 2}}), 1));

    const Hypergraph star(3, 7,
                          {VertexSet{0, 1, 2}, VertexSet{0, 1, 3}, VertexSet{0, 1, 4},
                           VertexSet{0, 1, 5}, VertexSet{0, 1, 6}});
    CHECK_FALSE(is_d_balanced(star, 5));  // Delta_2 = 5 > 5^{1/2}
    const auto violation = balanced_violation(star, 5);
    REQUIRE(violation.has_value());
    CHECK(violation->first == 2);
    CHECK(violation->second == 5);
    CHECK(is_d_balanced(star, 25));

    CHECK_THROWS_AS(is_d_balanced(star, 0), InputError);

    // Generated balanced-hard instances pass, cross-checked against the
    // exhaustive profile computed over all i-subsets.
    const PartitionedInstance inst = gen_balanced_hard(60, 8, 3, 7);
    CHECK(is_d_balanced(inst.hypergraph, 8));
    const Hypergraph& g = inst.hypergraph;
    for (int i = 1; i <= g.k(); ++i) {
        std::uint64_t delta_i = 0;
        for_each_k_subset(g.n(), i, [&](const std::vector<int>& sub) {
            delta_i = std::max(delta_i, degree(g, VertexSet(sub)));
        });
        CHECK(delta_i == max_degree(g, i));
        CHECK(pow_leq(delta_i, static_cast<unsigned>(g.k() - 1), 8,
                      static_cast<unsigned>(g.k() - i)));
    }
}

TEST_CASE("exact power comparison") {
    CHECK(pow_leq(2, 3, 8, 1));
    CHECK(pow_leq(3, 2, 9, 1));
    CHECK_FALSE(pow_leq(3, 2, 8, 1));
    CHECK(pow_leq(0, 5, 1, 0));
    // Beyond 128-bit territory, still exact.
    CHECK(pow_leq(1'000'000'007ULL, 7, 1'000'000'008ULL, 7));
    CHECK_FALSE(pow_leq(1'000'000'008ULL, 7, 1'000'000'007ULL, 7));
}

TEST_CASE("complement enumeration") {
    const Hypergraph g(3, 4, {VertexSet{0, 1, 2}});
    std::vector<std::vector<int>> listed;
    ComplementEdgeStream stream(g);
    std::vector<int> e;
    while (stream.next(e)) listed.push_back(e);
    const std::vector<std::vector<int>> expected = {{0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    CHECK(listed == expected);

    CHECK(complement(testutil::complete_hypergraph(5, 3)).num_edges() == 0);
    CHECK(complement(Hypergraph(3, 5, {})).num_edges() == 10);
}

TEST_CASE("double complement is identity") {
    Xoshiro256 rng(77);
    for (int round = 0; round < 40; ++round) {
        const int n = 3 + static_cast<int>(rng.next_below(6));  // up to 8
        const int k = 2 + static_cast<int>(rng.next_below(2));
        if (k > n) continue;
        const Hypergraph g = testutil::random_hypergraph(n, k, 0.5, rng);
        const Hypergraph gcc = complement(complement(g));
        REQUIRE(gcc.num_edges() == g.num_edges());
        CHECK(std::equal(g.edges().begin(), g.edges().end(), gcc.edges().begin()));
    }
}

TEST_CASE("independence and cliques") {
    const Hypergraph single(3, 5, {VertexSet{0, 1, 2}});
    CHECK(is_independent(single, VertexSet{0, 1}));
    CHECK_FALSE(is_independent(single, VertexSet{0, 1, 2, 3}));

    const Hypergraph c5 = testutil::cycle_c5();
    CHECK(is_independent(c5, VertexSet{1, 3}));
    CHECK_FALSE(is_independent(c5, VertexSet{1, 2}));

    CHECK(is_clique(testutil::complete_hypergraph(5, 3), VertexSet{0, 1, 2, 3, 4}));
    CHECK_FALSE(is_clique(single, VertexSet{0, 1, 2, 3}));
    const Hypergraph k4 = testutil::complete_hypergraph(4, 3);
    CHECK(is_clique(k4, VertexSet{0, 1, 2, 3}));
    CHECK_THROWS_AS(is_clique(k4, VertexSet{0, 1}), InputError);
}

TEST_CASE("is_clique agrees with exhaustive subset enumeration") {
    Xoshiro256 rng(31337);
    for (int round = 0; round < 25; ++round) {
        const int n = 5 + static_cast<int>(rng.next_below(6));
        const Hypergraph g = testutil::random_hypergraph(n, 3, 0.75, rng);
        for (int size = 3; size <= std::min(n, 12); ++size) {
            std::vector<int> candidate;
            for (int i = 0; i < size; ++i) candidate.push_back(i);
            bool exhaustive = true;
            for_each_k_subset_of(candidate, 3, [&](const std::vector<int>& sub) {
                if (degree(g, VertexSet(sub)) != 1) exhaustive = false;
            });
            CHECK(is_clique(g, VertexSet(candidate)) == exhaustive);
        }
    }
}

TEST_CASE("instance text format") {
    const Hypergraph g(3, 5, {VertexSet{0, 1, 2}, VertexSet{0, 1, 4}, VertexSet{2, 3, 4}});
    const std::string text = format_hypergraph(g);
    CHECK(text == "3 5 3\n0 1 2\n0 1 4\n2 3 4\n");

    std::istringstream in(text);
    const Hypergraph parsed = parse_hypergraph(in);
    CHECK(format_hypergraph(parsed) == text);

    // Comment lines are skipped.
    std::istringstream commented("# generator: test\n# seed: 1\n" + text);
    CHECK(format_hypergraph(parse_hypergraph(commented)) == text);

    const auto reject = [](const std::string& body) {
        std::istringstream bad(body);
        CHECK_THROWS_AS(parse_hypergraph(bad), ParseError);
    };
    reject("3 5 1\n0 1\n");            // wrong arity
    reject("3 5 1\n0 1 7\n");          // out of range
    reject("3 5 2\n0 1 2\n0 1 2\n");   // duplicate
    reject("3 5 2\n0 1 4\n0 1 2\n");   // unsorted edge list
    reject("3 5 1\n0 2 1\n");          // unsorted edge
    reject("3 5\n");                   // malformed header
    reject("3 5 2\n0 1 2\n");          // missing edge
}

TEST_CASE("fingerprint is stable and content sensitive") {
    const Hypergraph a(3, 5, {VertexSet{0, 1, 2}});
    const Hypergraph b(3, 5, {VertexSet{0, 1, 3}});
    CHECK(fingerprint(a) == fingerprint(a));
    CHECK(fingerprint(a) != fingerprint(b));
}
