#include "robustiso/errors.hpp"
#include "robustiso/graph.hpp"
#include "robustiso/instances.hpp"
#include "robustiso/wl.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

using namespace robustiso;

namespace {

/// Vertex partition as a sorted list of sorted classes.
std::set<std::set<std::size_t>> partition_of(const std::vector<WlColour>& colours) {
    std::map<WlColour, std::set<std::size_t>> classes;
    for (std::size_t i = 0; i < colours.size(); ++i) classes[colours[i]].insert(i);
    std::set<std::set<std::size_t>> out;
    for (auto& [c, members] : classes) out.insert(members);
    return out;
}

std::set<std::set<std::size_t>> partition_of(const std::vector<int>& colours) {
    std::vector<WlColour> c(colours.begin(), colours.end());
    return partition_of(c);
}

Graph star(std::size_t leaves) {
    Graph g(leaves + 1);
    for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
}

}  // namespace

TEST(ColourRefinement, Examples) {
    EXPECT_EQ(colour_refinement(Graph(5)).class_count(), 1u);
    EXPECT_EQ(colour_refinement(testgen::cycle(6)).class_count(), 1u);
    const auto p3 = colour_refinement(testgen::path(3));
    EXPECT_EQ(partition_of(p3.colour_of), (std::set<std::set<std::size_t>>{{0, 2}, {1}}));
    EXPECT_THROW(colour_refinement(testgen::path(3), {3}), InvalidArgument);
}

TEST(ColourRefinement, MatchesOracleWithIndividualisation) {
    testgen::Engine rng(71);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = testgen::pick(rng, 1, 12);
        Graph g = testgen::random_graph(rng, n, testgen::coin(rng, 0.5) ? 0.2 : 0.5);
        if (trial % 3 == 0) g.set_colours(testgen::random_colouring(rng, n, 3));
        std::vector<Vertex> s;
        for (Vertex v = 0; v < n; ++v)
            if (testgen::coin(rng, 0.15)) s.push_back(v);
        const auto mine = colour_refinement(g, s);
        EXPECT_EQ(partition_of(mine.colour_of), partition_of(oracle::colour_classes(g, s))) << "trial " << trial;
        std::size_t total = 0;
        for (auto [c, count] : mine.histogram) total += count;
        EXPECT_EQ(total, n);
    }
}

TEST(ColourRefinement, JointIdsAreCanonical) {
    testgen::Engine rng(72);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 10);
        const Graph g = testgen::random_graph(rng, n, 0.4);
        const Graph h = g.permuted(testgen::random_permutation(rng, n));
        const auto [cg, ch] = colour_refinement_joint(g, h);
        EXPECT_EQ(cg.histogram, ch.histogram);
    }
}

TEST(KWl, Examples) {
    const auto k1 = k_wl_stable(testgen::path(3), 1);
    EXPECT_EQ(partition_of(k1.colour_of), (std::set<std::set<std::size_t>>{{0, 2}, {1}}));
    const auto k2 = k_wl_stable(testgen::complete(3), 2);
    EXPECT_EQ(k2.class_count(), 2u);
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(k2[v * 3 + w] == k2[0], v == w);
    EXPECT_EQ(k_wl_stable(Graph(4), 1).class_count(), 1u);
    EXPECT_THROW(k_wl_stable(Graph(20), 5, 1000), BudgetExceeded);
    EXPECT_THROW(k_wl_stable(Graph(3), 0), InvalidArgument);
}

TEST(KWl, OneDimensionalAgreesWithRefinement) {
    testgen::Engine rng(73);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = testgen::random_graph(rng, testgen::pick(rng, 1, 10), 0.4);
        EXPECT_EQ(partition_of(k_wl_stable(g, 1).colour_of), partition_of(colour_refinement(g).colour_of));
    }
}

TEST(KWl, HistogramSumsToTupleCount) {
    testgen::Engine rng(74);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = testgen::pick(rng, 1, 7), k = testgen::pick(rng, 1, 3);
        const auto c = k_wl_stable(testgen::random_graph(rng, n, 0.5), k);
        std::size_t total = 0;
        for (auto [colour, count] : c.histogram) total += count;
        std::size_t expected = 1;
        for (std::size_t i = 0; i < k; ++i) expected *= n;
        EXPECT_EQ(total, expected);
    }
}

TEST(WlDistinguishes, Examples) {
    const Graph c5 = testgen::cycle(5);
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_FALSE(wl_distinguishes(c5, c5.permuted(Assignment({4, 2, 0, 3, 1})), k));
    EXPECT_FALSE(wl_distinguishes(testgen::cycle(6), testgen::two_triangles(), 1));
    EXPECT_TRUE(wl_distinguishes(testgen::cycle(6), testgen::two_triangles(), 2));
    EXPECT_THROW(wl_distinguishes(Graph(3), Graph(4), 1), InvalidArgument);
}

TEST(WlDistinguishes, IsomorphismInvariance) {
    testgen::Engine rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 8), k = testgen::pick(rng, 1, 3);
        Graph g = testgen::random_graph(rng, n, 0.5);
        if (trial % 2) g.set_colours(testgen::random_colouring(rng, n, 3));
        const Graph h = g.permuted(testgen::random_colour_preserving_permutation(rng, g));
        const Assignment sigma = testgen::random_permutation(rng, n);
        EXPECT_FALSE(wl_distinguishes(g, g.permuted(sigma), k));
        const auto a = k_wl_joint(g, g.permuted(sigma), k);
        EXPECT_EQ(a.first.histogram, a.second.histogram);
        EXPECT_FALSE(wl_distinguishes(g, h, k));
    }
}

TEST(WlDistinguishes, MonotoneInK) {
    testgen::Engine rng(76);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testgen::pick(rng, 3, 7);
        const Graph g = testgen::random_graph(rng, n, 0.5);
        const Graph h = testgen::perturbed(rng, g, 2);
        for (std::size_t k = 1; k <= 2; ++k)
            if (wl_distinguishes(g, h, k)) EXPECT_TRUE(wl_distinguishes(g, h, k + 1));
    }
}

TEST(WlDistinguishes, SoundAgainstIsomorphismOracle) {
    testgen::Engine rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 7);
        const Graph g = testgen::random_coloured_graph(rng, n, 0.5, 2);
        const Graph h = testgen::perturbed(rng, g, testgen::pick(rng, 0, 2));
        const bool iso = oracle::isomorphic(g, h);
        for (std::size_t k = 1; k <= 2; ++k)
            if (iso) EXPECT_FALSE(wl_distinguishes(g, h, k));
        // k >= n identifies graphs
        EXPECT_EQ(wl_distinguishes(g, h, n, 1), !iso);
    }
}

TEST(WlCompare, DigestAndColour) {
    const auto same = wl_compare(testgen::cycle(6), testgen::cycle(6), 2);
    EXPECT_FALSE(same.distinguishes);
    EXPECT_FALSE(same.distinguishing_colour);
    const auto diff = wl_compare(testgen::cycle(6), testgen::two_triangles(), 2);
    EXPECT_TRUE(diff.distinguishes);
    EXPECT_TRUE(diff.distinguishing_colour);
    EXPECT_EQ(diff.histograms_digest, wl_compare(testgen::cycle(6), testgen::two_triangles(), 2).histograms_digest);
    EXPECT_NE(diff.histograms_digest, same.histograms_digest);
}

TEST(FindIsomorphism, AgreesWithOracle) {
    testgen::Engine rng(78);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = testgen::pick(rng, 1, 9);
        Graph g = testgen::random_coloured_graph(rng, n, 0.5, 3);
        const Graph h = trial % 2 ? g.permuted(testgen::random_colour_preserving_permutation(rng, g))
                                  : testgen::perturbed(rng, g, 1);
        const auto iso = find_isomorphism(g, h);
        EXPECT_EQ(iso.has_value(), oracle::isomorphic(g, h));
        if (iso) EXPECT_EQ(g.permuted(*iso), h);
    }
}

TEST(IsHomogenising, Examples) {
    testgen::Engine rng(79);
    const Graph g = testgen::random_graph(rng, 8, 0.5);
    std::vector<Vertex> all(8);
    std::iota(all.begin(), all.end(), Vertex{0});
    EXPECT_TRUE(is_homogenising(g, all, Rational(0)));
    EXPECT_TRUE(is_homogenising(Graph(6), {}, Rational(1, 100)));
    EXPECT_TRUE(is_homogenising(star(5), {}, Rational(1, 10)));
    EXPECT_FALSE(is_homogenising(testgen::cycle(6), {}, Rational(1, 4)));
}

TEST(IsHomogenising, MatchesOracle) {
    testgen::Engine rng(80);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 10);
        const Graph g = testgen::random_coloured_graph(rng, n, 0.5, 4);
        std::vector<Vertex> s;
        for (Vertex v = 0; v < n; ++v)
            if (testgen::coin(rng, 0.2)) s.push_back(v);
        const Rational eps = testgen::frac(static_cast<long>(testgen::pick(rng, 1, 5)), 10);
        EXPECT_EQ(is_homogenising(g, s, eps), oracle::homogenising(g, s, eps));
    }
}

TEST(HomogenisingNet, Examples) {
    EXPECT_TRUE(homogenising_set_net(Graph(5), Rational(1, 2)).vertices.empty());
    const auto k4 = homogenising_set_net(testgen::complete(4), Rational(2, 5));
    EXPECT_EQ(k4.vertices.size(), 3u);
    const auto c6 = homogenising_set_net(testgen::cycle(6), Rational(1, 2));
    EXPECT_TRUE(is_homogenising(testgen::cycle(6), c6.vertices, Rational(1, 2)));
}

TEST(HomogenisingNet, NoIndividualisedVertexInMixedNeighbourhoodOfEqualColours) {
    testgen::Engine rng(81);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testgen::pick(rng, 3, 14);
        const Graph g = testgen::random_graph(rng, n, 0.5);
        const Rational eps = testgen::frac(static_cast<long>(testgen::pick(rng, 1, 6)), 10);
        const auto s = homogenising_set_net(g, eps);
        EXPECT_TRUE(oracle::homogenising(g, s.vertices, eps));
        const auto colours = colour_refinement(g, s.vertices);
        for (Vertex v = 0; v < n; ++v)
            for (Vertex w = 0; w < n; ++w) {
                if (colours[v] != colours[w]) continue;
                const auto m = mixed_neighbourhood(g, v, w);
                for (Vertex x : s.vertices) EXPECT_FALSE(m.test(x));
            }
    }
}

TEST(HomogenisingColoured, Examples) {
    Graph discrete = testgen::cycle(5);
    discrete.set_colours({0, 1, 2, 3, 4});
    EXPECT_TRUE(homogenising_set_coloured(discrete, Rational(1, 10)).vertices.empty());
    const auto cfi = gen_cfi_pair("k4");
    const auto s = homogenising_set_coloured(cfi.g, Rational(1, 2));
    EXPECT_LE(s.vertices.size(), 6u);
    EXPECT_TRUE(is_homogenising(cfi.g, s.vertices, Rational(1, 2)));
}

TEST(HomogenisingColoured, SizeBoundAndGrowth) {
    testgen::Engine rng(82);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 14), cls = testgen::pick(rng, 1, 4);
        const Graph g = testgen::random_coloured_graph(rng, n, 0.5, cls);
        const Rational eps = testgen::frac(static_cast<long>(testgen::pick(rng, 1, 6)), 10);
        const auto s = homogenising_set_coloured(g, eps);
        const std::size_t big = g.max_colour_class_size();
        EXPECT_LE(Rational(static_cast<unsigned long>(s.vertices.size())), Rational(static_cast<unsigned long>(big - 1)) / eps);
        EXPECT_TRUE(oracle::homogenising(g, s.vertices, eps));
        ASSERT_EQ(s.class_counts.size(), s.vertices.size() + 1);
        for (std::size_t i = 1; i < s.class_counts.size(); ++i) EXPECT_GT(s.class_counts[i], s.class_counts[i - 1]);
    }
}

TEST(RobustGi, Examples) {
    const Graph c5 = testgen::cycle(5);
    const auto iso = robust_gi(c5, c5.permuted(Assignment({1, 3, 0, 4, 2})), Rational(1, 2), HomogenisingMethod::net);
    EXPECT_EQ(iso.answer, GiAnswer::isomorphic);
    EXPECT_EQ(iso.k, iso.s.size() + 1);
    const auto far = robust_gi(testgen::cycle(6), testgen::two_triangles(), Rational(1, 2), HomogenisingMethod::net);
    EXPECT_EQ(far.answer, GiAnswer::far);
    EXPECT_GE(far.k, 2u);
    EXPECT_TRUE(far.comparison.distinguishing_colour);
}

TEST(RobustGi, CertificateJson) {
    const auto r = robust_gi(testgen::cycle(6), testgen::two_triangles(), Rational(1, 2), HomogenisingMethod::net);
    const std::string json = certificate_json(r);
    for (const char* key : {"\"S\"", "\"answer\"", "\"eps\"", "\"k\"", "\"strategy\"", "\"histograms_digest\"",
                            "\"distinguishing_colour\""})
        EXPECT_NE(json.find(key), std::string::npos) << key;
    EXPECT_NE(json.find("\"far\""), std::string::npos);
    EXPECT_NE(json.find("\"1/2\""), std::string::npos);
    EXPECT_EQ(json, certificate_json(robust_gi(testgen::cycle(6), testgen::two_triangles(), Rational(1, 2),
                                               HomogenisingMethod::net)));
}

TEST(RobustGi, StrategyNames) {
    EXPECT_EQ(parse_homogenising_method(to_string(HomogenisingMethod::coloured_greedy)),
              HomogenisingMethod::coloured_greedy);
    EXPECT_EQ(parse_homogenising_method("net"), HomogenisingMethod::net);
    EXPECT_THROW(parse_homogenising_method("random"), InvalidArgument);
}

TEST(RobustGi, IsomorphicAnswerImpliesSmallEditDistance) {
    testgen::Engine rng(83);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 6);
        const Graph g = testgen::random_coloured_graph(rng, n, 0.5, 2);
        const Graph h = testgen::perturbed(rng, g, testgen::pick(rng, 0, 3));
        const Rational eps(1, 2);
        const auto r = robust_gi(g, h, eps, trial % 2 ? HomogenisingMethod::net : HomogenisingMethod::coloured_greedy);
        if (r.answer == GiAnswer::isomorphic)
            EXPECT_LE(*oracle::edit_distance(g, h), eps * static_cast<unsigned long>(n * n));
        else
            EXPECT_FALSE(oracle::isomorphic(g, h));
    }
}

TEST(WlBlowup, DistinguishabilityTransfers) {
    testgen::Engine rng(84);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 4);
        const Graph g = testgen::random_coloured_graph(rng, n, 0.5, 2);
        const Graph h = testgen::perturbed(rng, g, 1);
        EXPECT_EQ(wl_distinguishes(g, h, 2), wl_distinguishes(blowup(g, 2), blowup(h, 2), 2));
    }
}
