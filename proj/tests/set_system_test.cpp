#include "robustiso/errors.hpp"
#include "robustiso/instances.hpp"
#include "robustiso/qap.hpp"
#include "robustiso/set_system.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace robustiso;

namespace {

VertexSet bits(std::size_t n, std::initializer_list<std::size_t> members) {
    VertexSet s(n);
    for (auto m : members) s.set(m);
    return s;
}

std::vector<std::vector<bool>> as_bools(const SetSystem& s) {
    std::vector<std::vector<bool>> out;
    for (const auto& set : s.sets()) {
        std::vector<bool> b(s.ground_size());
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = set.test(i);
        out.push_back(std::move(b));
    }
    return out;
}

int oracle_vc(const SetSystem& s) { return oracle::vc_dimension(as_bools(s), s.ground_size()); }

SetSystem power_set(std::size_t n) {
    std::vector<VertexSet> sets;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) sets.emplace_back(n, mask);
    return SetSystem(n, std::move(sets));
}

}  // namespace

TEST(SetSystem, Deduplicates) {
    SetSystem s(3, {bits(3, {0}), bits(3, {0}), bits(3, {})});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_THROW(SetSystem(3, {bits(4, {0})}), InvalidArgument);
}

TEST(NeighbourhoodSystem, Examples) {
    EXPECT_EQ(neighbourhood_system(Graph(3)).size(), 1u);
    const auto k3 = neighbourhood_system(testgen::complete(3));
    EXPECT_EQ(k3.size(), 3u);
    const auto p3 = neighbourhood_system(testgen::path(3));
    EXPECT_EQ(p3.size(), 2u);
}

TEST(MixedSystem, Examples) {
    EXPECT_EQ(mixed_system(Graph(4)).size(), 1u);
    const auto p3 = mixed_system(testgen::path(3));
    ASSERT_EQ(p3.size(), 2u);
    EXPECT_EQ(oracle_vc(p3), 1);
    const auto k4 = mixed_system(testgen::complete(4));
    EXPECT_EQ(k4.size(), 7u);
    for (const auto& s : k4.sets()) EXPECT_TRUE(s.count() == 0 || s.count() == 2);
}

TEST(ThresholdSystem, Examples) {
    QapInstance zero(3);
    EXPECT_EQ(qap_threshold_system(zero, Rational(0)).size(), 1u);
    EXPECT_TRUE(qap_threshold_system(zero, Rational(0)).sets().front().none());
    QapInstance ones(2);
    for (std::size_t i = 0; i < 16; ++i) ones.set(i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1, Rational(1));
    const auto full = qap_threshold_system(ones, Rational(1, 2));
    ASSERT_EQ(full.size(), 1u);
    EXPECT_TRUE(full.sets().front().all());
    const auto l36 = qap_threshold_system(gen_lemma36_qap(4), Rational(0));
    EXPECT_TRUE(is_shattered(l36, {0, 1}));
}

TEST(ThresholdSystem, MatchesOracleFamilies) {
    testgen::Engine rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 4);
        const QapInstance q = testgen::random_qap(rng, n, Rational(1));
        const Rational t(static_cast<long>(testgen::pick(rng, 0, 4)) - 2, 4);
        const Assignment phi = testgen::random_permutation(rng, n);
        EXPECT_EQ(vc_dimension_exact(qap_threshold_system(q, t)),
                  oracle::vc_dimension(oracle::threshold_family(q, t), n * n));
        EXPECT_EQ(vc_dimension_exact(qap_threshold_system(q, t, phi)),
                  oracle::vc_dimension(oracle::restricted_family(q, t, phi.mapping()), n));
    }
}

TEST(Shattering, Examples) {
    EXPECT_TRUE(is_shattered(SetSystem(3, {bits(3, {1})}), {}));
    EXPECT_FALSE(is_shattered(SetSystem(3, {}), {}));
    SetSystem singletons(3, {bits(3, {}), bits(3, {0}), bits(3, {1}), bits(3, {2})});
    EXPECT_FALSE(is_shattered(singletons, {0, 1}));
    EXPECT_TRUE(is_shattered(singletons, {2}));
    EXPECT_THROW(is_shattered(singletons, {3}), InvalidArgument);
}

TEST(VcDimension, Examples) {
    EXPECT_EQ(vc_dimension_exact(SetSystem(4, {bits(4, {})})), 0);
    EXPECT_EQ(vc_dimension_exact(SetSystem(4, {})), -1);
    EXPECT_EQ(vc_dimension_exact(power_set(3)), 3);
    for (std::size_t n = 3; n <= 7; ++n) EXPECT_EQ(vc_dimension_exact(neighbourhood_system(testgen::complete(n))), 1);
    EXPECT_THROW(vc_dimension_exact(power_set(3), 2), BudgetExceeded);
}

TEST(VcDimension, LargestShatteredSetIsShattered) {
    testgen::Engine rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = neighbourhood_system(testgen::random_graph(rng, testgen::pick(rng, 2, 10), 0.5));
        const auto x = largest_shattered_set(s);
        EXPECT_EQ(static_cast<int>(x.size()), std::max(0, vc_dimension_exact(s)));
        EXPECT_TRUE(is_shattered(s, x));
    }
}

TEST(VcDimension, AgreesWithOracle) {
    testgen::Engine rng(23);
    for (int trial = 0; trial < 80; ++trial) {
        const Graph g = testgen::random_graph(rng, testgen::pick(rng, 1, 10), testgen::coin(rng, 0.5) ? 0.3 : 0.6);
        EXPECT_EQ(vc_dimension_exact(neighbourhood_system(g)), oracle_vc(neighbourhood_system(g)));
        EXPECT_EQ(vc_dimension_exact(mixed_system(g)), oracle_vc(mixed_system(g)));
    }
}

TEST(VcDimension, MonotoneUnderRemoval) {
    testgen::Engine rng(24);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = mixed_system(testgen::random_graph(rng, testgen::pick(rng, 3, 9), 0.5));
        const auto smaller = s.filtered([&](const VertexSet&) { return testgen::coin(rng, 0.6); });
        EXPECT_LE(vc_dimension_exact(smaller), vc_dimension_exact(s));
    }
}

TEST(VcDimension, MixedSystemAtMostTenTimesNeighbourhood) {
    testgen::Engine rng(25);
    for (int trial = 0; trial < 60; ++trial) {
        const Graph g = testgen::random_graph(rng, testgen::pick(rng, 2, 10), 0.5);
        const int d = vc_dimension_exact(neighbourhood_system(g));
        if (d >= 1) EXPECT_LE(vc_dimension_exact(mixed_system(g)), 10 * d);
    }
}

TEST(WeightedGraphVc, Examples) {
    EXPECT_EQ(weighted_graph_vc(testgen::complete(3)), 1);
    EXPECT_EQ(weighted_graph_vc(Graph(5)), 0);
    Graph tri(3);
    tri.add_edge(0, 1, Rational(1));
    tri.add_edge(1, 2, Rational(2));
    tri.add_edge(0, 2, Rational(3));
    int expected = 0;
    for (long t : {0, 1, 2})
        expected = std::max(expected, oracle_vc(neighbourhood_system(threshold_graph(tri, Rational(t)))));
    EXPECT_EQ(weighted_graph_vc(tri), expected);
}

TEST(WeightedGraphVc, ConstantWeightsMatchUnweighted) {
    testgen::Engine rng(26);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = testgen::random_graph(rng, testgen::pick(rng, 2, 9), 0.5);
        Graph gw(g.order());
        for (auto [u, v] : g.edges()) gw.add_edge(u, v, Rational(7, 3));
        EXPECT_EQ(weighted_graph_vc(gw), vc_dimension_exact(neighbourhood_system(g)));
    }
}

TEST(QapVc, GedReductionWithinTenD) {
    testgen::Engine rng(27);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 5);
        const Graph g = testgen::random_weighted_graph(rng, n, 0.5, 4), h = testgen::random_weighted_graph(rng, n, 0.5, 4);
        const int d = std::max(weighted_graph_vc(g), weighted_graph_vc(h));
        if (d < 1) continue;
        EXPECT_LE(qap_vc(weighted_ged_to_qap(g, h)), 10 * d);
    }
}

TEST(RestrictedVc, NeverExceedsUnrestricted) {
    testgen::Engine rng(28);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 4);
        const QapInstance q = testgen::random_qap(rng, n, Rational(2));
        for (const auto& t : candidate_thresholds(q.distinct_values())) {
            const Assignment phi = testgen::random_permutation(rng, n);
            EXPECT_LE(vc_dimension_exact(qap_threshold_system(q, t, phi)), vc_dimension_exact(qap_threshold_system(q, t)));
        }
    }
}

TEST(WeakVc, Examples) {
    EXPECT_TRUE(weak_vc_test(QapInstance(4), 0));
    EXPECT_TRUE(weak_vc_test(gen_lemma36_qap(8), 1));
    EXPECT_FALSE(weak_vc_test(gen_lemma36_qap(8), 0));
    EXPECT_THROW(weak_vc_test(gen_lemma36_qap(8), 3, 10), BudgetExceeded);
}

TEST(WeakVc, AgreesWithEnumerationOverBijections) {
    testgen::Engine rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = testgen::pick(rng, 2, 4);
        const QapInstance q = testgen::random_qap(rng, n, Rational(1), 2);
        int worst = 0;
        for (const auto& t : candidate_thresholds(q.distinct_values()))
            oracle::for_each_permutation(n, [&](const oracle::Perm& p) {
                worst = std::max(worst, oracle::vc_dimension(oracle::restricted_family(q, t, p), n));
            });
        for (int d = 0; d <= 2; ++d) EXPECT_EQ(weak_vc_test(q, d), worst <= d) << "trial " << trial << " d " << d;
    }
}

TEST(EpsilonNet, Examples) {
    EXPECT_TRUE(epsilon_net_greedy(SetSystem(5, {bits(5, {})}), Rational(1, 2)).empty());
    VertexSet all(10);
    all.set();
    EXPECT_EQ(epsilon_net_greedy(SetSystem(10, {all}), Rational(1, 2)).size(), 1u);
    const auto c6 = neighbourhood_system(testgen::cycle(6));
    const auto net = epsilon_net_greedy(c6, Rational(1, 4));
    for (const auto& s : c6.sets()) {
        bool hit = false;
        for (auto x : net) hit |= s.test(x);
        EXPECT_TRUE(hit);
    }
    EXPECT_THROW(epsilon_net_greedy(c6, Rational(0)), InvalidArgument);
}

TEST(EpsilonNet, GreedyNetsSatisfyDefinition) {
    testgen::Engine rng(30);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s = mixed_system(testgen::random_graph(rng, testgen::pick(rng, 2, 20), 0.5));
        const Rational eps(static_cast<long>(testgen::pick(rng, 1, 9)), 10);
        const auto net = epsilon_net_greedy(s, eps);
        EXPECT_TRUE(is_epsilon_net(s, net, eps));
        for (const auto& set : s.sets()) {
            if (Rational(static_cast<unsigned long>(set.count())) <= eps * static_cast<unsigned long>(s.ground_size()))
                continue;
            bool hit = false;
            for (auto x : net) hit |= set.test(x);
            EXPECT_TRUE(hit);
        }
    }
}

TEST(EpsilonApproximation, Examples) {
    EXPECT_TRUE(is_epsilon_approximation(SetSystem(5, {bits(5, {})}), {0}, Rational(1, 10)));
    VertexSet all(5);
    all.set();
    EXPECT_TRUE(is_epsilon_approximation(SetSystem(5, {all}), {3, 3}, Rational(1, 10)));
    const Graph g = gen_random_graph(20, 0.5, 5);
    const auto sample = epsilon_approximation_sample(neighbourhood_system(g), Rational(3, 10), Rational(1, 10), 5);
    EXPECT_TRUE(is_epsilon_approximation(neighbourhood_system(g), sample.sample, Rational(3, 10)));
}

TEST(EpsilonApproximation, SampleSize) {
    EXPECT_EQ(approximation_sample_size(Rational(1, 2), Rational(1, 10), 2, 1.0),
              static_cast<std::size_t>(std::ceil((2 + std::log(10.0)) * 4)));
}

TEST(EpsilonApproximation, DeterministicAndIsANet) {
    testgen::Engine rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = neighbourhood_system(testgen::random_graph(rng, 30, 0.5));
        const std::uint64_t seed = rng();
        ApproximationOptions opts;
        opts.retries = 50;
        const auto a = epsilon_approximation_sample(s, Rational(3, 10), Rational(1, 10), seed, opts);
        const auto b = epsilon_approximation_sample(s, Rational(3, 10), Rational(1, 10), seed, opts);
        EXPECT_EQ(a.sample, b.sample);
        EXPECT_TRUE(is_epsilon_net(s, a.sample, Rational(3, 10)));
    }
}

TEST(SauerShelah, Examples) {
    EXPECT_TRUE(sauer_shelah_check(neighbourhood_system(testgen::complete(4)), 2));
    EXPECT_TRUE(sauer_shelah_check(power_set(2), 2));
    EXPECT_THROW(sauer_shelah_check(SetSystem(3, {bits(3, {})}), 1), InvalidArgument);
}

TEST(SauerShelah, HoldsOnRandomSystems) {
    testgen::Engine rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = neighbourhood_system(testgen::random_graph(rng, testgen::pick(rng, 4, 12), 0.5));
        const int d = vc_dimension_exact(s);
        if (d < 1) continue;
        for (std::size_t size = static_cast<std::size_t>(d); size <= std::min<std::size_t>(s.ground_size(), 6); ++size)
            EXPECT_TRUE(sauer_shelah_check(s, size));
    }
}
