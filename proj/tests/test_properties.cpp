#include <grovetree/experiment.hpp>
#include <grovetree/growth.hpp>
#include <grovetree/tree_io.hpp>
#include <grovetree/tree_metrics.hpp>

#include <gtest/gtest.h>

#include <vector>

using namespace grovetree;

TEST(Properties, FastWienerMatchesBfsOnRandomTrees) {
    RngStream rng(1001);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = trial < 140 ? 1 + rng.below(300) : 1500 + rng.below(501);
        const auto t = random_tree(n, rng);
        ASSERT_EQ(wiener_fast(t), wiener_bfs(t)) << "n=" << n;
    }
}

TEST(Properties, SplitSizesSumToN) {
    RngStream rng(1002);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_tree(2 + rng.below(200), rng);
        const SplitSizes s(t);
        for (const auto& e : t.edges()) EXPECT_EQ(s.component_size(e.u, e.v) + s.component_size(e.v, e.u), t.size());
    }
}

TEST(Properties, MeanPathLengthTimesPairsIsWiener) {
    RngStream rng(1003);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_tree(2 + rng.below(500), rng);
        const double n = static_cast<double>(t.size());
        EXPECT_NEAR(mean_path_length(t) * n * (n - 1) / 2, to_double(wiener_fast(t)), 1e-6);
    }
}

// Every labelled tree on n <= 8 vertices via its Pruefer code.
TEST(Properties, PathMaximisesAndStarMinimisesWiener) {
    for (std::size_t n = 3; n <= 8; ++n) {
        const auto nn = static_cast<Int128>(n);
        const Int128 path = nn * (nn * nn - 1) / 6;
        const Int128 star = (nn - 1) * (nn - 1);
        std::vector<VertexId> code(n - 2, 0);
        Int128 lo = path, hi = star;
        for (;;) {
            const Int128 w = wiener_fast(tree_from_pruefer(n, code));
            lo = std::min(lo, w);
            hi = std::max(hi, w);
            std::size_t k = 0;
            while (k < code.size() && ++code[k] == n) code[k++] = 0;
            if (k == code.size()) break;
        }
        EXPECT_EQ(hi, path) << "n=" << n;
        EXPECT_EQ(lo, star) << "n=" << n;
    }
}

TEST(Properties, GrownTreesAreValidAndReproducible) {
    const GrowthSpec specs[] = {
        {GrowthKind::vugm, 2, 0, LengthDistribution({1, 3}, {0.4, 0.6}), {}},
        {GrowthKind::eugm, 1, 2, LengthDistribution({1, 2}, {0.5, 0.5}), LengthDistribution({1, 4}, {0.9, 0.1})},
        {GrowthKind::mugm, 3, 0, LengthDistribution({1, 2, 3}, {0.2, 0.3, 0.5}), {}},
    };
    for (const auto& spec : specs) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            RngStream a(seed, 3), b(seed, 3);
            const auto ta = grow(path_tree(3), spec, 2, a);
            const auto tb = grow(path_tree(3), spec, 2, b);
            // from_edges re-validates connectivity and acyclicity.
            EXPECT_EQ(tree_from_json(tree_to_json(ta)), ta);
            EXPECT_EQ(tree_to_edge_list(ta), tree_to_edge_list(tb));
            if (spec.kind == GrowthKind::mugm) {
                EXPECT_LE(ta.max_degree(), spec.mu);
            }
        }
    }
}

TEST(Properties, RealizedVertexCountsMatchClosedForms) {
    const GrowthSpec specs[] = {
        {GrowthKind::vugm, 2, 0, LengthDistribution({1, 3}, {0.4, 0.6}), {}},
        {GrowthKind::eugm, 1, 2, LengthDistribution({1, 2}, {0.5, 0.5}), LengthDistribution({1, 4}, {0.9, 0.1})},
        {GrowthKind::mugm, 2, 0, LengthDistribution({1, 2}, {0.5, 0.5}), {}},
    };
    for (const auto& spec : specs) {
        const auto e = sample_ensemble(path_tree(3), spec, 2, 3000, 123);
        ASSERT_TRUE(e.n.z.has_value());
        EXPECT_LT(std::abs(*e.n.z), 4.0) << to_string(spec.kind);
    }
}
