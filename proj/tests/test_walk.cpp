#include <grovetree/growth.hpp>
#include <grovetree/walk.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace grovetree;

namespace {

Tree double_broom() {
    return Tree::from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {1, 7}});
}

Tree tgraph(unsigned t) {
    const auto p = preset("t-graph");
    RngStream rng(0);
    return grow(p.seed, p.spec, t, rng);
}

}  // namespace

TEST(HittingTimes, SmallExamples) {
    const auto e = hitting_times_solve(edge_tree());
    EXPECT_NEAR(e.at(0, 1), 1.0, 1e-12);
    EXPECT_NEAR(e.at(1, 0), 1.0, 1e-12);
    EXPECT_EQ(e.at(0, 0), 0.0);
    EXPECT_NEAR(hitting_times_solve(path_tree(3)).at(0, 2), 4.0, 1e-12);
    const auto s = hitting_times_solve(star_tree(3));
    EXPECT_NEAR(s.at(1, 0), 1.0, 1e-12);
    EXPECT_NEAR(s.at(0, 1), 5.0, 1e-12);
}

TEST(HittingTimes, Limits) {
    EXPECT_THROW(hitting_times_solve(single_vertex()), InvalidArgument);
    EXPECT_THROW(hitting_times_solve(path_tree(50), 40), ResourceLimit);
}

TEST(HittingTimes, CsvExport) {
    std::ostringstream out;
    hitting_times_solve(edge_tree()).write_csv(out);
    EXPECT_EQ(out.str(), "source,target,fpt\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
}

TEST(FirstPassage, AdjacentExamples) {
    EXPECT_EQ(fpt_adjacent(edge_tree(), 0, 1), 1u);
    EXPECT_EQ(fpt_adjacent(path_tree(3), 1, 2), 3u);
    EXPECT_EQ(fpt_adjacent(double_broom(), 0, 1), 7u);
    EXPECT_THROW(fpt_adjacent(path_tree(3), 0, 2), InvalidArgument);
}

TEST(FirstPassage, PairExamples) {
    EXPECT_EQ(fpt_pair(path_tree(3), 0, 2), 4u);
    EXPECT_EQ(fpt_pair(double_broom(), 5, 5), 0u);
    const auto t = tgraph(1);
    const auto table = hitting_times_solve(t);
    for (VertexId u = 0; u < t.size(); ++u)
        for (VertexId v = 0; v < t.size(); ++v) EXPECT_NEAR(static_cast<double>(fpt_pair(t, u, v)), table.at(u, v), 1e-9);
}

TEST(CommuteTime, Examples) {
    EXPECT_EQ(commute_time(edge_tree(), 0, 1), 2u);
    EXPECT_EQ(commute_time(path_tree(3), 0, 2), 8u);
    EXPECT_EQ(commute_time(star_tree(3), 1, 2), 12u);
}

TEST(Lemma1, Examples) {
    EXPECT_EQ(lemma1_sum(edge_tree(), 0), 1u);
    EXPECT_EQ(lemma1_sum(star_tree(3), 0), 3u);
    EXPECT_EQ(lemma1_sum(path_tree(3), 1), 2u);
}

TEST(Mfpt, Examples) {
    EXPECT_DOUBLE_EQ(mfpt_exact(edge_tree()), 1.0);
    EXPECT_DOUBLE_EQ(mfpt_exact(star_tree(3)), 4.5);
    EXPECT_NEAR(mfpt_exact(path_tree(9)), 80.0 / 3.0, 1e-12);
    EXPECT_NEAR(mfpt_verified(double_broom()), 2.0 * 58 / 8, 1e-12);
    EXPECT_THROW(mfpt_exact(single_vertex()), InvalidArgument);
}

TEST(Kirchhoff, Examples) {
    EXPECT_EQ(kirchhoff_index(edge_tree()), 2);
    EXPECT_DOUBLE_EQ(network_criticality(edge_tree()), 1.0);
    EXPECT_EQ(kirchhoff_index(star_tree(3)), 18);
    EXPECT_DOUBLE_EQ(network_criticality(star_tree(3)), 1.5);
    EXPECT_EQ(kirchhoff_index(path_tree(5)), 40);
    EXPECT_DOUBLE_EQ(network_criticality(path_tree(5)), 2.0);
}

TEST(Kirchhoff, EqualsMeanResistanceFromSolver) {
    // Effective resistance on a tree: commute time / (2 |E|).
    RngStream rng(4);
    const auto t = random_tree(25, rng);
    const auto table = hitting_times_solve(t);
    double total = 0;
    for (VertexId u = 0; u < t.size(); ++u)
        for (VertexId v = 0; v < t.size(); ++v)
            if (u != v) total += (table.at(u, v) + table.at(v, u)) / (2.0 * t.edge_count());
    EXPECT_NEAR(total, to_double(kirchhoff_index(t)), 1e-8);
}

TEST(MonteCarlo, EdgeAndStar) {
    WalkConfig c;
    c.trials = 100000;
    c.rng_seed = 17;
    const auto e = monte_carlo_fpt(edge_tree(), 0, 1, c);
    EXPECT_DOUBLE_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
    const auto s = monte_carlo_fpt(star_tree(3), 0, 1, c);
    EXPECT_LT(std::abs(s.mean - 5.0), 4 * s.std_error);
}

TEST(MonteCarlo, TGraphPairAgainstSolver) {
    const auto t = tgraph(2);
    RngStream pick(3);
    const auto u = static_cast<VertexId>(pick.below(t.size()));
    auto v = static_cast<VertexId>(pick.below(t.size()));
    if (v == u) v = (u + 1) % t.size();
    WalkConfig c;
    c.trials = 100000;
    c.rng_seed = 5;
    const auto est = monte_carlo_fpt(t, u, v, c);
    EXPECT_LT(std::abs(est.mean - hitting_times_solve(t).at(u, v)), 4 * est.std_error);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
    const auto t = double_broom();
    WalkConfig c;
    c.trials = 30000;
    c.rng_seed = 8;
    const auto one = monte_carlo_fpt(t, 2, 7, c);
    c.threads = 4;
    const auto four = monte_carlo_fpt(t, 2, 7, c);
    EXPECT_EQ(one.mean, four.mean);
    EXPECT_EQ(one.std_error, four.std_error);
}

TEST(MonteCarlo, StepCapIsAnError) {
    WalkConfig c;
    c.trials = 100;
    c.max_steps = 3;
    EXPECT_THROW(monte_carlo_fpt(path_tree(10), 0, 9, c), ResourceLimit);
    c.trials = 0;
    EXPECT_THROW(monte_carlo_fpt(path_tree(10), 0, 9, c), InvalidArgument);
}

TEST(Spectral, Examples) {
    const auto e = laplacian_eigencheck(edge_tree());
    EXPECT_NEAR(e.eigenvalues[0], 0.0, 1e-12);
    EXPECT_NEAR(e.eigenvalues[1], 2.0, 1e-12);
    EXPECT_NEAR(e.mfpt_spectral, 1.0, 1e-12);
    const auto s = laplacian_eigencheck(star_tree(3));
    const double want[] = {0, 1, 1, 4};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-10);
    EXPECT_NEAR(s.mfpt_spectral, 4.5, 1e-10);
    EXPECT_NEAR(laplacian_eigencheck(path_tree(3)).mfpt_spectral, 8.0 / 3.0, 1e-10);
    EXPECT_THROW(laplacian_eigencheck(path_tree(401)), ResourceLimit);
}

TEST(Identities, RandomTrees) {
    RngStream rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_tree(2 + rng.below(119), rng);
        const SplitSizes split(t);
        const auto table = hitting_times_solve(t);
        const std::size_t n = t.size();
        for (VertexId v = 0; v < n; ++v) {
            EXPECT_EQ(lemma1_sum(t, split, v), 2 * (n - 1) - t.degree(v));
            const auto d = distances_from(t, v);
            for (VertexId u = 0; u < n; ++u) {
                EXPECT_EQ(commute_time(split, u, v), 2 * (n - 1) * d[u]);
                EXPECT_NEAR(static_cast<double>(fpt_pair(split, u, v)), table.at(u, v), 1e-9 * std::max(1.0, table.at(u, v)));
            }
        }
        EXPECT_NEAR(table.mean(), mfpt_exact(t), 1e-9 * mfpt_exact(t));
    }
}
