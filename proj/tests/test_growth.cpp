#include "support/enumerate.hpp"

#include <grovetree/growth.hpp>
#include <grovetree/tree_io.hpp>
#include <grovetree/tree_metrics.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

using namespace grovetree;
using grovetree::testing::enumerate_outcomes;

namespace {

GrowthSpec vugm(unsigned mu, LengthDistribution m) { return {GrowthKind::vugm, mu, 0, std::move(m), {}}; }
GrowthSpec mugm(unsigned mu, LengthDistribution m) { return {GrowthKind::mugm, mu, 0, std::move(m), {}}; }
GrowthSpec eugm(unsigned nu, LengthDistribution m, LengthDistribution n = {}) {
    return {GrowthKind::eugm, 1, nu, std::move(m), std::move(n)};
}

std::vector<std::size_t> sorted_degrees(const Tree& t) {
    auto d = degrees(t);
    std::sort(d.begin(), d.end());
    return d;
}

bool is_path(const Tree& t) { return t.max_degree() <= 2; }

}  // namespace

TEST(LengthDistribution, Validation) {
    EXPECT_THROW(LengthDistribution({0}, {1.0}), InvalidArgument);
    EXPECT_THROW(LengthDistribution({1, 1}, {0.5, 0.5}), InvalidArgument);
    EXPECT_THROW(LengthDistribution({1, 2}, {0.5, 0.4}), InvalidArgument);
    EXPECT_THROW(LengthDistribution({1, 2}, {1.5, -0.5}), InvalidArgument);
    EXPECT_THROW(LengthDistribution({1}, {1.0, 0.0}), InvalidArgument);
    EXPECT_NO_THROW(LengthDistribution({1, 2, 3}, {0.2, 0.3, 0.5}));
    EXPECT_TRUE(LengthDistribution({4, 5}, {1.0, 0.0}).degenerate());
}

TEST(LengthDistribution, InverseCdfBoundaries) {
    const LengthDistribution d({1, 2, 3}, {0.25, 0.0, 0.75});
    EXPECT_EQ(d.index_for(0.0), 0u);
    EXPECT_EQ(d.index_for(0.2499), 0u);
    EXPECT_EQ(d.index_for(0.25), 2u);  // the zero-mass atom is skipped
    EXPECT_EQ(d.index_for(0.999999999), 2u);
    EXPECT_EQ(d.index_for(1.0), 2u);
}

TEST(GrowthSpec, Validation) {
    EXPECT_THROW(vugm(1, {}).validate(), InvalidArgument);
    EXPECT_THROW(mugm(1, LengthDistribution::constant(1)).validate(), InvalidArgument);
    EXPECT_THROW(eugm(1, LengthDistribution::constant(1)).validate(), InvalidArgument);
    EXPECT_THROW(eugm(0, LengthDistribution::constant(1), LengthDistribution::constant(1)).validate(), InvalidArgument);
    EXPECT_NO_THROW(eugm(0, LengthDistribution::constant(2)).validate());
}

TEST(Vugm, DeterministicExamples) {
    RngStream rng(1);
    const auto t = grow(edge_tree(), vugm(3, LengthDistribution::constant(1)), 1, rng);
    EXPECT_EQ(t.size(), 8u);
    EXPECT_EQ(wiener_fast(t), 58);
    EXPECT_EQ(sorted_degrees(t), (std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 4, 4}));
    const auto e = grow(single_vertex(), vugm(1, LengthDistribution::constant(1)), 1, rng);
    EXPECT_EQ(e, edge_tree());
}

TEST(Vugm, EnumeratedOutcomeSizes) {
    std::map<std::size_t, Rational> sizes;
    const auto e = enumerate_outcomes(edge_tree(), vugm(1, LengthDistribution::uniform({1, 2})), 1,
                                      [&](const Tree& t, const Rational& p) {
                                          EXPECT_TRUE(is_path(t));
                                          sizes[t.size()] += p;
                                      });
    EXPECT_EQ(e.outcomes, 4u);
    EXPECT_EQ(e.expected_n, Rational(5));
    EXPECT_EQ(sizes[4], Rational(1, 4));
    EXPECT_EQ(sizes[5], Rational(1, 2));
    EXPECT_EQ(sizes[6], Rational(1, 4));
    EXPECT_EQ(e.expected_w, Rational(85, 4));
}

TEST(Eugm, DeterministicExamples) {
    RngStream rng(1);
    const auto unit = LengthDistribution::constant(1);
    const auto tg = grow(edge_tree(), eugm(1, unit, unit), 1, rng);
    EXPECT_EQ(tg.size(), 4u);
    EXPECT_EQ(tg.max_degree(), 3u);
    const auto sub = grow(edge_tree(), eugm(0, LengthDistribution::constant(2)), 1, rng);
    EXPECT_EQ(sub.size(), 4u);
    EXPECT_TRUE(is_path(sub));
    EXPECT_EQ(grow(path_tree(3), eugm(1, unit, unit), 1, rng).size(), 7u);
    EXPECT_EQ(grow(edge_tree(), eugm(1, unit, unit), 2, rng).size(), 10u);
}

TEST(Eugm, OneLengthPerEdge) {
    // A fresh draw per edge: on P3 with m in {1, 2} the two edges vary independently.
    std::map<std::size_t, Rational> sizes;
    enumerate_outcomes(path_tree(3), eugm(0, LengthDistribution::uniform({1, 2})), 1,
                       [&](const Tree& t, const Rational& p) { sizes[t.size()] += p; });
    EXPECT_EQ(sizes[5], Rational(1, 4));
    EXPECT_EQ(sizes[6], Rational(1, 2));
    EXPECT_EQ(sizes[7], Rational(1, 4));
}

TEST(Mugm, DeterministicExamples) {
    RngStream rng(1);
    const auto unit = LengthDistribution::constant(1);
    const auto v = grow(path_tree(3), mugm(2, unit), 1, rng);
    EXPECT_EQ(v.size(), 9u);
    EXPECT_TRUE(is_path(v));
    EXPECT_EQ(grow(path_tree(3), mugm(2, unit), 2, rng).size(), 27u);
    for (unsigned mu = 2; mu <= 5; ++mu) EXPECT_EQ(grow(star_tree(mu), mugm(mu, unit), 1, rng).size(), (mu + 1) * (mu + 1));
    const auto six = grow(edge_tree(), mugm(2, unit), 1, rng);
    EXPECT_EQ(six.size(), 6u);
    EXPECT_TRUE(is_path(six));
    EXPECT_EQ(wiener_fast(six), 35);
}

TEST(Mugm, RejectsHighDegreeSeed) {
    RngStream rng(1);
    EXPECT_THROW(grow(star_tree(3), mugm(2, LengthDistribution::constant(1)), 1, rng), InvalidArgument);
}

TEST(Mugm, DegreeStaysBounded) {
    RngStream rng(11);
    const auto spec = mugm(3, LengthDistribution({1, 2, 4}, {0.5, 0.25, 0.25}));
    Tree t = random_tree(12, rng);
    while (t.max_degree() > 3) t = random_tree(12, rng);
    RandomSampler sampler(rng);
    for (int step = 0; step < 3; ++step) {
        t = apply_mugm(t, spec, sampler);
        EXPECT_LE(t.max_degree(), 3u);
    }
}

TEST(Grow, ZeroStepsReturnsSeed) {
    RngStream rng(5);
    const auto seed = random_tree(17, rng);
    EXPECT_EQ(grow(seed, vugm(2, LengthDistribution::uniform({1, 3})), 0, rng), seed);
}

TEST(Grow, DeterministicUnderFixedSeed) {
    const auto spec = eugm(2, LengthDistribution({1, 2}, {0.3, 0.7}), LengthDistribution::uniform({1, 2, 3}));
    RngStream a(99, 4), b(99, 4), c(99, 5);
    const auto ta = grow(path_tree(5), spec, 2, a);
    const auto tb = grow(path_tree(5), spec, 2, b);
    const auto tc = grow(path_tree(5), spec, 2, c);
    EXPECT_EQ(tree_to_json(ta).dump(), tree_to_json(tb).dump());
    EXPECT_NE(tree_to_json(ta).dump(), tree_to_json(tc).dump());
}

TEST(Grow, VertexCapIsEnforced) {
    RngStream rng(1);
    EXPECT_THROW(grow(edge_tree(), vugm(3, LengthDistribution::constant(1)), 3, rng, 100), ResourceLimit);
}

TEST(Grow, VugmAndMugmShareVertexCounts) {
    const auto m = LengthDistribution({1, 3}, {0.5, 0.5});
    std::map<std::size_t, Rational> a, b;
    enumerate_outcomes(edge_tree(), vugm(2, m), 1, [&](const Tree& t, const Rational& p) { a[t.size()] += p; });
    enumerate_outcomes(edge_tree(), mugm(2, m), 1, [&](const Tree& t, const Rational& p) { b[t.size()] += p; });
    EXPECT_EQ(a, b);
}

TEST(Presets, Configurations) {
    const auto tg = preset("t-graph");
    EXPECT_EQ(tg.seed, edge_tree());
    EXPECT_EQ(tg.spec.kind, GrowthKind::eugm);
    EXPECT_EQ(tg.spec.nu, 1u);
    EXPECT_EQ(tg.spec.m_dist, LengthDistribution::constant(1));
    EXPECT_EQ(tg.spec.n_dist, LengthDistribution::constant(1));
    const auto v = preset("vicsek", {.mu = 3});
    EXPECT_EQ(v.seed, star_tree(3));
    EXPECT_EQ(v.spec.kind, GrowthKind::mugm);
    const auto s = preset("subdivision", {.m = 1});
    EXPECT_EQ(s.spec.nu, 0u);
    EXPECT_TRUE(s.spec.n_dist.empty());
    EXPECT_THROW(preset("vicsek", {.mu = 1}), InvalidArgument);
    EXPECT_THROW(preset("t-graph", {.mu = 2}), InvalidArgument);
    EXPECT_THROW(preset("koch"), InvalidArgument);
    for (const auto& info : preset_catalog()) EXPECT_TRUE(preset(info.name).spec.deterministic()) << info.name;
}

TEST(SpecJson, RoundTrip) {
    const auto spec = eugm(2, LengthDistribution({1, 2}, {0.25, 0.75}), LengthDistribution::constant(3));
    EXPECT_EQ(growth_spec_from_json(to_json(spec)), spec);
    EXPECT_THROW(growth_spec_from_json(nlohmann::json::parse(R"({"kind": "xugm", "m": {"values": [1], "probs": [1]}})")),
                 InvalidArgument);
    EXPECT_THROW(
        growth_spec_from_json(nlohmann::json::parse(R"({"kind": "vugm", "mu": 1, "m": {"values": [1, 2], "probs": [0.5, 0.6]}})")),
        InvalidArgument);
}
