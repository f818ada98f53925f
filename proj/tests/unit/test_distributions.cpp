#include "bdtest/distributions.hpp"
#include "bdtest/violation.hpp"

#include "error_code.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace bdt {
namespace {

using testing::error_code_of;

TEST(Distributions, MassesAndDenominator)
{
    ProductDistribution d(3, {{1, 1, 2}, {1, 2, 3}});
    EXPECT_EQ(d.denominator(), 12);
    EXPECT_EQ(d.mass(1, 3), 6);
    EXPECT_EQ(d.mass(2, 3), 6);
    EXPECT_EQ(std::vector<std::int64_t>(d.cumulative(1).begin(), d.cumulative(1).end()),
              (std::vector<std::int64_t>{0, 3, 6, 12}));
    EXPECT_FALSE(d.is_uniform());
    EXPECT_TRUE(ProductDistribution::uniform(HypergridDomain(4, 2)).is_uniform());
    EXPECT_TRUE(ProductDistribution(2, {{2, 2}, {1, 1}}).is_uniform());
    EXPECT_TRUE(ProductDistribution(1, {{5}}).is_uniform());
    EXPECT_EQ(d.point_mass({3, 1}), Rational(1, 2) * Rational(1, 6));
}

TEST(Distributions, InvalidMasses)
{
    EXPECT_EQ(error_code_of([] { ProductDistribution(2, {{1, -1}}); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { ProductDistribution(2, {{0, 0}}); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { ProductDistribution(2, {{1, 1, 1}}); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { ProductDistribution(2, {}); }), ErrorCode::argument);
}

TEST(Distributions, PhiLine)
{
    BloatedGrid bg(ProductDistribution(2, {{1, 3}}));
    EXPECT_EQ(bg.target_side(), 4);
    EXPECT_EQ(bg.phi(1, 1), 1);
    for (int t = 2; t <= 4; ++t) EXPECT_EQ(bg.phi(1, t), 2);
    EXPECT_EQ(bg.segment(1, 2), (std::pair<std::int64_t, std::int64_t>{2, 4}));
    EXPECT_EQ(error_code_of([&] { bg.phi(1, 5); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([&] { bg.phi(1, 0); }), ErrorCode::argument);
}

TEST(Distributions, PhiGrid)
{
    BloatedGrid bg(ProductDistribution(2, {{2, 2}, {1, 3}}));
    EXPECT_EQ(bg.phi(GridPoint{3, 2}), (GridPoint{2, 2}));
    EXPECT_EQ(bg.phi(GridPoint{1, 1}), (GridPoint{1, 1}));
    EXPECT_EQ(bg.target_domain(), HypergridDomain(4, 2));
    EXPECT_EQ(bg.target_size(), BigInt(16));
}

TEST(Distributions, ZeroMassSegmentIsEmpty)
{
    BloatedGrid bg(ProductDistribution(3, {{2, 0, 1}}));
    const auto seg = bg.segment(1, 2);
    EXPECT_GT(seg.first, seg.second);
    for (std::int64_t t = 1; t <= 3; ++t) EXPECT_NE(bg.phi(1, t), 2);
    EXPECT_EQ(bg.preimage_size({2}), BigInt(0));
}

TEST(Distributions, ExtendFunction)
{
    HypergridDomain d2(2, 1);
    auto f = FunctionTable::with_tight_range(d2, {5, 7});
    auto ext = extend_function(f, BloatedGrid(ProductDistribution(2, {{1, 3}})));
    EXPECT_EQ(std::vector<double>(ext.values().begin(), ext.values().end()), (std::vector<double>{5, 7, 7, 7}));
    EXPECT_EQ(ext.range_lo(), 5.0);

    HypergridDomain dom(3, 2);
    auto g = FunctionTable::with_tight_range(dom, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    auto same = extend_function(g, BloatedGrid(ProductDistribution::uniform(dom)));
    EXPECT_EQ(std::vector<double>(same.values().begin(), same.values().end()),
              std::vector<double>(g.values().begin(), g.values().end()));

    EXPECT_EQ(error_code_of([&] { extend_function(g, BloatedGrid(ProductDistribution(3, {{4, 4, 4}, {4, 4, 4}})), 100); }),
              ErrorCode::capacity);
}

TEST(Distributions, ExtendedMetric)
{
    HypergridDomain dom(2, 1);
    auto lip = BoundingFamily::lipschitz(dom, 1.0);
    BloatedGrid bg(ProductDistribution(2, {{1, 3}}));
    ExtendedMetric m(lip, bg);
    EXPECT_EQ(m({2}, {4}), 0.0);
    EXPECT_EQ(m({4}, {2}), 0.0);
    EXPECT_EQ(m({1}, {3}), 1.0);

    HypergridDomain g3(3, 2);
    auto b = BoundingFamily::constant(g3, -1.0, 2.0);
    BloatedGrid ubg(ProductDistribution::uniform(g3));
    ExtendedMetric um(b, ubg);
    for (std::size_t i = 0; i < g3.size(); ++i)
        for (std::size_t j = 0; j < g3.size(); ++j)
            EXPECT_EQ(um(g3.point_at(i), g3.point_at(j)), b(g3.point_at(i), g3.point_at(j)));
}

TEST(Distributions, ExtendedMetricAxiomsExhaustive)
{
    Rng rng(8);
    for (int k = 0; k < 5; ++k) {
        HypergridDomain dom(3, 2);
        auto b = testing::random_integer_bounds(dom, rng, k % 2 == 0);
        std::vector<std::vector<std::int64_t>> q(2, std::vector<std::int64_t>(3));
        for (auto& row : q) {
            for (auto& x : row) x = rng.between(0, 2);
            if (row[0] + row[1] + row[2] == 0) row[1] = 1;
        }
        ProductDistribution dist(3, q);
        if (dist.denominator() > 6) continue;
        BloatedGrid bg(dist);
        ExtendedMetric m(b, bg);
        const auto triples = all_triples(m.domain());
        auto rep = check_metric_axioms(m, triples);
        EXPECT_TRUE(rep.passed) << rep.counterexample;
    }
}

TEST(Distributions, MassExamples)
{
    ProductDistribution line(2, {{1, 3}});
    const std::vector<GridPoint> x2{{2}};
    EXPECT_EQ(mass(line, x2), Rational(3, 4));

    ProductDistribution grid(2, {{2, 2}, {1, 3}});
    const std::vector<GridPoint> x12{{1, 2}};
    EXPECT_EQ(mass(grid, x12), Rational(3, 8));

    HypergridDomain dom(2, 2);
    std::vector<GridPoint> all;
    for (std::size_t i = 0; i < dom.size(); ++i) all.push_back(dom.point_at(i));
    EXPECT_EQ(mass(grid, all), Rational(1));

    const std::vector<GridPoint> dup{{1, 2}, {1, 2}};
    EXPECT_EQ(mass(grid, dup), Rational(3, 8));
}

TEST(Distributions, SamplePointMass)
{
    ProductDistribution d(3, {{5, 0, 0}, {2, 0, 0}});
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(d, rng), (GridPoint{1, 1}));
}

TEST(Distributions, SampleUniformFrequencies)
{
    const int n = 5;
    const int draws = 100000;
    ProductDistribution d = ProductDistribution::uniform(HypergridDomain(n, 2));
    Rng rng(12345);
    std::vector<std::vector<int>> counts(2, std::vector<int>(n, 0));
    for (int i = 0; i < draws; ++i) {
        const auto p = sample(d, rng);
        for (int r = 1; r <= 2; ++r) ++counts[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(p[r] - 1)];
    }
    const double expect = static_cast<double>(draws) / n;
    const double sigma = std::sqrt(draws * (1.0 / n) * (1.0 - 1.0 / n));
    for (const auto& row : counts)
        for (int c : row) EXPECT_LE(std::abs(c - expect), 3.0 * sigma);
}

TEST(Distributions, SampleWeightedFrequencies)
{
    const int draws = 100000;
    ProductDistribution d(2, {{1, 3}});
    Rng rng(4321);
    int second = 0;
    for (int i = 0; i < draws; ++i) second += sample(d, rng)[1] == 2 ? 1 : 0;
    const double sigma = std::sqrt(draws * 0.75 * 0.25);
    EXPECT_LE(std::abs(second - 0.75 * draws), 3.0 * sigma);
}

TEST(Distributions, PreservationExamples)
{
    HypergridDomain d3(3, 1);
    auto mono = BoundingFamily::monotone(d3);
    auto f = FunctionTable::with_tight_range(d3, {3, 1, 2});

    auto u = distance_preservation_check(f, mono, ProductDistribution::uniform(d3));
    EXPECT_TRUE(u.passed);
    EXPECT_EQ(u.weighted, u.bloated);
    EXPECT_EQ(u.weighted, 2.0);

    auto w = distance_preservation_check(f, mono, ProductDistribution(3, {{1, 1, 2}}));
    EXPECT_TRUE(w.passed);
    EXPECT_EQ(w.method, "weighted-isotonic");
    // g = (1, 1, 2) costs 2 at the first point.
    EXPECT_EQ(w.weighted, 2.0);
    EXPECT_EQ(w.bloated, 2.0);
    EXPECT_DOUBLE_EQ(w.distance_d, 2.0 / (2.0 * 4.0));

    auto m = distance_preservation_check(FunctionTable::with_tight_range(d3, {1, 2, 2}), mono,
                                         ProductDistribution(3, {{1, 1, 2}}));
    EXPECT_TRUE(m.passed);
    EXPECT_EQ(m.weighted, 0.0);
    EXPECT_EQ(m.bloated, 0.0);
}

TEST(Distributions, Rationalize)
{
    auto d = rationalize(3, {{0.2, 0.3, 0.5}}, 0.01);
    EXPECT_EQ(d.denominator(), 100);
    EXPECT_EQ(d.mass(1, 1), 20);
    EXPECT_EQ(d.mass(1, 2), 30);
    EXPECT_EQ(d.mass(1, 3), 50);

    auto thirds = rationalize(3, {{1.0, 1.0, 1.0}}, 0.1);
    EXPECT_EQ(thirds.denominator(), 10);
    std::int64_t total = 0;
    for (int j = 1; j <= 3; ++j) {
        EXPECT_LE(std::abs(static_cast<double>(thirds.mass(1, j)) / 10.0 - 1.0 / 3.0), 0.1);
        total += thirds.mass(1, j);
    }
    EXPECT_EQ(total, 10);

    EXPECT_EQ(error_code_of([] { rationalize(2, {{0.5, 0.5}}, 0.0); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { rationalize(2, {{0.0, 0.0}}, 0.1); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { rationalize(2, {{0.5, -0.5}}, 0.1); }), ErrorCode::argument);
}

} // namespace
} // namespace bdt
