#include "bdtest/violation.hpp"

#include "error_code.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace bdt {
namespace {

using testing::error_code_of;

FunctionTable line(std::vector<double> v, double lo, double hi)
{
    const int n = static_cast<int>(v.size());
    return FunctionTable(HypergridDomain(n, 1), std::move(v), lo, hi);
}

FunctionTable line(std::vector<double> v)
{
    const int n = static_cast<int>(v.size());
    return FunctionTable::with_tight_range(HypergridDomain(n, 1), std::move(v));
}

TEST(Violation, ScoreExamples)
{
    HypergridDomain d2(2, 1);
    EXPECT_EQ(violation_score(line({5, 0}), BoundingFamily::monotone(d2), {1}, {2}), 5.0);

    HypergridDomain d4(4, 1);
    auto lip = BoundingFamily::lipschitz(d4, 1.0);
    auto f = line({0, 0, 0, 10});
    EXPECT_EQ(violation_score(f, lip, {1}, {4}), 7.0);
    EXPECT_EQ(violation_score(f, lip, {4}, {1}), 7.0);

    auto mono = BoundingFamily::monotone(d4);
    auto g = line({1, 1, 2, 5});
    for (int x = 1; x <= 4; ++x)
        for (int y = 1; y <= 4; ++y)
            if (x != y) EXPECT_LE(violation_score(g, mono, {x}, {y}), 0.0);
}

TEST(Violation, ScoreErrors)
{
    HypergridDomain d3(3, 1);
    auto f = line({1, 2, 3});
    EXPECT_EQ(error_code_of([&] { violation_score(f, BoundingFamily::monotone(d3), {2}, {2}); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([&] { violation_score(f, BoundingFamily::monotone(HypergridDomain(4, 1)), {1}, {2}); }),
              ErrorCode::argument);
}

TEST(Violation, GraphExamples)
{
    HypergridDomain d3(3, 1);
    EXPECT_TRUE(build_violation_graph(line({1, 2, 3}), BoundingFamily::monotone(d3)).empty());

    auto g = build_violation_graph(line({3, 1, 2}), BoundingFamily::monotone(d3));
    ASSERT_EQ(g.edges.size(), 2u);
    EXPECT_EQ(g.edges[0], (WeightedEdge{0, 1, 2.0}));
    EXPECT_EQ(g.edges[1], (WeightedEdge{0, 2, 1.0}));

    auto h = build_violation_graph(line({0, 10}), BoundingFamily::lipschitz(HypergridDomain(2, 1), 1.0));
    ASSERT_EQ(h.edges.size(), 1u);
    EXPECT_EQ(h.edges[0].weight, 9.0);
}

TEST(Violation, GraphCapacity)
{
    HypergridDomain dom(5, 2);
    auto f = FunctionTable::with_tight_range(dom, std::vector<double>(25, 0.0));
    EXPECT_EQ(error_code_of([&] { build_violation_graph(f, BoundingFamily::monotone(dom), 24); }), ErrorCode::capacity);
    DistanceOptions opt;
    opt.max_points = 10;
    EXPECT_EQ(error_code_of([&] { l1_distance(f, BoundingFamily::monotone(dom), opt); }), ErrorCode::capacity);
}

TEST(Violation, CountViolatedPairs)
{
    HypergridDomain d4(4, 1);
    EXPECT_EQ(count_violated_pairs(line({4, 3, 2, 1}), BoundingFamily::monotone(d4), Tolerance::exact()), 6u);
    EXPECT_EQ(count_violated_pairs(line({1, 3, 2, 4}), BoundingFamily::monotone(d4), Tolerance::exact()), 1u);
}

TEST(Violation, MatchingOnGraph)
{
    HypergridDomain d3(3, 1);
    auto m = max_weight_matching(build_violation_graph(line({3, 1, 2}), BoundingFamily::monotone(d3)));
    EXPECT_EQ(m.weight, 2.0);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.edges[0].u, 0u);
    EXPECT_EQ(m.edges[0].v, 1u);
}

TEST(Violation, DistanceExamples)
{
    HypergridDomain d3(3, 1);
    auto r = l1_distance(line({3, 1, 2}, 1, 3), BoundingFamily::monotone(d3));
    EXPECT_DOUBLE_EQ(r.distance, 1.0 / 3.0);
    EXPECT_EQ(r.matching_weight, 2.0);
    EXPECT_EQ(r.point_count, 3.0);
    EXPECT_EQ(r.range_width, 2.0);

    EXPECT_EQ(l1_distance(line({1, 2, 2}), BoundingFamily::monotone(d3)).distance, 0.0);

    auto q = l1_distance(line({0, 10}, 0, 10), BoundingFamily::lipschitz(HypergridDomain(2, 1), 1.0));
    EXPECT_DOUBLE_EQ(q.distance, 0.45);
}

TEST(Violation, DegenerateRange)
{
    HypergridDomain d2(2, 1);
    EXPECT_EQ(error_code_of([&] { l1_distance(line({1, 1}), BoundingFamily::constant(d2, 1.0, 2.0)); }),
              ErrorCode::degenerate_range);
    EXPECT_EQ(l1_distance(line({1, 1}), BoundingFamily::lipschitz(d2, 1.0)).distance, 0.0);
}

TEST(Violation, DistanceUnderProductDistribution)
{
    HypergridDomain d2(2, 1);
    ProductDistribution dist(2, {{1, 3}});
    auto r = l1_distance(line({2, 1}), BoundingFamily::monotone(d2), dist);
    EXPECT_EQ(r.point_count, 4.0);
    EXPECT_EQ(r.matching_weight, 1.0);
    EXPECT_DOUBLE_EQ(r.distance, 0.25);
    EXPECT_EQ(r.evaluated_domain, HypergridDomain(4, 1));
}

TEST(Violation, IsotonicExamples)
{
    EXPECT_EQ(isotonic_l1_oracle(line({3, 1, 2})), 2.0);
    EXPECT_EQ(isotonic_l1_oracle(line({1, 1, 4, 9})), 0.0);
    const std::vector<double> w{1, 3};
    EXPECT_EQ(isotonic_l1_oracle(line({2, 1}), w), 1.0);
}

TEST(Violation, IsotonicErrors)
{
    HypergridDomain dom(2, 2);
    auto f = FunctionTable::with_tight_range(dom, {0, 0, 0, 0});
    EXPECT_EQ(error_code_of([&] { isotonic_l1_oracle(f); }), ErrorCode::unsupported);
    const std::vector<double> bad{1, -1};
    EXPECT_EQ(error_code_of([&] { isotonic_l1_oracle(line({2, 1}), bad); }), ErrorCode::argument);
    const std::vector<double> short_w{1};
    EXPECT_EQ(error_code_of([&] { isotonic_l1_oracle(line({2, 1}), short_w); }), ErrorCode::argument);
}

TEST(Violation, IsotonicAgreesWithDP)
{
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        const int n = static_cast<int>(rng.between(1, 8));
        HypergridDomain dom(n, 1);
        auto f = testing::random_integer_function(dom, rng, -4, 4);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& x : w) x = static_cast<double>(rng.between(0, 3));
        EXPECT_EQ(isotonic_l1_oracle(f, w), testing::line_l1_dp(f, BoundingFamily::monotone(dom), w));
    }
}

// Matching weight equals the closest-function distance for arbitrary integer bounds on a line.
TEST(Violation, MatchingWeightAgreesWithDP)
{
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
        const int n = static_cast<int>(rng.between(2, 6));
        HypergridDomain dom(n, 1);
        auto f = testing::random_integer_function(dom, rng, -5, 5);
        auto b = testing::random_integer_bounds(dom, rng, k % 2 == 0);
        auto g = build_violation_graph(f, b);
        EXPECT_EQ(max_weight_matching(g).weight, testing::line_l1_dp(f, b)) << "case " << k;
    }
}

TEST(Violation, DimensionReductionExamples)
{
    HypergridDomain d3(3, 1);
    auto r = dimension_reduction_check(line({3, 1, 2}), BoundingFamily::monotone(d3));
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.line_sum, r.full_weight);
    EXPECT_EQ(r.full_weight, 2.0);
    EXPECT_EQ(r.margin, 1.0);

    HypergridDomain dom(3, 2);
    auto z = dimension_reduction_check(FunctionTable::with_tight_range(dom, {0, 1, 2, 1, 2, 3, 2, 3, 4}),
                                       BoundingFamily::monotone(dom));
    EXPECT_TRUE(z.passed);
    EXPECT_EQ(z.line_sum, 0.0);
    EXPECT_EQ(z.full_weight, 0.0);
}

TEST(Violation, NoCrossPairExamples)
{
    HypergridDomain dom(3, 2);
    auto mono = BoundingFamily::monotone(dom);

    auto member = FunctionTable::with_tight_range(dom, {0, 1, 2, 1, 2, 3, 2, 3, 4});
    auto a = no_cross_pair_check(member, mono, 1);
    EXPECT_TRUE(a.passed);
    EXPECT_EQ(a.unrestricted, 0.0);
    EXPECT_EQ(a.restricted, 0.0);

    // f(x1, x2) = 10 x1 + 3 - x2: increasing in x1, decreasing in x2.
    std::vector<double> v;
    for (int x1 = 1; x1 <= 3; ++x1)
        for (int x2 = 1; x2 <= 3; ++x2) v.push_back(10.0 * x1 + 3 - x2);
    auto f = FunctionTable::with_tight_range(dom, v);
    auto b = no_cross_pair_check(f, mono, 1);
    EXPECT_TRUE(b.passed);
    EXPECT_EQ(b.unrestricted, 6.0);
    EXPECT_EQ(b.restricted, 6.0);

    EXPECT_EQ(error_code_of([&] { no_cross_pair_check(f, mono, 2); }), ErrorCode::precondition);
    EXPECT_EQ(error_code_of([&] { no_cross_pair_check(f, mono, 3); }), ErrorCode::argument);
}

} // namespace
} // namespace bdt
