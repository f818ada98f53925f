#include "bdtest/harness.hpp"

#include "error_code.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace bdt {
namespace {

using testing::error_code_of;

TEST(Stats, WilsonKnownValues)
{
    auto zero = wilson_interval(0, 100);
    EXPECT_EQ(zero.lo, 0.0);
    const double z2 = kWilsonZ95 * kWilsonZ95;
    EXPECT_NEAR(zero.hi, z2 / (100.0 + z2), 1e-12);

    auto all = wilson_interval(100, 100);
    EXPECT_NEAR(all.lo, 100.0 / (100.0 + z2), 1e-12);
    EXPECT_NEAR(all.hi, 1.0, 1e-12);

    // 50 of 100: centre 0.5, half width z sqrt(0.25/100 + z^2/4e4) / (1 + z^2/100).
    auto half = wilson_interval(50, 100);
    const double hw = kWilsonZ95 * std::sqrt(0.0025 + z2 / 40000.0) / (1.0 + z2 / 100.0);
    EXPECT_NEAR(half.lo, 0.5 - hw, 1e-12);
    EXPECT_NEAR(half.hi, 0.5 + hw, 1e-12);
    EXPECT_EQ(error_code_of([] { wilson_interval(1, 0); }), ErrorCode::argument);
    EXPECT_EQ(error_code_of([] { wilson_interval(3, 2); }), ErrorCode::argument);
}

TEST(Stats, LinearFit)
{
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    auto fit = linear_fit(x, y);
    EXPECT_NEAR(fit.slope, 2.0, 1e-12);
    EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);

    const std::vector<double> noisy{3, 6, 6, 9};
    auto f2 = linear_fit(x, noisy);
    EXPECT_NEAR(f2.slope, 1.8, 1e-12);
    EXPECT_NEAR(f2.intercept, 1.5, 1e-12);
    EXPECT_NEAR(f2.r_squared, 0.9, 1e-12);

    const std::vector<double> flat{2, 2};
    const std::vector<double> y2{1, 3};
    EXPECT_EQ(error_code_of([&] { linear_fit(flat, y2); }), ErrorCode::argument);
}

TEST(Harness, MembersPassMembership)
{
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        HypergridDomain dom(static_cast<int>(rng.between(1, 5)), static_cast<int>(rng.between(1, 3)));
        auto b = testing::random_mixed_bounds(dom, rng);
        MemberOptions opt;
        opt.integral = k % 2 == 0;
        opt.interval = std::make_pair(-2.0, 2.0);
        auto f = gen_member(b, rng, opt);
        EXPECT_TRUE(is_member(f, b)) << "case " << k;
        if (opt.integral) EXPECT_TRUE(f.is_integral());
    }
}

TEST(Harness, MonotoneMembersAreNondecreasing)
{
    HypergridDomain dom(4, 3);
    Rng rng(2);
    auto f = gen_member(BoundingFamily::monotone(dom), rng);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        const auto x = dom.point_at(i);
        for (int r = 1; r <= 3; ++r) {
            if (x[r] == 4) continue;
            auto y = x;
            y[r] += 1;
            EXPECT_LE(f.at(x), f.at(y));
        }
    }
}

TEST(Harness, LipschitzMembersHaveSmallSteps)
{
    HypergridDomain dom(5, 2);
    Rng rng(3);
    auto f = gen_member(BoundingFamily::lipschitz(dom, 1.0), rng);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        const auto x = dom.point_at(i);
        for (int r = 1; r <= 2; ++r) {
            if (x[r] == 5) continue;
            auto y = x;
            y[r] += 1;
            EXPECT_LE(std::abs(f.at(y) - f.at(x)), 1.0);
        }
    }
    EXPECT_EQ(f.range_lo(), *std::min_element(f.values().begin(), f.values().end()));
    EXPECT_EQ(f.range_hi(), *std::max_element(f.values().begin(), f.values().end()));
}

TEST(Harness, MemberNeedsIntervalForFreeEdges)
{
    HypergridDomain dom(3, 1);
    BoundingFamily free(dom, {{-INFINITY, 0}}, {{INFINITY, 1}});
    Rng rng(4);
    EXPECT_EQ(error_code_of([&] { gen_member(free, rng); }), ErrorCode::argument);
    MemberOptions opt;
    opt.interval = std::make_pair(-1.0, 1.0);
    EXPECT_TRUE(is_member(gen_member(free, rng, opt), free));
    MemberOptions bad;
    bad.integral = true;
    EXPECT_EQ(error_code_of([&] { gen_member(BoundingFamily::constant(dom, 0.2, 0.8), rng, bad); }),
              ErrorCode::argument);
}

TEST(Harness, FarTargetZeroIsUnmodified)
{
    HypergridDomain dom(6, 1);
    auto b = BoundingFamily::lipschitz(dom, 1.0);
    Rng rng(5);
    auto inst = gen_far(b, 0.0, rng);
    EXPECT_EQ(inst.method, FarMethod::unmodified);
    ASSERT_TRUE(inst.measured.has_value());
    EXPECT_EQ(*inst.measured, 0.0);
    EXPECT_EQ(inst.spikes, 0u);
    EXPECT_TRUE(is_member(inst.f, b));
}

TEST(Harness, FarMonotoneLine)
{
    HypergridDomain dom(8, 1);
    auto b = BoundingFamily::monotone(dom);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        FarOptions opt;
        opt.member.integral = true;
        auto inst = gen_far(b, 0.25, rng, opt);
        EXPECT_EQ(inst.method, FarMethod::oracle);
        ASSERT_TRUE(inst.measured.has_value());
        EXPECT_GE(*inst.measured, 0.25);
        // Independent check through the isotonic oracle.
        const double iso = isotonic_l1_oracle(inst.f) / (inst.f.range_width() * 8.0);
        EXPECT_DOUBLE_EQ(iso, *inst.measured);
    }
}

TEST(Harness, FarLipschitzGrid)
{
    HypergridDomain dom(4, 2);
    auto b = BoundingFamily::constant(dom, -1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        FarOptions opt;
        opt.member.integral = true;
        auto inst = gen_far(b, 0.2, rng, opt);
        EXPECT_EQ(inst.method, FarMethod::oracle);
        EXPECT_GE(*inst.measured, 0.2);
        const auto m = testing::brute_force_matching(dom.size(), build_violation_graph(inst.f, b).edges);
        EXPECT_DOUBLE_EQ(m.weight / (inst.f.range_width() * 16.0), *inst.measured);
    }
}

TEST(Harness, FarHeuristicAboveCap)
{
    HypergridDomain dom(20, 2);
    auto b = BoundingFamily::lipschitz(dom, 1.0);
    Rng rng(6);
    FarOptions opt;
    opt.oracle_cap = 100;
    auto inst = gen_far(b, 0.1, rng, opt);
    EXPECT_EQ(inst.method, FarMethod::heuristic);
    EXPECT_FALSE(inst.measured.has_value());
    EXPECT_GT(inst.spikes, 0u);
}

TEST(Harness, FarUnderDistribution)
{
    HypergridDomain dom(3, 1);
    auto b = BoundingFamily::lipschitz(dom, 1.0);
    ProductDistribution dist(3, {{1, 2, 1}});
    Rng rng(7);
    FarOptions opt;
    opt.dist = &dist;
    opt.member.integral = true;
    auto inst = gen_far(b, 0.1, rng, opt);
    ASSERT_TRUE(inst.measured.has_value());
    EXPECT_DOUBLE_EQ(*inst.measured, l1_distance(inst.f, b, dist).distance);
}

TEST(Harness, FarErrors)
{
    HypergridDomain dom(4, 1);
    Rng rng(8);
    EXPECT_EQ(error_code_of([&] { gen_far(BoundingFamily::lipschitz(dom, 1.0), 1.0, rng); }), ErrorCode::argument);
    FarOptions opt;
    opt.spike_scale = 0.0;
    EXPECT_EQ(error_code_of([&] { gen_far(BoundingFamily::lipschitz(dom, 1.0), 0.1, rng, opt); }), ErrorCode::argument);
    // Members of a two-point constant-gap family are never constant, but a single
    // spike budget cannot reach 0.9.
    FarOptions tight;
    tight.max_spikes = 1;
    tight.member.integral = true;
    EXPECT_EQ(error_code_of([&] { gen_far(BoundingFamily::constant(dom, 1.0, 2.0), 0.9, rng, tight); }),
              ErrorCode::generation);
    // A one-point grid has a constant member and no room for spikes.
    EXPECT_EQ(error_code_of([&] { gen_far(BoundingFamily::lipschitz(HypergridDomain(1, 1), 1.0), 0.1, rng); }),
              ErrorCode::generation);
}

TEST(Harness, EstimateRejection)
{
    auto none = estimate_rejection([](Rng&) { return false; }, 1000, 1);
    EXPECT_EQ(none.rejections, 0u);
    EXPECT_EQ(none.rate, 0.0);
    EXPECT_EQ(none.wilson.lo, 0.0);
    EXPECT_LT(none.wilson.hi, 0.005);

    auto all = estimate_rejection([](Rng&) { return true; }, 200, 1);
    EXPECT_EQ(all.rate, 1.0);
    EXPECT_EQ(all.rejections, 200u);

    auto coin = estimate_rejection([](Rng& r) { return r.below(4) == 0; }, 20000, 2);
    EXPECT_LE(coin.wilson.lo, 0.25);
    EXPECT_GE(coin.wilson.hi, 0.25);

    auto again = estimate_rejection([](Rng& r) { return r.below(4) == 0; }, 20000, 2);
    EXPECT_EQ(again.rejections, coin.rejections);

    EXPECT_EQ(error_code_of([] { estimate_rejection([](Rng&) { return true; }, 99, 0); }), ErrorCode::argument);
}

TEST(Harness, EstimateOnMemberIsZero)
{
    HypergridDomain dom(16, 1);
    auto b = BoundingFamily::lipschitz(dom, 1.0);
    Rng gen(9);
    auto f = gen_member(b, gen);
    TableOracle o(f);
    auto est = estimate_rejection([&](Rng& r) { return line_tester(o, b, r).rejected(); }, 500, 3);
    EXPECT_EQ(est.rejections, 0u);
}

TEST(Harness, PredictedBound)
{
    EXPECT_DOUBLE_EQ(predicted_rejection_bound(0.2, 1, 1.0), 0.05);
    EXPECT_DOUBLE_EQ(predicted_rejection_bound(0.2, 2, 2.0), 0.2 / 32.0);
}

TEST(Harness, EmptyConfig)
{
    auto cfg = parse_experiment_config("{}");
    EXPECT_TRUE(cfg.rows.empty());
    auto report = run_experiment(cfg);
    EXPECT_TRUE(report.rows.empty());
    EXPECT_TRUE(report.all_passed());
    EXPECT_FALSE(report.query_fit.has_value());
    EXPECT_NE(report_json(report).find("\"rows\": []"), std::string::npos);
}

TEST(Harness, ConfigExpansion)
{
    auto cfg = parse_experiment_config(R"({"seed": 4, "threads": 2, "sweeps": [
        {"name": "a", "sides": [4, 8], "dims": [1, 2], "epsilons": [0.1, 0.2], "instances": 3, "trials": 100}]})");
    EXPECT_EQ(cfg.seed, 4u);
    EXPECT_EQ(cfg.threads, 2u);
    ASSERT_EQ(cfg.rows.size(), 24u);
    EXPECT_EQ(cfg.rows[0].side, 4);
    EXPECT_EQ(cfg.rows[0].dims, 1);
    EXPECT_EQ(cfg.rows[0].epsilon, 0.1);
    EXPECT_EQ(cfg.rows[23].side, 8);
    EXPECT_EQ(cfg.rows[23].instance, 2u);
    EXPECT_EQ(cfg.rows[5].name, "a");
}

TEST(Harness, ConfigErrors)
{
    const auto code = [](const char* text) { return error_code_of([&] { parse_experiment_config(text); }); };
    EXPECT_EQ(code("not json"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"bogus": 1})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "colour": 1}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"dims": [1]}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "kind": "other"}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "trials": 10}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "epsilon": 1.5}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "p": 3}]})"), ErrorCode::parse);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "bounds": "/nonexistent/bounds.txt"}]})"), ErrorCode::io);
    EXPECT_EQ(code(R"({"sweeps": [{"sides": [4], "distribution": {"masses": [[1, 1]]}}]})"), ErrorCode::parse);
}

const char* const kSweep = R"({"seed": 77, "sweeps": [
    {"name": "complete", "kind": "completeness", "sides": [8], "dims": [1, 2], "bounds": "lipschitz:1",
     "epsilons": [0.2], "trials": 100, "instances": 3, "integer": true},
    {"name": "sound", "kind": "soundness", "sides": [16], "dims": [1], "bounds": "lipschitz:1",
     "epsilons": [0.2, 0.4], "trials": 400, "integer": true},
    {"name": "mono", "kind": "soundness", "sides": [8], "dims": [1], "bounds": "monotone",
     "epsilon": 0.25, "trials": 200, "integer": true},
    {"name": "l2", "kind": "completeness", "sides": [4], "dims": [2], "bounds": "const:-1:1",
     "epsilon": 0.3, "p": 2, "trials": 100},
    {"name": "product", "kind": "soundness", "sides": [4], "dims": [1], "bounds": "lipschitz:1",
     "distribution": {"masses": [[1, 2, 3, 2]]}, "epsilon": 0.2, "trials": 200, "integer": true}]})";

TEST(Harness, SweepRows)
{
    auto cfg = parse_experiment_config(kSweep);
    auto report = run_experiment(cfg);
    ASSERT_EQ(report.rows.size(), 11u);
    for (const auto& row : report.rows) {
        EXPECT_TRUE(row.error.empty()) << row.spec.name << ": " << row.error;
        EXPECT_TRUE(row.pass) << row.spec.name;
        EXPECT_EQ(row.queries, 2 * row.iterations) << row.spec.name;
        EXPECT_EQ(row.seed, mix_seed(77, row.index));
        if (row.spec.kind == RowKind::completeness) {
            EXPECT_EQ(row.estimate.rejections, 0u);
            EXPECT_EQ(row.full_rejections, 0u);
        }
    }
    const auto& mono = report.rows[8];
    EXPECT_EQ(mono.tester, "monotonicity-hypergrid");
    ASSERT_TRUE(mono.isotonic_check.has_value());
    EXPECT_TRUE(*mono.isotonic_check);

    const auto& l2 = report.rows[9];
    EXPECT_EQ(l2.tester, "l2-hypergrid");
    EXPECT_DOUBLE_EQ(l2.effective_epsilon, 0.09);
    EXPECT_EQ(l2.default_iterations, default_iterations(2, 0.3 * 0.3, 1.0));

    EXPECT_EQ(report.rows[10].tester, "product");
    ASSERT_TRUE(report.query_fit.has_value());
    EXPECT_TRUE(report.all_passed());
}

TEST(Harness, ReplayIsByteIdentical)
{
    auto cfg = parse_experiment_config(kSweep);
    auto a = run_experiment(cfg);
    cfg.threads = 1;
    auto b = run_experiment(cfg);
    cfg.threads = 4;
    auto c = run_experiment(cfg);
    EXPECT_EQ(report_json(a), report_json(b));
    EXPECT_EQ(report_json(a), report_json(c));
    EXPECT_EQ(report_csv(a), report_csv(b));
    EXPECT_EQ(report_csv(a), report_csv(c));

    cfg.seed = 78;
    EXPECT_NE(report_json(run_experiment(cfg)), report_json(a));
}

TEST(Harness, CsvCarriesSeeds)
{
    auto report = run_experiment(parse_experiment_config(kSweep));
    const std::string csv = report_csv(report);
    EXPECT_EQ(csv.rfind("master_seed,index,seed,", 0), 0u);
    EXPECT_NE(csv.find("\n77,0," + std::to_string(mix_seed(77, 0)) + ","), std::string::npos);
    EXPECT_NE(report_json(report).find("\"seed\": 77"), std::string::npos);
}

TEST(Harness, RowErrorsAreRecorded)
{
    auto cfg = parse_experiment_config(R"({"sweeps": [
        {"name": "bad", "sides": [6], "bounds": "const:-inf:inf", "epsilon": 0.2, "trials": 100},
        {"name": "good", "kind": "completeness", "sides": [6], "bounds": "lipschitz:1", "trials": 100}]})");
    auto report = run_experiment(cfg);
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_FALSE(report.rows[0].pass);
    EXPECT_FALSE(report.rows[0].error.empty());
    EXPECT_TRUE(report.rows[1].pass);
    EXPECT_FALSE(report.all_passed());
}

} // namespace
} // namespace bdt
