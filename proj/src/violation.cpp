#include "bdtest/violation.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bdt {

namespace {

// Flat coordinate table for all points of a domain, row-major.
std::vector<int> coordinate_table(const HypergridDomain& dom)
{
    const auto d = static_cast<std::size_t>(dom.dims());
    std::vector<int> coords(dom.size() * d);
    for (std::size_t i = 0; i < dom.size(); ++i) dom.coords_at(i, std::span<int>(coords.data() + i * d, d));
    return coords;
}

double pair_score(double fx, double fy, double mxy, double myx)
{
    return std::max(fx - fy - mxy, fy - fx - myx);
}

double pair_scale(double fx, double fy, double mxy, double myx)
{
    double s = std::max(std::abs(fx), std::abs(fy));
    if (std::isfinite(mxy)) s = std::max(s, std::abs(mxy));
    if (std::isfinite(myx)) s = std::max(s, std::abs(myx));
    return s;
}

double matching_weight(const FunctionTable& f, const Quasimetric& m, Tolerance tol, const DistanceOptions& options)
{
    return max_weight_matching(build_violation_graph(f, m, tol, options.max_points), options.matching).weight;
}

} // namespace

double violation_score(const FunctionTable& f, const Quasimetric& m, const GridPoint& x, const GridPoint& y)
{
    require(f.domain() == m.domain(), ErrorCode::argument, "function and metric live on different grids");
    require(x != y, ErrorCode::argument, "violation score needs two distinct points");
    const double fx = f.at(x);
    const double fy = f.at(y);
    return pair_score(fx, fy, m(x, y), m(y, x));
}

ViolationGraph build_violation_graph(const FunctionTable& f, const Quasimetric& m, Tolerance tol,
                                     std::size_t max_points)
{
    const auto& dom = f.domain();
    require(dom == m.domain(), ErrorCode::argument, "function and metric live on different grids");
    require(dom.size() <= max_points, ErrorCode::capacity,
            "violation graph scan limited to " + std::to_string(max_points) + " points, grid has " +
                std::to_string(dom.size()));

    const auto d = static_cast<std::size_t>(dom.dims());
    const auto coords = coordinate_table(dom);
    ViolationGraph graph{dom, {}};
    for (std::size_t i = 0; i < dom.size(); ++i) {
        const std::span<const int> x(coords.data() + i * d, d);
        const double fx = f.at(i);
        for (std::size_t j = i + 1; j < dom.size(); ++j) {
            const std::span<const int> y(coords.data() + j * d, d);
            const double fy = f.at(j);
            const double mxy = m(x, y);
            const double myx = m(y, x);
            const double vs = pair_score(fx, fy, mxy, myx);
            if (!tol.positive(vs, pair_scale(fx, fy, mxy, myx))) continue;
            require(std::isfinite(vs), ErrorCode::internal, "violation score of a violated pair must be finite");
            graph.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), vs});
        }
    }
    return graph;
}

ViolationGraph build_violation_graph(const FunctionTable& f, const BoundingFamily& bounds, std::size_t max_points)
{
    return build_violation_graph(f, bounds, tolerance_for(f, bounds), max_points);
}

Matching max_weight_matching(const ViolationGraph& graph, MatchingOptions options)
{
    return max_weight_matching(graph.domain.size(), graph.edges, options);
}

std::size_t count_violated_pairs(const FunctionTable& f, const Quasimetric& m, Tolerance tol)
{
    return build_violation_graph(f, m, tol, std::numeric_limits<std::size_t>::max()).edges.size();
}

DistanceResult l1_distance(const FunctionTable& f, const BoundingFamily& bounds, const DistanceOptions& options)
{
    require(f.domain() == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    const Tolerance tol = options.tolerance.value_or(tolerance_for(f, bounds));
    const auto graph = build_violation_graph(f, bounds, tol, options.max_points);

    DistanceResult out;
    out.evaluated_domain = f.domain();
    out.range_width = f.range_width();
    out.point_count = static_cast<double>(f.domain().size());
    out.matching = max_weight_matching(graph, options.matching);
    out.matching_weight = out.matching.weight;
    if (out.range_width == 0.0) {
        require(graph.empty(), ErrorCode::degenerate_range,
                "range width b - a is 0 but f violates the property; the normalized distance is undefined");
        return out;
    }
    out.distance = out.matching_weight / (out.range_width * out.point_count);
    return out;
}

DistanceResult l1_distance(const FunctionTable& f, const BoundingFamily& bounds, const ProductDistribution& dist,
                           const DistanceOptions& options)
{
    require(f.domain() == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    require(dist.side() == f.domain().side() && dist.dims() == f.domain().dims(), ErrorCode::argument,
            "distribution and function live on different grids");
    const Tolerance tol = options.tolerance.value_or(tolerance_for(f, bounds));
    const BloatedGrid bg(dist);
    const FunctionTable fext = extend_function(f, bg, options.max_points);
    const ExtendedMetric mext(bounds, bg);
    const auto graph = build_violation_graph(fext, mext, tol, options.max_points);

    DistanceResult out;
    out.evaluated_domain = fext.domain();
    out.range_width = f.range_width();
    out.point_count = static_cast<double>(fext.domain().size());
    out.matching = max_weight_matching(graph, options.matching);
    out.matching_weight = out.matching.weight;
    if (out.range_width == 0.0) {
        require(graph.empty(), ErrorCode::degenerate_range,
                "range width b - a is 0 but f violates the property; the normalized distance is undefined");
        return out;
    }
    out.distance = out.matching_weight / (out.range_width * out.point_count);
    return out;
}

double isotonic_l1_oracle(const FunctionTable& f, std::span<const double> weights)
{
    require(f.domain().dims() == 1, ErrorCode::unsupported, "the isotonic oracle works on a single line");
    const auto vals = f.values();
    require(weights.size() == vals.size(), ErrorCode::argument, "one weight per point is required");
    for (double w : weights) require(w >= 0.0 && std::isfinite(w), ErrorCode::argument, "weights must be finite and >= 0");

    // Some optimal fit only takes values of f, so a DP over the sorted
    // candidate values with a running prefix minimum is exact.
    std::vector<double> cand(vals.begin(), vals.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<double> cost(cand.size(), 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double running = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cand.size(); ++j) {
            running = std::min(running, cost[j]);
            cost[j] = running + weights[i] * std::abs(vals[i] - cand[j]);
        }
    }
    return *std::min_element(cost.begin(), cost.end());
}

double isotonic_l1_oracle(const FunctionTable& f)
{
    const std::vector<double> ones(f.values().size(), 1.0);
    return isotonic_l1_oracle(f, ones);
}

DimensionReductionReport dimension_reduction_check(const FunctionTable& f, const BoundingFamily& bounds,
                                                   const DistanceOptions& options)
{
    require(f.domain() == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    const Tolerance tol = options.tolerance.value_or(tolerance_for(f, bounds));
    const auto& dom = f.domain();

    DimensionReductionReport report;
    for (int r = 1; r <= dom.dims(); ++r) {
        const BoundingFamily line_bounds = bounds.restrict_to_dim(r);
        for (const auto& line : iter_lines(dom, r))
            report.line_sum += matching_weight(f.restrict_to_line(line), line_bounds, tol, options);
    }
    report.full_weight = matching_weight(f, bounds, tol, options);
    report.margin = report.line_sum - report.full_weight / 2.0;
    report.passed = tol.less_equal(report.full_weight / 2.0, report.line_sum);
    return report;
}

NoCrossPairReport no_cross_pair_check(const FunctionTable& f, const BoundingFamily& bounds, int dim,
                                      const DistanceOptions& options)
{
    const auto& dom = f.domain();
    require(dom == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    require(dim >= 1 && dim <= dom.dims(), ErrorCode::argument, "dimension index out of range");
    const Tolerance tol = options.tolerance.value_or(tolerance_for(f, bounds));

    const BoundingFamily line_bounds = bounds.restrict_to_dim(dim);
    for (const auto& line : iter_lines(dom, dim))
        require(build_violation_graph(f.restrict_to_line(line), line_bounds, tol, options.max_points).empty(),
                ErrorCode::precondition, "f has a violated pair along a line of the chosen dimension");

    const auto graph = build_violation_graph(f, bounds, tol, options.max_points);
    std::vector<WeightedEdge> kept;
    std::vector<int> a(static_cast<std::size_t>(dom.dims()));
    std::vector<int> b(a.size());
    for (const auto& e : graph.edges) {
        dom.coords_at(e.u, a);
        dom.coords_at(e.v, b);
        if (a[static_cast<std::size_t>(dim - 1)] == b[static_cast<std::size_t>(dim - 1)]) kept.push_back(e);
    }

    NoCrossPairReport report;
    report.unrestricted = max_weight_matching(graph, options.matching).weight;
    report.restricted = max_weight_matching(dom.size(), kept, options.matching).weight;
    report.passed = tol.equal(report.unrestricted, report.restricted);
    return report;
}

} // namespace bdt
