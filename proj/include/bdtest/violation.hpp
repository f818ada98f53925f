#pragma once

// Violation scores, violation graphs, and exact L1 distances to P(B) through
// maximum-weight matching. Distances from the structural checks are unnormalized
// sums; only l1_distance normalizes (divide by range width and point count).

#include "bdtest/bounds.hpp"
#include "bdtest/distributions.hpp"
#include "bdtest/matching.hpp"

#include <optional>
#include <span>

namespace bdt {

inline constexpr std::size_t kDefaultGraphCap = 4096;

// max{f(x) - f(y) - m(x,y), f(y) - f(x) - m(y,x)}; positive iff the pair is violated.
double violation_score(const FunctionTable& f, const Quasimetric& m, const GridPoint& x, const GridPoint& y);

struct ViolationGraph {
    HypergridDomain domain;
    std::vector<WeightedEdge> edges; // vertices are linear point indices, u < v

    bool empty() const { return edges.empty(); }
};

// Scans all pairs. Throws ErrorCode::capacity when n^d exceeds max_points.
ViolationGraph build_violation_graph(const FunctionTable& f, const Quasimetric& m, Tolerance tol,
                                     std::size_t max_points = kDefaultGraphCap);
ViolationGraph build_violation_graph(const FunctionTable& f, const BoundingFamily& bounds,
                                     std::size_t max_points = kDefaultGraphCap);

Matching max_weight_matching(const ViolationGraph& graph, MatchingOptions options = {});

// Number of violated unordered pairs.
std::size_t count_violated_pairs(const FunctionTable& f, const Quasimetric& m, Tolerance tol);

struct DistanceOptions {
    MatchingOptions matching;
    std::size_t max_points = kDefaultGraphCap;
    std::optional<Tolerance> tolerance; // default: exact for integral inputs
};

struct DistanceResult {
    double distance = 0.0;        // normalized: vs(M) / (r * point count)
    double matching_weight = 0.0; // vs(M)
    double point_count = 0.0;     // n^d, or N^d on the bloated grid
    double range_width = 0.0;
    Matching matching;
    HypergridDomain evaluated_domain{1, 1};
};

// Uniform distribution. Throws ErrorCode::degenerate_range when r = 0 and f is not in P.
DistanceResult l1_distance(const FunctionTable& f, const BoundingFamily& bounds, const DistanceOptions& options = {});
// Product distribution, computed on the bloated grid with f_ext and m_ext.
DistanceResult l1_distance(const FunctionTable& f, const BoundingFamily& bounds, const ProductDistribution& dist,
                           const DistanceOptions& options = {});

// min over nondecreasing g of sum_x w(x) |f(x) - g(x)| on a line, unnormalized.
// Throws ErrorCode::unsupported for d > 1.
double isotonic_l1_oracle(const FunctionTable& f, std::span<const double> weights);
double isotonic_l1_oracle(const FunctionTable& f);

struct DimensionReductionReport {
    bool passed = false;
    double line_sum = 0.0;    // sum over all axis lines of vs(M_line)
    double full_weight = 0.0; // vs(M) on the whole grid
    double margin = 0.0;      // line_sum - full_weight / 2
};

DimensionReductionReport dimension_reduction_check(const FunctionTable& f, const BoundingFamily& bounds,
                                                   const DistanceOptions& options = {});

struct NoCrossPairReport {
    bool passed = false;
    double unrestricted = 0.0;
    double restricted = 0.0; // matching forbidden from using dim-cross pairs
};

// Requires that no pair on a dim-line is violated (ErrorCode::precondition otherwise).
NoCrossPairReport no_cross_pair_check(const FunctionTable& f, const BoundingFamily& bounds, int dim,
                                      const DistanceOptions& options = {});

} // namespace bdt
