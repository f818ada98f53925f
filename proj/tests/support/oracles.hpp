#pragma once

// Brute-force reference implementations used only by tests. Each one computes
// its answer by a different route from the library code it checks.

#include "bdtest/bounds.hpp"
#include "bdtest/distributions.hpp"
#include "bdtest/function_table.hpp"
#include "bdtest/matching.hpp"
#include "bdtest/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace bdt::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// m(x, y) as all-pairs shortest paths on the directed grid graph with
// w(x -> x + e_r) = -l_r(x_r) and w(x + e_r -> x) = u_r(x_r).
inline std::vector<std::vector<double>> shortest_path_metric(const BoundingFamily& b)
{
    const auto& dom = b.domain();
    const std::size_t v = dom.size();
    std::vector<std::vector<double>> dist(v, std::vector<double>(v, kInf));
    for (std::size_t i = 0; i < v; ++i) dist[i][i] = 0.0;
    for (std::size_t i = 0; i < v; ++i) {
        const GridPoint x = dom.point_at(i);
        for (int r = 1; r <= dom.dims(); ++r) {
            if (x[r] == dom.side()) continue;
            GridPoint y = x;
            y[r] += 1;
            const std::size_t j = dom.index_of(y);
            dist[i][j] = std::min(dist[i][j], -b.lower(r, x[r]));
            dist[j][i] = std::min(dist[j][i], b.upper(r, x[r]));
        }
    }
    for (std::size_t k = 0; k < v; ++k)
        for (std::size_t i = 0; i < v; ++i) {
            if (dist[i][k] == kInf) continue;
            for (std::size_t j = 0; j < v; ++j) {
                if (dist[k][j] == kInf) continue;
                dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
            }
        }
    return dist;
}

// Coordinate-wise double sum, no prefix tables.
inline double naive_metric(const BoundingFamily& b, const GridPoint& x, const GridPoint& y)
{
    double total = 0.0;
    for (int r = 1; r <= x.dims(); ++r) {
        if (x[r] > y[r]) {
            for (int t = y[r]; t < x[r]; ++t) total += b.upper(r, t);
        } else {
            for (int t = x[r]; t < y[r]; ++t) total -= b.lower(r, t);
        }
    }
    return total;
}

inline double naive_score(const FunctionTable& f, const BoundingFamily& b, const GridPoint& x, const GridPoint& y)
{
    return std::max(f.at(x) - f.at(y) - naive_metric(b, x, y), f.at(y) - f.at(x) - naive_metric(b, y, x));
}

struct BruteMatching {
    double weight = 0.0;
    std::size_t edges = 0;
};

// Exhaustive search over all matchings; best weight, fewest edges among ties.
inline BruteMatching brute_force_matching(std::size_t vertices, const std::vector<WeightedEdge>& edges)
{
    std::vector<std::vector<double>> w(vertices, std::vector<double>(vertices, 0.0));
    for (const auto& e : edges) {
        if (e.weight <= 0.0) continue;
        w[e.u][e.v] = std::max(w[e.u][e.v], e.weight);
        w[e.v][e.u] = w[e.u][e.v];
    }
    std::vector<bool> used(vertices, false);
    BruteMatching best;
    bool have = false;
    const auto rec = [&](auto&& self, std::size_t i, double weight, std::size_t count) -> void {
        while (i < vertices && used[i]) ++i;
        if (i == vertices) {
            if (!have || weight > best.weight || (weight == best.weight && count < best.edges)) {
                best = {weight, count};
                have = true;
            }
            return;
        }
        used[i] = true;
        self(self, i + 1, weight, count);
        for (std::size_t j = i + 1; j < vertices; ++j) {
            if (used[j] || w[i][j] <= 0.0) continue;
            used[j] = true;
            self(self, i + 1, weight + w[i][j], count + 1);
            used[j] = false;
        }
        used[i] = false;
    };
    rec(rec, 0, 0.0, 0);
    return best;
}

// min over g with l <= g(t+1) - g(t) <= u of sum_t w(t) |f(t) - g(t)|, for
// integer f and integer (or infinite) bounds on a line, by DP over integer g values.
inline double line_l1_dp(const FunctionTable& f, const BoundingFamily& b, const std::vector<double>& weights)
{
    const int n = f.domain().side();
    double span = 0.0;
    for (int t = 1; t < n; ++t) {
        if (std::isfinite(b.lower(1, t))) span = std::max(span, std::abs(b.lower(1, t)));
        if (std::isfinite(b.upper(1, t))) span = std::max(span, std::abs(b.upper(1, t)));
    }
    const auto vals = f.values();
    const double lo = *std::min_element(vals.begin(), vals.end()) - span * n;
    const double hi = *std::max_element(vals.begin(), vals.end()) + span * n;
    const auto width = static_cast<std::size_t>(hi - lo) + 1;

    std::vector<double> cost(width);
    for (std::size_t v = 0; v < width; ++v) cost[v] = weights[0] * std::abs(vals[0] - (lo + static_cast<double>(v)));
    for (int t = 1; t < n; ++t) {
        std::vector<double> next(width, kInf);
        const double l = b.lower(1, t);
        const double u = b.upper(1, t);
        for (std::size_t v = 0; v < width; ++v) {
            double best = kInf;
            for (std::size_t w = 0; w < width; ++w) {
                const double step = static_cast<double>(v) - static_cast<double>(w);
                if (step < l || step > u) continue;
                best = std::min(best, cost[w]);
            }
            if (best < kInf)
                next[v] = best + weights[static_cast<std::size_t>(t)] * std::abs(vals[static_cast<std::size_t>(t)] - (lo + static_cast<double>(v)));
        }
        cost = std::move(next);
    }
    return *std::min_element(cost.begin(), cost.end());
}

inline double line_l1_dp(const FunctionTable& f, const BoundingFamily& b)
{
    return line_l1_dp(f, b, std::vector<double>(f.values().size(), 1.0));
}

// Random integer bounds with l < u in [-3, 3]; with `infinite`, some entries
// become -inf / +inf.
inline BoundingFamily random_integer_bounds(const HypergridDomain& dom, Rng& rng, bool infinite = false)
{
    std::vector<std::vector<double>> lo(static_cast<std::size_t>(dom.dims()));
    std::vector<std::vector<double>> hi(lo.size());
    for (std::size_t r = 0; r < lo.size(); ++r) {
        for (int t = 1; t < dom.side(); ++t) {
            const auto l = static_cast<double>(rng.between(-3, 2));
            const auto u = static_cast<double>(rng.between(static_cast<std::int64_t>(l) + 1, 3));
            lo[r].push_back(infinite && rng.below(4) == 0 ? -kInf : l);
            hi[r].push_back(infinite && rng.below(4) == 0 ? kInf : u);
        }
    }
    return BoundingFamily(dom, std::move(lo), std::move(hi));
}

inline FunctionTable random_integer_function(const HypergridDomain& dom, Rng& rng, int lo, int hi)
{
    std::vector<double> values(dom.size());
    for (auto& v : values) v = static_cast<double>(rng.between(lo, hi));
    return FunctionTable(dom, std::move(values), lo, hi);
}

// One of: monotone, lipschitz:c, constant l:u, random finite, random with infinities.
inline BoundingFamily random_mixed_bounds(const HypergridDomain& dom, Rng& rng)
{
    switch (rng.below(5)) {
    case 0: return BoundingFamily::monotone(dom);
    case 1: return BoundingFamily::lipschitz(dom, static_cast<double>(rng.between(1, 3)));
    case 2: {
        const auto l = static_cast<double>(rng.between(-2, 1));
        return BoundingFamily::constant(dom, l, l + static_cast<double>(rng.between(1, 3)));
    }
    case 3: return random_integer_bounds(dom, rng, false);
    default: return random_integer_bounds(dom, rng, true);
    }
}

// Masses from `total` balls thrown per row; retried until N <= max_total.
inline ProductDistribution random_distribution(Rng& rng, int n, int d, std::int64_t max_total)
{
    for (;;) {
        std::vector<std::vector<std::int64_t>> q(static_cast<std::size_t>(d));
        const std::int64_t total = rng.between(1, max_total);
        for (auto& row : q) {
            row.assign(static_cast<std::size_t>(n), 0);
            for (std::int64_t k = 0; k < total; ++k) ++row[rng.below(static_cast<std::uint64_t>(n))];
        }
        ProductDistribution dist(n, q);
        if (dist.denominator() <= max_total) return dist;
    }
}

} // namespace bdt::testing
