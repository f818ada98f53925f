#pragma once

// Exact maximum-weight matching on small general graphs.
//
// Two solvers share one contract: the returned matching has maximum total
// weight and, among maximum-weight matchings, the fewest edges.
//   - bitmask: dynamic program over vertex subsets, O(2^k k) per connected
//     component of k non-isolated vertices, k <= kBitmaskCapacity.
//   - blossom: Edmonds' primal-dual algorithm, O(V^3). The fewest-edges rule is
//     enforced by rescaling weights to K*w/q - 1 when every weight is a multiple
//     of a dyadic quantum q; otherwise only the weight is guaranteed maximal.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bdt {

inline constexpr int kBitmaskCapacity = 24;

struct WeightedEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double weight = 0.0;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct Matching {
    std::vector<WeightedEdge> edges; // u < v, sorted by (u, v)
    double weight = 0.0;

    std::size_t size() const { return edges.size(); }
};

enum class MatchingSolver { automatic, bitmask, blossom };

struct MatchingOptions {
    MatchingSolver solver = MatchingSolver::automatic;
    // automatic: components up to this many vertices use the bitmask DP.
    int bitmask_threshold = 16;
};

// Edges with non-positive weight are ignored. Parallel edges keep the heaviest.
// Throws ErrorCode::capacity when the bitmask solver is forced on a component
// with more than kBitmaskCapacity vertices.
Matching max_weight_matching(std::size_t vertex_count, std::span<const WeightedEdge> edges,
                             MatchingOptions options = {});

namespace detail {

// Solve one connected component whose vertices are already compacted to 0..k-1.
Matching bitmask_component(int k, std::span<const WeightedEdge> edges);
// mate[v] = partner or -1; `weights` must be positive.
std::vector<int> blossom_mates(int vertex_count, std::span<const WeightedEdge> edges);
Matching blossom_component(int k, std::span<const WeightedEdge> edges);

} // namespace detail

} // namespace bdt
