#include "bdtest/matching.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace bdt {

namespace {

struct DisjointSets {
    std::vector<std::uint32_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }

    std::uint32_t find(std::uint32_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

namespace detail {

Matching bitmask_component(int k, std::span<const WeightedEdge> edges)
{
    require(k <= kBitmaskCapacity, ErrorCode::capacity,
            "bitmask matching supports at most " + std::to_string(kBitmaskCapacity) +
                " vertices per component, got " + std::to_string(k));
    Matching result;
    if (k < 2 || edges.empty()) return result;

    const auto kk = static_cast<std::size_t>(k);
    std::vector<double> w(kk * kk, 0.0);
    std::vector<std::uint32_t> adj(kk, 0);
    for (const auto& e : edges) {
        w[e.u * kk + e.v] = w[e.v * kk + e.u] = e.weight;
        adj[e.u] |= 1u << e.v;
        adj[e.v] |= 1u << e.u;
    }

    const std::uint32_t full = k == 32 ? ~0u : ((1u << k) - 1u);
    std::vector<double> best(static_cast<std::size_t>(full) + 1, 0.0);
    std::vector<std::uint8_t> card(best.size(), 0);

    // best[mask]: heaviest matching inside `mask`, ties toward fewer edges.
    // The lowest vertex of the mask is either unmatched or matched to a neighbour.
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int low = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1);
        double b = best[rest];
        std::uint8_t c = card[rest];
        for (std::uint32_t cand = adj[static_cast<std::size_t>(low)] & rest; cand; cand &= cand - 1) {
            const int j = std::countr_zero(cand);
            const std::uint32_t sub = rest & ~(1u << j);
            const double value = w[static_cast<std::size_t>(low) * kk + static_cast<std::size_t>(j)] + best[sub];
            const auto cc = static_cast<std::uint8_t>(card[sub] + 1);
            if (value > b || (value == b && cc < c)) {
                b = value;
                c = cc;
            }
        }
        best[mask] = b;
        card[mask] = c;
        if (mask == full) break;
    }

    // Replay the decisions from the full set.
    std::uint32_t mask = full;
    while (mask) {
        const int low = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1);
        if (best[rest] == best[mask] && card[rest] == card[mask]) {
            mask = rest;
            continue;
        }
        bool found = false;
        for (std::uint32_t cand = adj[static_cast<std::size_t>(low)] & rest; cand; cand &= cand - 1) {
            const int j = std::countr_zero(cand);
            const std::uint32_t sub = rest & ~(1u << j);
            const double weight = w[static_cast<std::size_t>(low) * kk + static_cast<std::size_t>(j)];
            if (weight + best[sub] == best[mask] && card[sub] + 1 == card[mask]) {
                result.edges.push_back({static_cast<std::uint32_t>(low), static_cast<std::uint32_t>(j), weight});
                mask = sub;
                found = true;
                break;
            }
        }
        require(found, ErrorCode::internal, "bitmask matching reconstruction failed");
    }
    return result;
}

Matching blossom_component(int k, std::span<const WeightedEdge> edges)
{
    Matching result;
    if (k < 2 || edges.empty()) return result;

    // Rescale to integers w*2^s and then to K*w*2^s - 1 with K > k/2, so that a
    // heavier matching always wins and equal weights prefer fewer edges.
    double wmax = 0.0;
    for (const auto& e : edges) wmax = std::max(wmax, e.weight);
    const double K = std::floor(k / 2.0) + 1.0;
    int shift = -1;
    for (int s = 0; s <= 30; ++s) {
        const double scale = std::ldexp(1.0, s);
        if (wmax * scale * K * k >= std::ldexp(1.0, 50)) break;
        bool ok = true;
        for (const auto& e : edges) {
            const double v = e.weight * scale;
            if (v != std::floor(v)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            shift = s;
            break;
        }
    }

    std::vector<WeightedEdge> solve_edges(edges.begin(), edges.end());
    if (shift >= 0) {
        const double scale = std::ldexp(1.0, shift);
        for (auto& e : solve_edges) e.weight = e.weight * scale * K - 1.0;
    }

    const auto mates = blossom_mates(k, solve_edges);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> weight_of;
    for (const auto& e : edges) weight_of[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.weight;
    for (int v = 0; v < k; ++v) {
        const int m = mates[static_cast<std::size_t>(v)];
        if (m > v) {
            const auto key = std::make_pair(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(m));
            result.edges.push_back({key.first, key.second, weight_of.at(key)});
        }
    }
    return result;
}

} // namespace detail

Matching max_weight_matching(std::size_t vertex_count, std::span<const WeightedEdge> edges, MatchingOptions options)
{
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> unique;
    for (const auto& e : edges) {
        require(e.u < vertex_count && e.v < vertex_count, ErrorCode::argument, "edge endpoint out of range");
        require(e.u != e.v, ErrorCode::argument, "self-loops are not allowed in a matching instance");
        require(!std::isnan(e.weight), ErrorCode::argument, "edge weights may not be NaN");
        if (!(e.weight > 0.0)) continue;
        require(std::isfinite(e.weight), ErrorCode::argument, "edge weights must be finite");
        const auto key = std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
        auto [it, inserted] = unique.emplace(key, e.weight);
        if (!inserted) it->second = std::max(it->second, e.weight);
    }

    DisjointSets sets(vertex_count);
    for (const auto& [key, w] : unique) sets.unite(key.first, key.second);

    // Group edges by component root; components are visited by smallest vertex.
    std::map<std::uint32_t, std::vector<WeightedEdge>> by_root;
    for (const auto& [key, w] : unique) by_root[sets.find(key.first)].push_back({key.first, key.second, w});

    Matching result;
    for (auto& [root, comp_edges] : by_root) {
        std::vector<std::uint32_t> local_to_global;
        std::map<std::uint32_t, std::uint32_t> global_to_local;
        for (const auto& e : comp_edges)
            for (auto v : {e.u, e.v})
                if (global_to_local.emplace(v, 0).second) local_to_global.push_back(v);
        std::sort(local_to_global.begin(), local_to_global.end());
        for (std::uint32_t i = 0; i < local_to_global.size(); ++i) global_to_local[local_to_global[i]] = i;

        std::vector<WeightedEdge> local;
        local.reserve(comp_edges.size());
        for (const auto& e : comp_edges) local.push_back({global_to_local[e.u], global_to_local[e.v], e.weight});

        const int k = static_cast<int>(local_to_global.size());
        bool use_bitmask = false;
        switch (options.solver) {
        case MatchingSolver::bitmask: use_bitmask = true; break;
        case MatchingSolver::blossom: use_bitmask = false; break;
        case MatchingSolver::automatic: use_bitmask = k <= std::min(options.bitmask_threshold, kBitmaskCapacity); break;
        }
        const Matching part = use_bitmask ? detail::bitmask_component(k, local) : detail::blossom_component(k, local);
        for (const auto& e : part.edges) {
            const auto a = local_to_global[e.u];
            const auto b = local_to_global[e.v];
            result.edges.push_back({std::min(a, b), std::max(a, b), e.weight});
        }
    }

    std::sort(result.edges.begin(), result.edges.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    for (const auto& e : result.edges) result.weight += e.weight;
    return result;
}

} // namespace bdt
