#include "bdtest/harness.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bdt {

namespace {

std::pair<double, double> sampling_window(double lo, double hi, const MemberOptions& options)
{
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) {
        require(options.interval.has_value(), ErrorCode::argument,
                "both bounds are infinite on an edge; an explicit sampling interval is required");
        return *options.interval;
    }
    require(options.clamp_span > 0.0 && std::isfinite(options.clamp_span), ErrorCode::argument,
            "clamp span must be finite and positive");
    if (hi_inf) return {lo, lo + options.clamp_span};
    if (lo_inf) return {hi - options.clamp_span, hi};
    return {lo, hi};
}

double draw_increment(double lo, double hi, bool integral, Rng& rng)
{
    if (!integral) return rng.uniform(lo, hi);
    const double a = std::ceil(lo);
    const double b = std::floor(hi);
    require(a <= b, ErrorCode::argument, "integer mode needs an integer inside every bound interval");
    require(b - a < 9.0e15, ErrorCode::argument, "integer sampling interval is too wide");
    return a + static_cast<double>(rng.below(static_cast<std::uint64_t>(b - a) + 1));
}

std::size_t measured_points(const HypergridDomain& dom, const ProductDistribution* dist)
{
    if (dist == nullptr) return dom.size();
    const BloatedGrid bg(*dist);
    const BigInt size = bg.target_size();
    if (size > BigInt(std::numeric_limits<std::size_t>::max())) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(size);
}

double oracle_distance(const FunctionTable& f, const BoundingFamily& bounds, const FarOptions& options)
{
    DistanceOptions d;
    d.max_points = options.oracle_cap;
    return options.dist != nullptr ? l1_distance(f, bounds, *options.dist, d).distance : l1_distance(f, bounds, d).distance;
}

} // namespace

FunctionTable gen_member(const BoundingFamily& bounds, Rng& rng, const MemberOptions& options)
{
    const auto& dom = bounds.domain();
    const int n = dom.side();
    const int d = dom.dims();
    std::vector<std::vector<double>> psi(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int r = 1; r <= d; ++r) {
        auto& row = psi[static_cast<std::size_t>(r - 1)];
        for (int t = 1; t < n; ++t) {
            const auto [lo, hi] = sampling_window(bounds.lower(r, t), bounds.upper(r, t), options);
            row[static_cast<std::size_t>(t)] = row[static_cast<std::size_t>(t - 1)] + draw_increment(lo, hi, options.integral, rng);
        }
    }
    std::vector<double> values(dom.size());
    std::vector<int> x(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < dom.size(); ++i) {
        dom.coords_at(i, x);
        double v = 0.0;
        for (int r = 0; r < d; ++r) v += psi[static_cast<std::size_t>(r)][static_cast<std::size_t>(x[static_cast<std::size_t>(r)] - 1)];
        values[i] = v;
    }
    return FunctionTable::with_tight_range(dom, std::move(values));
}

const char* far_method_name(FarMethod method)
{
    switch (method) {
    case FarMethod::unmodified: return "unmodified";
    case FarMethod::oracle: return "oracle";
    case FarMethod::heuristic: return "heuristic";
    }
    return "unknown";
}

FarInstance gen_far(const BoundingFamily& bounds, double target, Rng& rng, const FarOptions& options)
{
    require(target >= 0.0 && target < 1.0, ErrorCode::argument, "target distance must lie in [0, 1)");
    require(options.spike_scale > 0.0 && std::isfinite(options.spike_scale), ErrorCode::argument,
            "spike scale must be finite and positive");
    const auto& dom = bounds.domain();
    if (options.dist != nullptr)
        require(options.dist->side() == dom.side() && options.dist->dims() == dom.dims(), ErrorCode::argument,
                "distribution and bounds live on different grids");

    require(options.attempts >= 1, ErrorCode::argument, "at least one generation attempt is needed");
    const bool exact = measured_points(dom, options.dist) <= options.oracle_cap;
    double best = 0.0;
    std::size_t budget = 0;
    bool ranged = false;
    std::vector<int> x(static_cast<std::size_t>(dom.dims()));
    for (std::size_t attempt = 0; attempt < options.attempts; ++attempt) {
        FunctionTable base = gen_member(bounds, rng, options.member);
        if (target == 0.0) {
            FarInstance out{std::move(base), std::nullopt, FarMethod::unmodified, 0};
            if (exact) out.measured = 0.0;
            return out;
        }

        const double a = base.range_lo();
        const double b = base.range_hi();
        const double r = b - a;
        if (r <= 0.0) continue;
        ranged = true;
        const double delta = options.spike_scale * r;

        std::vector<double> values(base.values().begin(), base.values().end());
        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        budget = options.max_spikes == 0 ? values.size() : std::min(options.max_spikes, values.size());

        double planted = 0.0;
        const int flip = static_cast<int>(rng.below(2));
        for (std::size_t k = 0; k < budget; ++k) {
            std::swap(order[k], order[k + rng.below(values.size() - k)]);
            const std::size_t i = order[k];
            const double v = values[i];
            dom.coords_at(i, x);
            const int parity = std::accumulate(x.begin(), x.end(), 0) & 1;
            const double sign = (parity ^ flip) == 0 ? 1.0 : -1.0;
            const double nv = std::clamp(v + sign * delta, a, b);
            values[i] = nv;

            FunctionTable f(dom, values, a, b);
            if (exact) {
                const double eps = oracle_distance(f, bounds, options);
                best = std::max(best, eps);
                if (eps >= target) return {std::move(f), eps, FarMethod::oracle, k + 1};
            } else {
                double weight = 1.0 / static_cast<double>(dom.size());
                if (options.dist != nullptr) {
                    weight = 1.0;
                    for (int r2 = 1; r2 <= dom.dims(); ++r2)
                        weight *= static_cast<double>(options.dist->mass(r2, x[static_cast<std::size_t>(r2 - 1)])) /
                                  static_cast<double>(options.dist->denominator());
                }
                planted += std::abs(nv - v) * weight / r;
                best = std::max(best, planted);
                if (planted >= target) return {std::move(f), std::nullopt, FarMethod::heuristic, k + 1};
            }
        }
    }
    require(ranged, ErrorCode::generation, "every member drawn was constant, so spikes have no room inside its range");
    std::ostringstream msg;
    msg << "could not reach distance " << target << " within " << budget << " spikes over " << options.attempts
        << " attempts; best achieved " << best;
    fail(ErrorCode::generation, msg.str());
}

RejectionEstimate estimate_rejection(const std::function<bool(Rng&)>& single_shot, std::uint64_t trials,
                                     std::uint64_t seed)
{
    require(trials >= 100, ErrorCode::argument, "rejection estimates need at least 100 trials");
    RejectionEstimate est;
    est.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng(mix_seed(seed, i));
        if (single_shot(rng)) ++est.rejections;
    }
    est.rate = static_cast<double>(est.rejections) / static_cast<double>(trials);
    est.wilson = wilson_interval(est.rejections, trials);
    return est;
}

double predicted_rejection_bound(double epsilon, int dims, double ratio)
{
    require(dims >= 1 && ratio >= 1.0 && epsilon >= 0.0, ErrorCode::argument, "invalid bound parameters");
    return dims == 1 ? epsilon / (4.0 * ratio) : epsilon / (8.0 * dims * ratio);
}

} // namespace bdt
