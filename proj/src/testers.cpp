#include "bdtest/testers.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace bdt {

namespace {

constexpr double kLn3 = 1.0986122886681098;

Tolerance tolerance_for(const FunctionOracle& f, const BoundingFamily& bounds)
{
    return f.integral() && bounds.is_integral() ? Tolerance::exact() : Tolerance::floating();
}

std::uint64_t checked_ceil(double value)
{
    require(std::isfinite(value) && value < 9.0e18, ErrorCode::capacity, "iteration count overflows");
    return static_cast<std::uint64_t>(std::ceil(value));
}

int max_gap_for(int n, double range_width, double min_upper)
{
    require(std::isfinite(min_upper) && min_upper > 0.0, ErrorCode::unsupported,
            "pair radius needs a finite positive minimum half width");
    require(std::isfinite(range_width) && range_width >= 0.0, ErrorCode::argument,
            "range width must be finite and >= 0");
    const double gap = std::floor(range_width / min_upper * (1.0 + 1e-12));
    return gap >= static_cast<double>(n - 1) ? n - 1 : static_cast<int>(gap);
}

// Per-dimension data for sampling one pair on a random line along that dimension.
struct LinePlan {
    std::vector<double> shift; // g - f at source coordinate x, entry x-1
    std::vector<double> half;  // sum of u' over [1, x), entry x-1
    std::unique_ptr<PairSet> pairs;
    std::vector<std::int64_t> cumulative; // bloated segments; empty for the identity map
};

class LineEngine {
public:
    LineEngine(const FunctionOracle& f, const BoundingFamily& bounds, const ProductDistribution* dist)
        : f_(f), dims_(f.domain().dims()), tol_(tolerance_for(f, bounds))
    {
        require(f.domain() == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
        require(bounds.all_finite(), ErrorCode::unsupported,
                "the bounded-derivative tester needs finite bounds; use the monotonicity tester for l = 0, u = inf");
        if (dist != nullptr) {
            require(dist->side() == f.domain().side() && dist->dims() == dims_, ErrorCode::argument,
                    "distribution and function live on different grids");
            require(dist->denominator() <= (std::int64_t{1} << 31), ErrorCode::capacity,
                    "bloated side length N is too large to sample pairs");
        }
        const int n = f.domain().side();
        side_ = dist != nullptr ? dist->denominator() : n;

        for (int r = 1; r <= dims_; ++r) {
            LinePlan plan;
            plan.shift = symmetrization_shift(bounds, r);
            plan.half.assign(static_cast<std::size_t>(n), 0.0);
            double min_half = std::numeric_limits<double>::infinity();
            for (int t = 1; t < n; ++t) {
                const double h = (bounds.upper(r, t) - bounds.lower(r, t)) / 2.0;
                min_half = std::min(min_half, h);
                plan.half[static_cast<std::size_t>(t)] = plan.half[static_cast<std::size_t>(t - 1)] + h;
            }
            const auto [lo, hi] = std::minmax_element(plan.shift.begin(), plan.shift.end());
            const double range = f.range_width() + (*hi - *lo);
            const int gap = n > 1 ? max_gap_for(n, range, min_half) : 0;
            if (dist != nullptr) {
                const auto cum = dist->cumulative(r);
                plan.cumulative.assign(cum.begin(), cum.end());
                plan.pairs = std::make_unique<SegmentPairSet>(plan.cumulative, gap);
            } else {
                plan.pairs = std::make_unique<LinePairSet>(LinePairSet::with_max_gap(n, gap));
            }
            plans_.push_back(std::move(plan));
        }
        x_.resize(static_cast<std::size_t>(dims_));
        y_.resize(static_cast<std::size_t>(dims_));
    }

    // One random line, one pair. Returns true on rejection.
    bool step(Rng& rng, Verdict& verdict)
    {
        const int dim = static_cast<int>(rng.below(static_cast<std::uint64_t>(dims_))) + 1;
        for (int r = 1; r <= dims_; ++r) {
            if (r == dim) continue;
            const int c = to_source(r, rng.between(1, side_));
            x_[static_cast<std::size_t>(r - 1)] = c;
            y_[static_cast<std::size_t>(r - 1)] = c;
        }
        const LinePlan& plan = plans_[static_cast<std::size_t>(dim - 1)];
        if (plan.pairs->size() == 0) return false;

        const auto [s, t] = plan.pairs->sample(rng);
        const int xs = to_source(dim, s);
        const int ys = to_source(dim, t);
        x_[static_cast<std::size_t>(dim - 1)] = xs;
        y_[static_cast<std::size_t>(dim - 1)] = ys;

        const double gx = f_.value(x_) + plan.shift[static_cast<std::size_t>(xs - 1)];
        const double gy = f_.value(y_) + plan.shift[static_cast<std::size_t>(ys - 1)];
        verdict.queries += 2;
        const double m = plan.half[static_cast<std::size_t>(ys - 1)] - plan.half[static_cast<std::size_t>(xs - 1)];
        const double vs = std::abs(gx - gy) - m;
        if (!tol_.positive(vs, std::max({std::abs(gx), std::abs(gy), m}))) return false;

        verdict.decision = Decision::reject;
        verdict.witness = Witness{GridPoint(x_), GridPoint(y_), vs};
        return true;
    }

private:
    int to_source(int dim, std::int64_t pos) const
    {
        const auto& cum = plans_[static_cast<std::size_t>(dim - 1)].cumulative;
        if (cum.empty()) return static_cast<int>(pos);
        return static_cast<int>(std::lower_bound(cum.begin() + 1, cum.end(), pos) - cum.begin());
    }

    const FunctionOracle& f_;
    int dims_;
    Tolerance tol_;
    std::int64_t side_ = 1;
    std::vector<LinePlan> plans_;
    std::vector<int> x_;
    std::vector<int> y_;
};

Verdict run_engine(LineEngine& engine, std::uint64_t iterations, Rng& rng, double epsilon, const char* name)
{
    Verdict verdict;
    verdict.planned_iterations = iterations;
    verdict.effective_epsilon = epsilon;
    verdict.tester = name;
    while (verdict.iterations < iterations) {
        ++verdict.iterations;
        if (engine.step(rng, verdict)) break;
    }
    return verdict;
}

int floor_log2(std::uint64_t v)
{
    return 63 - std::countl_zero(v);
}

} // namespace

void validate(const TesterConfig& cfg)
{
    require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, ErrorCode::argument, "epsilon must lie in (0, 1)");
    require(cfg.p == 1 || cfg.p == 2, ErrorCode::argument, "p must be 1 or 2");
    require(!cfg.trials || *cfg.trials >= 1, ErrorCode::argument, "trials must be >= 1");
    require(cfg.confidence > 0.0 && cfg.confidence < 1.0, ErrorCode::argument, "confidence must lie in (0, 1)");
}

LinePairSet::LinePairSet(int n, double range_width, double min_upper) : n_(n)
{
    require(n >= 1, ErrorCode::argument, "line length must be >= 1");
    gap_ = n > 1 ? max_gap_for(n, range_width, min_upper) : 0;
}

LinePairSet LinePairSet::with_max_gap(int n, int max_gap)
{
    require(n >= 1, ErrorCode::argument, "line length must be >= 1");
    require(max_gap >= 0, ErrorCode::argument, "maximum gap must be >= 0");
    LinePairSet set;
    set.n_ = n;
    set.gap_ = std::min(max_gap, n - 1);
    return set;
}

std::uint64_t LinePairSet::size() const
{
    const auto g = static_cast<std::uint64_t>(gap_);
    return g * static_cast<std::uint64_t>(n_) - g * (g + 1) / 2;
}

std::pair<std::int64_t, std::int64_t> LinePairSet::pair_at(std::uint64_t k) const
{
    require(k < size(), ErrorCode::argument, "pair index out of range");
    const auto g = static_cast<std::uint64_t>(gap_);
    const std::uint64_t full = (static_cast<std::uint64_t>(n_) - g) * g;
    if (k < full) {
        const auto x = static_cast<std::int64_t>(k / g) + 1;
        return {x, x + 1 + static_cast<std::int64_t>(k % g)};
    }
    // Tail sources x = n - g + i, i = 1..g-1, with g - i partners each.
    const std::uint64_t rest = k - full;
    const auto tail = [g](std::uint64_t i) { return i * g - i * (i + 1) / 2; };
    std::uint64_t lo = 1;
    std::uint64_t hi = g - 1;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (tail(mid) > rest) hi = mid;
        else lo = mid + 1;
    }
    const auto x = static_cast<std::int64_t>(static_cast<std::uint64_t>(n_) - g + lo);
    return {x, x + 1 + static_cast<std::int64_t>(rest - tail(lo - 1))};
}

LinePairSet line_pair_set(int n, double range_width, double min_upper)
{
    return LinePairSet(n, range_width, min_upper);
}

SegmentPairSet::SegmentPairSet(std::span<const std::int64_t> cumulative, int max_gap)
    : cumulative_(cumulative.begin(), cumulative.end())
{
    require(cumulative_.size() >= 2 && cumulative_.front() == 0, ErrorCode::argument,
            "cumulative masses must start at 0 and cover at least one segment");
    require(max_gap >= 0, ErrorCode::argument, "maximum gap must be >= 0");
    const auto n = static_cast<int>(cumulative_.size()) - 1;
    width_.assign(cumulative_.size(), 0);
    prefix_.assign(cumulative_.size(), 0);
    for (int j = 1; j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        require(cumulative_[ju] >= cumulative_[ju - 1], ErrorCode::argument, "cumulative masses must be nondecreasing");
        width_[ju] = cumulative_[static_cast<std::size_t>(std::min(j + max_gap, n))] - cumulative_[ju];
        const auto q = static_cast<std::uint64_t>(cumulative_[ju] - cumulative_[ju - 1]);
        prefix_[ju] = prefix_[ju - 1] + q * static_cast<std::uint64_t>(width_[ju]);
    }
}

std::pair<std::int64_t, std::int64_t> SegmentPairSet::pair_at(std::uint64_t k) const
{
    require(k < size(), ErrorCode::argument, "pair index out of range");
    const auto j = static_cast<std::size_t>(std::upper_bound(prefix_.begin() + 1, prefix_.end(), k) - prefix_.begin());
    const std::uint64_t rest = k - prefix_[j - 1];
    const auto w = static_cast<std::uint64_t>(width_[j]);
    return {cumulative_[j - 1] + 1 + static_cast<std::int64_t>(rest / w),
            cumulative_[j] + 1 + static_cast<std::int64_t>(rest % w)};
}

double bounds_ratio(const BoundingFamily& bounds)
{
    require(bounds.all_finite(), ErrorCode::unsupported, "the bound ratio needs finite bounds");
    if (bounds.domain().side() == 1) return 1.0;
    return bounds.max_half_width() / bounds.min_half_width();
}

std::uint64_t default_iterations(int dims, double epsilon, double ratio)
{
    require(dims >= 1, ErrorCode::argument, "dimension must be >= 1");
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::argument, "epsilon must lie in (0, 1)");
    require(ratio >= 1.0, ErrorCode::argument, "bound ratio must be >= 1");
    return checked_ceil(8.0 * ratio * dims * kLn3 / epsilon);
}

Verdict line_tester(const FunctionOracle& f, const BoundingFamily& bounds, Rng& rng)
{
    require(f.domain().dims() == 1, ErrorCode::argument, "the line tester runs on [n]^1");
    LineEngine engine(f, bounds, nullptr);
    return run_engine(engine, 1, rng, 0.0, "line");
}

Verdict hypergrid_tester(const FunctionOracle& f, const BoundingFamily& bounds, const TesterConfig& cfg, Rng& rng)
{
    validate(cfg);
    LineEngine engine(f, bounds, nullptr);
    const std::uint64_t t =
        cfg.trials.value_or(default_iterations(f.domain().dims(), cfg.epsilon, bounds_ratio(bounds)));
    return run_engine(engine, t, rng, cfg.epsilon, "hypergrid");
}

Verdict l2_tester(const FunctionOracle& f, const BoundingFamily& bounds, const TesterConfig& cfg, Rng& rng)
{
    validate(cfg);
    TesterConfig inner = cfg;
    inner.epsilon = cfg.epsilon * cfg.epsilon;
    inner.p = 1;
    Verdict verdict = hypergrid_tester(f, bounds, inner, rng);
    verdict.tester = "l2";
    return verdict;
}

Verdict product_tester(const FunctionOracle& f, const BoundingFamily& bounds, const ProductDistribution& dist,
                       const TesterConfig& cfg, Rng& rng)
{
    validate(cfg);
    LineEngine engine(f, bounds, &dist);
    const std::uint64_t t =
        cfg.trials.value_or(default_iterations(f.domain().dims(), cfg.epsilon, bounds_ratio(bounds)));
    return run_engine(engine, t, rng, cfg.epsilon, "product");
}

Verdict monotonicity_pair_tester(const FunctionOracle& f, Rng& rng)
{
    require(f.domain().dims() == 1, ErrorCode::argument, "the pair tester runs on [n]^1");
    Verdict verdict;
    verdict.tester = "monotonicity-pair";
    verdict.planned_iterations = 1;
    verdict.iterations = 1;
    const int n = f.domain().side();
    if (n == 1) return verdict;

    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(floor_log2(static_cast<std::uint64_t>(n - 1))) + 1));
    const int gap = 1 << k;
    const int x = static_cast<int>(rng.between(1, n - gap));
    const int xs[1] = {x};
    const int ys[1] = {x + gap};
    const double fx = f.value(xs);
    const double fy = f.value(ys);
    verdict.queries = 2;
    const Tolerance tol = f.integral() ? Tolerance::exact() : Tolerance::floating();
    if (tol.positive(fx - fy, std::max(std::abs(fx), std::abs(fy)))) {
        verdict.decision = Decision::reject;
        verdict.witness = Witness{GridPoint{x}, GridPoint{x + gap}, fx - fy};
    }
    return verdict;
}

Verdict monotonicity_hypergrid_tester(const FunctionOracle& f, const TesterConfig& cfg, Rng& rng)
{
    validate(cfg);
    const auto& dom = f.domain();
    const int n = dom.side();
    const int d = dom.dims();
    const double levels = n > 2 ? std::ceil(std::log2(static_cast<double>(n))) : 1.0;
    const std::uint64_t t = cfg.trials.value_or(checked_ceil(8.0 * d * kLn3 * levels / cfg.epsilon));
    const Tolerance tol = f.integral() ? Tolerance::exact() : Tolerance::floating();

    Verdict verdict;
    verdict.tester = "monotonicity-hypergrid";
    verdict.planned_iterations = t;
    verdict.effective_epsilon = cfg.epsilon;
    std::vector<int> x(static_cast<std::size_t>(d));
    std::vector<int> y(x.size());
    while (verdict.iterations < t) {
        ++verdict.iterations;
        const int dim = static_cast<int>(rng.below(static_cast<std::uint64_t>(d))) + 1;
        for (int r = 1; r <= d; ++r) {
            if (r == dim) continue;
            x[static_cast<std::size_t>(r - 1)] = y[static_cast<std::size_t>(r - 1)] = static_cast<int>(rng.between(1, n));
        }
        if (n == 1) continue;
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(floor_log2(static_cast<std::uint64_t>(n - 1))) + 1));
        const int gap = 1 << k;
        const int xs = static_cast<int>(rng.between(1, n - gap));
        x[static_cast<std::size_t>(dim - 1)] = xs;
        y[static_cast<std::size_t>(dim - 1)] = xs + gap;
        const double fx = f.value(x);
        const double fy = f.value(y);
        verdict.queries += 2;
        if (tol.positive(fx - fy, std::max(std::abs(fx), std::abs(fy)))) {
            verdict.decision = Decision::reject;
            verdict.witness = Witness{GridPoint(x), GridPoint(y), fx - fy};
            break;
        }
    }
    return verdict;
}

Verdict run_tester(const FunctionOracle& f, const BoundingFamily& bounds, const ProductDistribution* dist,
                   const TesterConfig& cfg)
{
    validate(cfg);
    TesterConfig inner = cfg;
    inner.p = 1;
    if (cfg.p == 2) inner.epsilon = cfg.epsilon * cfg.epsilon;
    Rng rng(cfg.seed);

    const bool weighted = dist != nullptr && !dist->is_uniform();
    Verdict verdict;
    if (bounds.is_monotone()) {
        require(!weighted, ErrorCode::unsupported,
                "monotone bounds under a non-uniform distribution are not supported by the testers");
        verdict = monotonicity_hypergrid_tester(f, inner, rng);
    } else if (weighted) {
        verdict = product_tester(f, bounds, *dist, inner, rng);
    } else {
        verdict = hypergrid_tester(f, bounds, inner, rng);
    }
    if (cfg.p == 2) verdict.tester = "l2-" + verdict.tester;
    return verdict;
}

} // namespace bdt
