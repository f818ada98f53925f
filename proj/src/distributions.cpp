#include "bdtest/distributions.hpp"

#include "bdtest/error.hpp"
#include "bdtest/violation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace bdt {

namespace {

int segment_of(std::span<const std::int64_t> cumulative, std::int64_t t)
{
    // Smallest l with cumulative[l] >= t; cumulative[0] = 0.
    const auto it = std::lower_bound(cumulative.begin() + 1, cumulative.end(), t);
    return static_cast<int>(it - cumulative.begin());
}

} // namespace

ProductDistribution::ProductDistribution(int side, std::vector<std::vector<std::int64_t>> masses)
    : side_(side), masses_(std::move(masses))
{
    require(side >= 1, ErrorCode::argument, "distribution side length must be >= 1");
    require(!masses_.empty(), ErrorCode::argument, "distribution needs at least one dimension");

    std::int64_t lcm = 1;
    std::vector<std::int64_t> sums;
    for (const auto& row : masses_) {
        require(row.size() == static_cast<std::size_t>(side), ErrorCode::argument,
                "each distribution row needs n masses");
        std::int64_t sum = 0;
        for (auto q : row) {
            require(q >= 0, ErrorCode::argument, "masses must be non-negative integers");
            require(sum <= std::numeric_limits<std::int64_t>::max() - q, ErrorCode::capacity, "mass sum overflows");
            sum += q;
        }
        require(sum > 0, ErrorCode::argument, "each distribution row needs positive total mass");
        sums.push_back(sum);
        const std::int64_t g = std::gcd(lcm, sum);
        require(lcm / g <= std::numeric_limits<std::int64_t>::max() / sum, ErrorCode::capacity,
                "common denominator overflows");
        lcm = lcm / g * sum;
    }
    denominator_ = lcm;

    cumulative_.resize(masses_.size());
    for (std::size_t r = 0; r < masses_.size(); ++r) {
        const std::int64_t factor = lcm / sums[r];
        auto& cum = cumulative_[r];
        cum.assign(static_cast<std::size_t>(side) + 1, 0);
        for (std::size_t j = 0; j < masses_[r].size(); ++j) {
            masses_[r][j] *= factor;
            cum[j + 1] = cum[j] + masses_[r][j];
        }
    }
}

ProductDistribution ProductDistribution::uniform(const HypergridDomain& domain)
{
    return ProductDistribution(domain.side(),
                               std::vector<std::vector<std::int64_t>>(static_cast<std::size_t>(domain.dims()),
                                                                      std::vector<std::int64_t>(static_cast<std::size_t>(domain.side()), 1)));
}

bool ProductDistribution::is_uniform() const
{
    for (const auto& row : masses_)
        if (!std::all_of(row.begin(), row.end(), [&](std::int64_t q) { return q == row.front(); })) return false;
    return true;
}

Rational ProductDistribution::point_mass(const GridPoint& x) const
{
    require(x.dims() == dims(), ErrorCode::argument, "point has the wrong dimension");
    BigInt num = 1;
    BigInt den = 1;
    for (int r = 1; r <= dims(); ++r) {
        require(x[r] >= 1 && x[r] <= side_, ErrorCode::argument, "point is outside the grid");
        num *= mass(r, x[r]);
        den *= denominator_;
    }
    return Rational(num, den);
}

Rational mass(const ProductDistribution& dist, std::span<const GridPoint> points)
{
    const std::set<GridPoint> unique(points.begin(), points.end());
    Rational total = 0;
    for (const auto& x : unique) total += dist.point_mass(x);
    return total;
}

GridPoint sample(const ProductDistribution& dist, Rng& rng)
{
    GridPoint p;
    p.coords.reserve(static_cast<std::size_t>(dist.dims()));
    for (int r = 1; r <= dist.dims(); ++r) {
        const std::int64_t t = rng.between(1, dist.denominator());
        p.coords.push_back(segment_of(dist.cumulative(r), t));
    }
    return p;
}

BloatedGrid::BloatedGrid(ProductDistribution dist) : dist_(std::move(dist)) {}

HypergridDomain BloatedGrid::target_domain() const
{
    require(dist_.denominator() <= std::numeric_limits<int>::max(), ErrorCode::capacity,
            "bloated side length N does not fit a grid coordinate");
    return HypergridDomain(static_cast<int>(dist_.denominator()), dist_.dims());
}

BigInt BloatedGrid::target_size() const
{
    BigInt size = 1;
    for (int r = 0; r < dist_.dims(); ++r) size *= dist_.denominator();
    return size;
}

int BloatedGrid::phi(int dim, std::int64_t t) const
{
    require(dim >= 1 && dim <= dims(), ErrorCode::argument, "dimension index out of range");
    require(t >= 1 && t <= dist_.denominator(), ErrorCode::argument, "bloated coordinate out of range [1, N]");
    return segment_of(dist_.cumulative(dim), t);
}

void BloatedGrid::phi_into(std::span<const int> v, std::span<int> out) const
{
    for (std::size_t r = 0; r < v.size(); ++r) out[r] = phi(static_cast<int>(r) + 1, v[r]);
}

GridPoint BloatedGrid::phi(std::span<const int> v) const
{
    require(v.size() == static_cast<std::size_t>(dims()), ErrorCode::argument, "point has the wrong dimension");
    GridPoint p;
    p.coords.resize(v.size());
    phi_into(v, p.coords);
    return p;
}

std::pair<std::int64_t, std::int64_t> BloatedGrid::segment(int dim, int j) const
{
    require(j >= 1 && j <= source_side(), ErrorCode::argument, "segment index out of range");
    const auto cum = dist_.cumulative(dim);
    return {cum[static_cast<std::size_t>(j - 1)] + 1, cum[static_cast<std::size_t>(j)]};
}

BigInt BloatedGrid::preimage_size(const GridPoint& x) const
{
    BigInt size = 1;
    for (int r = 1; r <= dims(); ++r) size *= dist_.mass(r, x[r]);
    return size;
}

FunctionTable extend_function(const FunctionTable& f, const BloatedGrid& bg, std::size_t max_points)
{
    require(f.domain() == bg.source_domain(), ErrorCode::argument, "function and distribution live on different grids");
    require(bg.target_size() <= max_points, ErrorCode::capacity,
            "bloated grid has more points than the materialization cap");
    const HypergridDomain target = bg.target_domain();
    const auto d = static_cast<std::size_t>(target.dims());
    std::vector<int> v(d);
    std::vector<int> x(d);
    std::vector<double> values(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        target.coords_at(i, v);
        bg.phi_into(v, x);
        values[i] = f.at(x);
    }
    return FunctionTable(target, std::move(values), f.range_lo(), f.range_hi());
}

ExtendedMetric::ExtendedMetric(const BoundingFamily& bounds, const BloatedGrid& bg)
    : bounds_(&bounds), bg_(&bg), target_(bg.target_domain())
{
    require(bounds.domain() == bg.source_domain(), ErrorCode::argument,
            "bounds and distribution live on different grids");
}

double ExtendedMetric::operator()(std::span<const int> x, std::span<const int> y) const
{
    thread_local std::vector<int> px;
    thread_local std::vector<int> py;
    px.resize(x.size());
    py.resize(y.size());
    bg_->phi_into(x, px);
    bg_->phi_into(y, py);
    return (*bounds_)(px, py);
}

DistancePreservationReport distance_preservation_check(const FunctionTable& f, const BoundingFamily& bounds,
                                                       const ProductDistribution& dist, std::size_t max_points)
{
    DistanceOptions options;
    options.max_points = max_points;
    const auto ext = l1_distance(f, bounds, dist, options);
    const Tolerance tol = tolerance_for(f, bounds);

    DistancePreservationReport report;
    report.bloated = ext.matching_weight;
    report.distance_ext = ext.distance;
    if (f.domain().dims() == 1 && bounds.is_monotone()) {
        std::vector<double> weights;
        for (auto q : dist.masses(1)) weights.push_back(static_cast<double>(q));
        report.method = "weighted-isotonic";
        report.weighted = isotonic_l1_oracle(f, weights);
    } else {
        report.method = "bloated-mwm";
        report.weighted = ext.matching_weight;
    }
    const double r = f.range_width();
    report.distance_d = r > 0.0 ? report.weighted / (r * ext.point_count) : 0.0;
    report.passed = tol.equal(report.weighted, report.bloated);
    return report;
}

ProductDistribution rationalize(int side, const std::vector<std::vector<double>>& probabilities, double precision)
{
    require(precision > 0.0 && precision < 1.0, ErrorCode::argument, "precision must lie in (0, 1)");
    std::int64_t denom = 1;
    while (static_cast<double>(denom) * precision < 1.0) {
        require(denom <= std::numeric_limits<std::int64_t>::max() / 10, ErrorCode::capacity, "precision too fine");
        denom *= 10;
    }

    std::vector<std::vector<std::int64_t>> masses;
    for (const auto& row : probabilities) {
        require(row.size() == static_cast<std::size_t>(side), ErrorCode::argument, "each probability row needs n entries");
        double total = 0.0;
        for (double p : row) {
            require(std::isfinite(p) && p >= 0.0, ErrorCode::argument, "probabilities must be finite and >= 0");
            total += p;
        }
        require(total > 0.0, ErrorCode::argument, "probability row sums to zero");

        std::vector<std::int64_t> q(row.size());
        std::vector<std::pair<double, std::size_t>> remainders;
        std::int64_t assigned = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double exact = row[j] / total * static_cast<double>(denom);
            q[j] = static_cast<std::int64_t>(std::floor(exact));
            assigned += q[j];
            remainders.emplace_back(exact - static_cast<double>(q[j]), j);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t k = 0; assigned < denom && k < remainders.size(); ++k, ++assigned) ++q[remainders[k].second];
        masses.push_back(std::move(q));
    }
    return ProductDistribution(side, std::move(masses));
}

} // namespace bdt
