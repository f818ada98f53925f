#include "bdtest/stats.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <cmath>

namespace bdt {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    require(trials >= 1, ErrorCode::argument, "Wilson interval needs at least one trial");
    require(successes <= trials, ErrorCode::argument, "successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size(), ErrorCode::argument, "x and y need the same length");
    require(x.size() >= 2, ErrorCode::argument, "a linear fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorCode::argument, "a linear fit needs two distinct x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace bdt
