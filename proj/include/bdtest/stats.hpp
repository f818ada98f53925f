#pragma once

#include <cstdint>
#include <span>

namespace bdt {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for `successes` out of `trials` Bernoulli draws.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept. Needs >= 2 distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace bdt
