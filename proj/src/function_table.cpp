#include "bdtest/function_table.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <cmath>

namespace bdt {

FunctionTable::FunctionTable(HypergridDomain domain, std::vector<double> values, double range_lo,
                             double range_hi)
    : domain_(domain), values_(std::move(values)), lo_(range_lo), hi_(range_hi)
{
    require(values_.size() == domain_.size(), ErrorCode::argument,
            "function table needs exactly n^d values");
    require(std::isfinite(lo_) && std::isfinite(hi_) && lo_ <= hi_, ErrorCode::argument,
            "function range [a, b] must be finite with a <= b");
    for (double v : values_) {
        require(std::isfinite(v), ErrorCode::argument, "function values must be finite");
        require(v >= lo_ && v <= hi_, ErrorCode::argument, "function value outside the declared range [a, b]");
    }
}

FunctionTable FunctionTable::with_tight_range(HypergridDomain domain, std::vector<double> values)
{
    require(!values.empty(), ErrorCode::argument, "function table needs exactly n^d values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double a = *lo;
    const double b = *hi;
    return FunctionTable(domain, std::move(values), a, b);
}

bool FunctionTable::is_integral() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == std::floor(v); });
}

FunctionTable FunctionTable::restrict_to_line(const AxisLine& line) const
{
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(domain_.side()));
    for (int t = 1; t <= domain_.side(); ++t) vals.push_back(values_[line.index_of(domain_, t)]);
    return FunctionTable(HypergridDomain(domain_.side(), 1), std::move(vals), lo_, hi_);
}

} // namespace bdt
