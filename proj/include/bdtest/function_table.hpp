#pragma once

#include "bdtest/grid.hpp"

#include <span>
#include <vector>

namespace bdt {

// Explicit values of f : [n]^d -> [a, b], row-major.
class FunctionTable {
public:
    // Validates value count, finiteness, and a <= min f <= max f <= b.
    FunctionTable(HypergridDomain domain, std::vector<double> values, double range_lo, double range_hi);

    // Declared range is [min f, max f].
    static FunctionTable with_tight_range(HypergridDomain domain, std::vector<double> values);

    const HypergridDomain& domain() const { return domain_; }
    std::span<const double> values() const { return values_; }
    double range_lo() const { return lo_; }
    double range_hi() const { return hi_; }
    double range_width() const { return hi_ - lo_; }

    double at(std::size_t index) const { return values_[index]; }
    double at(const GridPoint& p) const { return values_[domain_.index_of(p)]; }
    double at(std::span<const int> coords) const { return values_[domain_.index_of(coords)]; }

    // True when every value is an integer; drives the choice of exact comparisons.
    bool is_integral() const;

    // f restricted to `line`, as a function on [n] with the same declared range.
    FunctionTable restrict_to_line(const AxisLine& line) const;

private:
    HypergridDomain domain_;
    std::vector<double> values_;
    double lo_;
    double hi_;
};

} // namespace bdt
