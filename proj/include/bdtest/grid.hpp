#pragma once

// Hypergrid geometry for [n]^d. Coordinates are 1-based: every coordinate of a
// point lies in [1, n]. Linear indices are row-major with the first coordinate
// most significant, so index 0 is (1,...,1) and index n^d - 1 is (n,...,n).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace bdt {

struct GridPoint {
    std::vector<int> coords;

    GridPoint() = default;
    explicit GridPoint(std::vector<int> c) : coords(std::move(c)) {}
    GridPoint(std::initializer_list<int> c) : coords(c) {}

    int dims() const { return static_cast<int>(coords.size()); }
    // 1-based dimension index, matching the coordinate convention.
    int operator[](int dim) const { return coords[static_cast<std::size_t>(dim - 1)]; }
    int& operator[](int dim) { return coords[static_cast<std::size_t>(dim - 1)]; }

    std::span<const int> view() const { return coords; }

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

std::string to_string(const GridPoint& p);

class HypergridDomain {
public:
    // Throws ErrorCode::argument for n < 1 or d < 1 and ErrorCode::capacity
    // when n^d does not fit in std::size_t.
    HypergridDomain(int side, int dims);

    int side() const { return side_; }
    int dims() const { return dims_; }
    std::size_t size() const { return size_; }

    // Stride of dimension `dim` (1-based) in the row-major layout.
    std::size_t stride(int dim) const { return strides_[static_cast<std::size_t>(dim - 1)]; }

    bool contains(std::span<const int> coords) const;
    bool contains(const GridPoint& p) const { return contains(p.view()); }

    std::size_t index_of(std::span<const int> coords) const;
    std::size_t index_of(const GridPoint& p) const { return index_of(p.view()); }
    GridPoint point_at(std::size_t index) const;
    void coords_at(std::size_t index, std::span<int> out) const;

    friend bool operator==(const HypergridDomain& a, const HypergridDomain& b)
    {
        return a.side_ == b.side_ && a.dims_ == b.dims_;
    }

private:
    int side_;
    int dims_;
    std::size_t size_;
    std::vector<std::size_t> strides_;
};

// An axis-parallel line: n points that agree on every coordinate except `dim`.
struct AxisLine {
    int dim = 1;
    std::vector<int> anchor; // the d-1 fixed coordinates, in dimension order with `dim` omitted

    GridPoint point(int t) const;
    std::vector<GridPoint> points(const HypergridDomain& domain) const;
    // Linear index of point(t) in `domain`.
    std::size_t index_of(const HypergridDomain& domain, int t) const;

    friend bool operator==(const AxisLine&, const AxisLine&) = default;
};

// Lines along `dim`, lexicographic on anchors. Yields n^(d-1) lines.
std::vector<AxisLine> iter_lines(const HypergridDomain& domain, int dim);

// Number of lines along a single dimension, n^(d-1).
std::size_t lines_per_dim(const HypergridDomain& domain);

// The k-th line along `dim` in the order of iter_lines.
AxisLine line_at(const HypergridDomain& domain, int dim, std::size_t k);

// Points whose first prefix.size() coordinates equal `prefix`, in row-major order.
std::vector<GridPoint> slice_points(const HypergridDomain& domain, std::span<const int> prefix);

// Checked n^d; returns false on overflow of std::size_t.
bool checked_power(std::size_t base, int exp, std::size_t& out);

} // namespace bdt
