#include "bdtest/grid.hpp"

#include "bdtest/error.hpp"

#include <limits>
#include <sstream>

namespace bdt {

std::string to_string(const GridPoint& p)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) os << ',';
        os << p.coords[i];
    }
    os << ')';
    return os.str();
}

bool checked_power(std::size_t base, int exp, std::size_t& out)
{
    std::size_t acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && acc > std::numeric_limits<std::size_t>::max() / base) return false;
        acc *= base;
    }
    out = acc;
    return true;
}

HypergridDomain::HypergridDomain(int side, int dims) : side_(side), dims_(dims), size_(0)
{
    require(side >= 1, ErrorCode::argument, "grid side length must be >= 1");
    require(dims >= 1, ErrorCode::argument, "grid dimension must be >= 1");
    require(checked_power(static_cast<std::size_t>(side), dims, size_), ErrorCode::capacity,
            "grid size n^d overflows the point count type");
    strides_.assign(static_cast<std::size_t>(dims), 1);
    for (int r = dims - 2; r >= 0; --r)
        strides_[static_cast<std::size_t>(r)] =
            strides_[static_cast<std::size_t>(r + 1)] * static_cast<std::size_t>(side);
}

bool HypergridDomain::contains(std::span<const int> coords) const
{
    if (coords.size() != static_cast<std::size_t>(dims_)) return false;
    for (int c : coords)
        if (c < 1 || c > side_) return false;
    return true;
}

std::size_t HypergridDomain::index_of(std::span<const int> coords) const
{
    require(contains(coords), ErrorCode::argument, "point is outside the grid");
    std::size_t idx = 0;
    for (std::size_t r = 0; r < coords.size(); ++r)
        idx += static_cast<std::size_t>(coords[r] - 1) * strides_[r];
    return idx;
}

void HypergridDomain::coords_at(std::size_t index, std::span<int> out) const
{
    require(index < size_, ErrorCode::argument, "point index out of range");
    require(out.size() == static_cast<std::size_t>(dims_), ErrorCode::argument,
            "coordinate buffer has the wrong length");
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = static_cast<int>(index / strides_[r]) + 1;
        index %= strides_[r];
    }
}

GridPoint HypergridDomain::point_at(std::size_t index) const
{
    GridPoint p;
    p.coords.resize(static_cast<std::size_t>(dims_));
    coords_at(index, p.coords);
    return p;
}

GridPoint AxisLine::point(int t) const
{
    GridPoint p;
    p.coords.reserve(anchor.size() + 1);
    p.coords.insert(p.coords.end(), anchor.begin(), anchor.begin() + (dim - 1));
    p.coords.push_back(t);
    p.coords.insert(p.coords.end(), anchor.begin() + (dim - 1), anchor.end());
    return p;
}

std::vector<GridPoint> AxisLine::points(const HypergridDomain& domain) const
{
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(domain.side()));
    for (int t = 1; t <= domain.side(); ++t) out.push_back(point(t));
    return out;
}

std::size_t AxisLine::index_of(const HypergridDomain& domain, int t) const
{
    std::size_t idx = static_cast<std::size_t>(t - 1) * domain.stride(dim);
    int r = 1;
    for (int c : anchor) {
        if (r == dim) ++r;
        idx += static_cast<std::size_t>(c - 1) * domain.stride(r);
        ++r;
    }
    return idx;
}

std::size_t lines_per_dim(const HypergridDomain& domain)
{
    return domain.size() / static_cast<std::size_t>(domain.side());
}

AxisLine line_at(const HypergridDomain& domain, int dim, std::size_t k)
{
    require(dim >= 1 && dim <= domain.dims(), ErrorCode::argument, "dimension index out of range");
    require(k < lines_per_dim(domain), ErrorCode::argument, "line index out of range");
    AxisLine line;
    line.dim = dim;
    line.anchor.assign(static_cast<std::size_t>(domain.dims() - 1), 1);
    const auto n = static_cast<std::size_t>(domain.side());
    for (auto it = line.anchor.rbegin(); it != line.anchor.rend(); ++it) {
        *it = static_cast<int>(k % n) + 1;
        k /= n;
    }
    return line;
}

std::vector<AxisLine> iter_lines(const HypergridDomain& domain, int dim)
{
    require(dim >= 1 && dim <= domain.dims(), ErrorCode::argument, "dimension index out of range");
    const std::size_t count = lines_per_dim(domain);
    std::vector<AxisLine> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(line_at(domain, dim, k));
    return out;
}

std::vector<GridPoint> slice_points(const HypergridDomain& domain, std::span<const int> prefix)
{
    require(prefix.size() <= static_cast<std::size_t>(domain.dims()), ErrorCode::argument,
            "slice prefix is longer than the grid dimension");
    for (int c : prefix)
        require(c >= 1 && c <= domain.side(), ErrorCode::argument, "slice prefix coordinate out of range");

    const int free_dims = domain.dims() - static_cast<int>(prefix.size());
    const HypergridDomain sub(domain.side(), free_dims == 0 ? 1 : free_dims);
    const std::size_t count = free_dims == 0 ? 1 : sub.size();

    std::vector<GridPoint> out;
    out.reserve(count);
    std::vector<int> tail(static_cast<std::size_t>(free_dims));
    for (std::size_t k = 0; k < count; ++k) {
        GridPoint p(std::vector<int>(prefix.begin(), prefix.end()));
        if (free_dims > 0) {
            sub.coords_at(k, tail);
            p.coords.insert(p.coords.end(), tail.begin(), tail.end());
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace bdt
