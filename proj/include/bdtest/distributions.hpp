#pragma once

// Rational product distributions over [n]^d and their reduction to the
// uniform distribution on the bloated hypergrid [N]^d.

#include "bdtest/bounds.hpp"
#include "bdtest/grid.hpp"
#include "bdtest/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bdt {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class ProductDistribution {
public:
    // masses[r][j-1] = q_{r+1}(j) >= 0. Rows may have different sums N_r; they
    // are rescaled to the common denominator N = lcm(N_r).
    ProductDistribution(int side, std::vector<std::vector<std::int64_t>> masses);

    static ProductDistribution uniform(const HypergridDomain& domain);

    int side() const { return side_; }
    int dims() const { return static_cast<int>(masses_.size()); }
    std::int64_t denominator() const { return denominator_; }

    // Rescaled integer mass q_dim(j), so that P[x_dim = j] = q_dim(j) / N.
    std::int64_t mass(int dim, int j) const { return masses_[static_cast<std::size_t>(dim - 1)][static_cast<std::size_t>(j - 1)]; }
    std::span<const std::int64_t> masses(int dim) const { return masses_[static_cast<std::size_t>(dim - 1)]; }
    // cumulative(dim)[j] = sum_{i <= j} q_dim(i), j = 0..n.
    std::span<const std::int64_t> cumulative(int dim) const { return cumulative_[static_cast<std::size_t>(dim - 1)]; }

    bool is_uniform() const; // equal masses within every row

    // mu_D(x) = prod_r q_r(x_r) / N^d, exact.
    Rational point_mass(const GridPoint& x) const;

private:
    int side_;
    std::int64_t denominator_ = 0;
    std::vector<std::vector<std::int64_t>> masses_;
    std::vector<std::vector<std::int64_t>> cumulative_;
};

// Exact mu_D(X) for a set of grid points (duplicates counted once).
Rational mass(const ProductDistribution& dist, std::span<const GridPoint> points);

// Draws each coordinate independently with P[x_r = j] = q_r(j) / N.
GridPoint sample(const ProductDistribution& dist, Rng& rng);

// The many-to-one map Phi : [N]^d -> [n]^d, coordinate-wise segment lookup.
class BloatedGrid {
public:
    explicit BloatedGrid(ProductDistribution dist);

    const ProductDistribution& distribution() const { return dist_; }
    int source_side() const { return dist_.side(); }
    int dims() const { return dist_.dims(); }
    std::int64_t target_side() const { return dist_.denominator(); }
    HypergridDomain source_domain() const { return HypergridDomain(dist_.side(), dist_.dims()); }
    // [N]^d; throws ErrorCode::capacity if N^d does not fit.
    HypergridDomain target_domain() const;
    // N^d as an exact integer.
    BigInt target_size() const;

    // phi_dim(t) for t in [1, N], by binary search over cumulative masses.
    int phi(int dim, std::int64_t t) const;
    GridPoint phi(std::span<const int> v) const;
    GridPoint phi(const GridPoint& v) const { return phi(v.view()); }
    void phi_into(std::span<const int> v, std::span<int> out) const;

    // Inclusive range [first, last] of bloated coordinates mapped to j along dim;
    // empty (first > last) when q_dim(j) = 0.
    std::pair<std::int64_t, std::int64_t> segment(int dim, int j) const;
    // |Phi^{-1}(x)| = prod_r q_r(x_r).
    BigInt preimage_size(const GridPoint& x) const;

private:
    ProductDistribution dist_;
};

// f_ext = f o Phi on [N]^d, materialized. Throws ErrorCode::capacity when N^d
// exceeds max_points.
FunctionTable extend_function(const FunctionTable& f, const BloatedGrid& bg, std::size_t max_points = 1u << 20);

// m_ext(x, y) = m(Phi(x), Phi(y)).
class ExtendedMetric final : public Quasimetric {
public:
    ExtendedMetric(const BoundingFamily& bounds, const BloatedGrid& bg);

    const HypergridDomain& domain() const override { return target_; }
    using Quasimetric::operator();
    double operator()(std::span<const int> x, std::span<const int> y) const override;

private:
    const BoundingFamily* bounds_;
    const BloatedGrid* bg_;
    HypergridDomain target_;
};

struct DistancePreservationReport {
    bool passed = false;
    std::string method;      // how the D-weighted side was computed
    double weighted = 0.0;   // unnormalized sum_x q(x) |f - g|(x), from the weighted side
    double bloated = 0.0;    // unnormalized vs(M) of f_ext on [N]^d
    double distance_d = 0.0; // normalized D-distance
    double distance_ext = 0.0;
};

// Compares the D-weighted exact distance on [n]^d with the uniform exact
// distance of f_ext on [N]^d. The weighted side uses the weighted isotonic
// oracle for d = 1 monotonicity; otherwise it falls back to the bloated MWM.
DistancePreservationReport distance_preservation_check(const FunctionTable& f, const BoundingFamily& bounds,
                                                       const ProductDistribution& dist,
                                                       std::size_t max_points = 4096);

// Largest-remainder rounding of real probabilities to integer masses with
// denominator 10^k >= 1/precision; each mass is within 1/N of its input.
ProductDistribution rationalize(int side, const std::vector<std::vector<double>>& probabilities, double precision);

} // namespace bdt
