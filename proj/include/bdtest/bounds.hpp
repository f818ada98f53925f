#pragma once

// Bounding families l_r, u_r : [n-1] -> extended reals, the quasimetric they
// induce on [n]^d, membership in P(B), and the symmetrization used by the line
// tester.
//
// Extended reals are IEEE doubles: u_r(t) may be +inf and l_r(t) may be -inf.
// A segment sum is +inf (resp. -inf) as soon as it covers one infinite entry,
// so metric evaluation only ever adds terms in (-inf, +inf] and cannot produce NaN.

#include "bdtest/function_table.hpp"
#include "bdtest/grid.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bdt {

// Comparison slack for "is this positive?" decisions. relative == 0 means exact.
struct Tolerance {
    double relative = 0.0;

    static Tolerance exact() { return {}; }
    static Tolerance floating() { return {1e-9}; }

    // slack > 0 under this tolerance; `scale` is the magnitude of the operands.
    bool positive(double slack, double scale) const;
    // a <= b under this tolerance. Infinite operands compare exactly.
    bool less_equal(double a, double b) const;
    bool equal(double a, double b) const;
};

// Anything that evaluates a quasimetric m(x, y) on a hypergrid.
class Quasimetric {
public:
    virtual ~Quasimetric() = default;
    virtual const HypergridDomain& domain() const = 0;
    virtual double operator()(std::span<const int> x, std::span<const int> y) const = 0;

    double operator()(const GridPoint& x, const GridPoint& y) const { return (*this)(x.view(), y.view()); }
};

class BoundingFamily final : public Quasimetric {
public:
    // lower[r][t-1] = l_{r+1}(t), upper likewise; each inner vector has n-1 entries.
    BoundingFamily(HypergridDomain domain, std::vector<std::vector<double>> lower,
                   std::vector<std::vector<double>> upper);

    static BoundingFamily monotone(const HypergridDomain& domain);
    static BoundingFamily lipschitz(const HypergridDomain& domain, double c);
    static BoundingFamily constant(const HypergridDomain& domain, double lower, double upper);

    const HypergridDomain& domain() const override { return domain_; }

    double lower(int dim, int t) const { return lower_[idx(dim)][static_cast<std::size_t>(t - 1)]; }
    double upper(int dim, int t) const { return upper_[idx(dim)][static_cast<std::size_t>(t - 1)]; }
    std::span<const double> lower_row(int dim) const { return lower_[idx(dim)]; }
    std::span<const double> upper_row(int dim) const { return upper_[idx(dim)]; }

    // Sum of u_dim(t) (resp. l_dim(t)) for t in [from, to), 1 <= from <= to <= n, in O(1).
    double upper_sum(int dim, int from, int to) const;
    double lower_sum(int dim, int from, int to) const;

    // m(x, y): weight of the shortest path from x to y, in O(d).
    using Quasimetric::operator();
    double operator()(std::span<const int> x, std::span<const int> y) const override;

    bool all_finite() const;
    bool is_integral() const; // all finite entries are integers
    bool is_monotone() const; // l == 0 and u == +inf everywhere

    // Bounds of `dim` only, as a family on [n].
    BoundingFamily restrict_to_dim(int dim) const;

    // Half widths (u - l)/2: the upper bounds after symmetrization. Requires finite bounds.
    double min_half_width() const;
    double max_half_width() const;

private:
    std::size_t idx(int dim) const { return static_cast<std::size_t>(dim - 1); }

    HypergridDomain domain_;
    std::vector<std::vector<double>> lower_;
    std::vector<std::vector<double>> upper_;
    // Prefix sums over finite entries and prefix counts of infinite entries, length n.
    std::vector<std::vector<double>> upper_prefix_;
    std::vector<std::vector<double>> lower_prefix_;
    std::vector<std::vector<std::int32_t>> upper_inf_;
    std::vector<std::vector<std::int32_t>> lower_inf_;
};

// m(x, y) with domain checks.
double metric(const BoundingFamily& bounds, const GridPoint& x, const GridPoint& y);

// Exact when f and B are integral, otherwise Tolerance::floating().
Tolerance tolerance_for(const FunctionTable& f, const BoundingFamily& bounds);

// l_r(x_r) <= f(x + e_r) - f(x) <= u_r(x_r) on every axis edge.
bool is_member(const FunctionTable& f, const BoundingFamily& bounds);
bool is_member(const FunctionTable& f, const BoundingFamily& bounds, Tolerance tol);
// f(x) - f(y) <= m(x, y) for all ordered pairs. O(n^{2d}).
bool is_member_all_pairs(const FunctionTable& f, const BoundingFamily& bounds, Tolerance tol);

struct SymmetrizedLine {
    FunctionTable g;
    BoundingFamily bounds; // l' = -(u - l)/2, u' = (u - l)/2
};

// g(x) = f(x) + sum_{v=x}^{n-1} (u(v) + l(v))/2 on a line. Throws
// ErrorCode::unsupported when a bound is infinite.
SymmetrizedLine symmetrize(const FunctionTable& f, const BoundingFamily& bounds);

// The additive shift g(x) - f(x) for x = 1..n along `dim`; entry t-1 is for x = t.
std::vector<double> symmetrization_shift(const BoundingFamily& bounds, int dim);

struct MetricAxiomReport {
    bool passed = true;
    std::size_t triangle_checks = 0;
    std::size_t linearity_checks = 0;
    std::size_t projection_checks = 0;
    std::string counterexample;
};

using PointTriple = std::array<GridPoint, 3>;

// Triangle inequality on every triple, equality on coordinate-monotone triples,
// and the two projection identities using the third point's coordinate as the
// target hyperplane. Stops at the first failure.
MetricAxiomReport check_metric_axioms(const Quasimetric& m, std::span<const PointTriple> triples,
                                      Tolerance tol = Tolerance::exact());

// Every ordered triple of the domain; n^{3d} entries.
std::vector<PointTriple> all_triples(const HypergridDomain& domain);

} // namespace bdt
