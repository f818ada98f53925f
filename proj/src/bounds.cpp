#include "bdtest/bounds.hpp"

#include "bdtest/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bdt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double magnitude(double a, double b)
{
    double m = 1.0;
    if (std::isfinite(a)) m = std::max(m, std::abs(a));
    if (std::isfinite(b)) m = std::max(m, std::abs(b));
    return m;
}

bool coordinate_monotone(std::span<const int> x, std::span<const int> y, std::span<const int> z)
{
    for (std::size_t r = 0; r < x.size(); ++r) {
        const bool up = x[r] <= y[r] && y[r] <= z[r];
        const bool down = x[r] >= y[r] && y[r] >= z[r];
        if (!up && !down) return false;
    }
    return true;
}

std::string describe(const char* what, const GridPoint& x, const GridPoint& y, const GridPoint& z)
{
    std::ostringstream os;
    os << what << " fails at x=" << to_string(x) << " y=" << to_string(y) << " z=" << to_string(z);
    return os.str();
}

} // namespace

bool Tolerance::positive(double slack, double scale) const
{
    if (relative == 0.0) return slack > 0.0;
    return slack > relative * magnitude(scale, 1.0);
}

bool Tolerance::less_equal(double a, double b) const
{
    if (a <= b) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return a - b <= relative * magnitude(a, b);
}

bool Tolerance::equal(double a, double b) const
{
    if (a == b) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return std::abs(a - b) <= relative * magnitude(a, b);
}

BoundingFamily::BoundingFamily(HypergridDomain domain, std::vector<std::vector<double>> lower,
                               std::vector<std::vector<double>> upper)
    : domain_(domain), lower_(std::move(lower)), upper_(std::move(upper))
{
    const auto d = static_cast<std::size_t>(domain_.dims());
    const auto edges = static_cast<std::size_t>(domain_.side() - 1);
    require(lower_.size() == d && upper_.size() == d, ErrorCode::argument,
            "bounding family needs one lower and one upper row per dimension");

    upper_prefix_.resize(d);
    lower_prefix_.resize(d);
    upper_inf_.resize(d);
    lower_inf_.resize(d);
    for (std::size_t r = 0; r < d; ++r) {
        require(lower_[r].size() == edges && upper_[r].size() == edges, ErrorCode::argument,
                "each bound row needs n-1 entries");
        auto& up = upper_prefix_[r];
        auto& lp = lower_prefix_[r];
        auto& ui = upper_inf_[r];
        auto& li = lower_inf_[r];
        up.assign(edges + 1, 0.0);
        lp.assign(edges + 1, 0.0);
        ui.assign(edges + 1, 0);
        li.assign(edges + 1, 0);
        for (std::size_t t = 0; t < edges; ++t) {
            const double l = lower_[r][t];
            const double u = upper_[r][t];
            require(!std::isnan(l) && !std::isnan(u), ErrorCode::argument, "bounds may not be NaN");
            require(l != kInf, ErrorCode::argument, "a lower bound may not be +inf");
            require(u != -kInf, ErrorCode::argument, "an upper bound may not be -inf");
            require(l < u, ErrorCode::argument, "bounding family requires l_r(t) < u_r(t)");
            up[t + 1] = up[t] + (std::isfinite(u) ? u : 0.0);
            ui[t + 1] = ui[t] + (std::isfinite(u) ? 0 : 1);
            lp[t + 1] = lp[t] + (std::isfinite(l) ? l : 0.0);
            li[t + 1] = li[t] + (std::isfinite(l) ? 0 : 1);
        }
    }
}

BoundingFamily BoundingFamily::constant(const HypergridDomain& domain, double lower, double upper)
{
    const auto d = static_cast<std::size_t>(domain.dims());
    const auto edges = static_cast<std::size_t>(domain.side() - 1);
    return BoundingFamily(domain, std::vector<std::vector<double>>(d, std::vector<double>(edges, lower)),
                          std::vector<std::vector<double>>(d, std::vector<double>(edges, upper)));
}

BoundingFamily BoundingFamily::monotone(const HypergridDomain& domain)
{
    return constant(domain, 0.0, kInf);
}

BoundingFamily BoundingFamily::lipschitz(const HypergridDomain& domain, double c)
{
    require(c > 0.0 && std::isfinite(c), ErrorCode::argument, "Lipschitz constant must be positive and finite");
    return constant(domain, -c, c);
}

double BoundingFamily::upper_sum(int dim, int from, int to) const
{
    const auto r = idx(dim);
    const auto a = static_cast<std::size_t>(from - 1);
    const auto b = static_cast<std::size_t>(to - 1);
    if (upper_inf_[r][b] - upper_inf_[r][a] > 0) return kInf;
    return upper_prefix_[r][b] - upper_prefix_[r][a];
}

double BoundingFamily::lower_sum(int dim, int from, int to) const
{
    const auto r = idx(dim);
    const auto a = static_cast<std::size_t>(from - 1);
    const auto b = static_cast<std::size_t>(to - 1);
    if (lower_inf_[r][b] - lower_inf_[r][a] > 0) return -kInf;
    return lower_prefix_[r][b] - lower_prefix_[r][a];
}

double BoundingFamily::operator()(std::span<const int> x, std::span<const int> y) const
{
    double total = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        const int dim = static_cast<int>(r) + 1;
        double term = 0.0;
        if (x[r] > y[r])
            term = upper_sum(dim, y[r], x[r]);
        else if (x[r] < y[r])
            term = -lower_sum(dim, x[r], y[r]);
        if (term == kInf) return kInf;
        total += term;
    }
    return total;
}

bool BoundingFamily::all_finite() const
{
    for (std::size_t r = 0; r < lower_.size(); ++r)
        if (upper_inf_[r].back() != 0 || lower_inf_[r].back() != 0) return false;
    return true;
}

bool BoundingFamily::is_integral() const
{
    auto integral = [](double v) { return !std::isfinite(v) || v == std::floor(v); };
    for (std::size_t r = 0; r < lower_.size(); ++r) {
        if (!std::all_of(lower_[r].begin(), lower_[r].end(), integral)) return false;
        if (!std::all_of(upper_[r].begin(), upper_[r].end(), integral)) return false;
    }
    return true;
}

bool BoundingFamily::is_monotone() const
{
    for (std::size_t r = 0; r < lower_.size(); ++r) {
        if (!std::all_of(lower_[r].begin(), lower_[r].end(), [](double v) { return v == 0.0; })) return false;
        if (!std::all_of(upper_[r].begin(), upper_[r].end(), [](double v) { return v == kInf; })) return false;
    }
    return true;
}

BoundingFamily BoundingFamily::restrict_to_dim(int dim) const
{
    require(dim >= 1 && dim <= domain_.dims(), ErrorCode::argument, "dimension index out of range");
    return BoundingFamily(HypergridDomain(domain_.side(), 1), {lower_[idx(dim)]}, {upper_[idx(dim)]});
}

double BoundingFamily::min_half_width() const
{
    require(all_finite(), ErrorCode::unsupported, "half widths need finite bounds");
    double best = kInf;
    for (std::size_t r = 0; r < lower_.size(); ++r)
        for (std::size_t t = 0; t < lower_[r].size(); ++t)
            best = std::min(best, (upper_[r][t] - lower_[r][t]) / 2.0);
    return best;
}

double BoundingFamily::max_half_width() const
{
    require(all_finite(), ErrorCode::unsupported, "half widths need finite bounds");
    double best = 0.0;
    for (std::size_t r = 0; r < lower_.size(); ++r)
        for (std::size_t t = 0; t < lower_[r].size(); ++t)
            best = std::max(best, (upper_[r][t] - lower_[r][t]) / 2.0);
    return best;
}

double metric(const BoundingFamily& bounds, const GridPoint& x, const GridPoint& y)
{
    require(bounds.domain().contains(x) && bounds.domain().contains(y), ErrorCode::argument,
            "metric points must lie in the bounding family's domain");
    return bounds(x, y);
}

Tolerance tolerance_for(const FunctionTable& f, const BoundingFamily& bounds)
{
    return f.is_integral() && bounds.is_integral() ? Tolerance::exact() : Tolerance::floating();
}

bool is_member(const FunctionTable& f, const BoundingFamily& bounds)
{
    return is_member(f, bounds, tolerance_for(f, bounds));
}

bool is_member(const FunctionTable& f, const BoundingFamily& bounds, Tolerance tol)
{
    const auto& dom = f.domain();
    require(dom == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    std::vector<int> x(static_cast<std::size_t>(dom.dims()));
    for (std::size_t i = 0; i < dom.size(); ++i) {
        dom.coords_at(i, x);
        for (int r = 1; r <= dom.dims(); ++r) {
            const int t = x[static_cast<std::size_t>(r - 1)];
            if (t == dom.side()) continue;
            const double fx = f.at(i);
            const double fy = f.at(i + dom.stride(r));
            const double diff = fy - fx;
            const double scale = std::max(std::abs(fx), std::abs(fy));
            if (tol.positive(bounds.lower(r, t) - diff, scale)) return false;
            if (tol.positive(diff - bounds.upper(r, t), scale)) return false;
        }
    }
    return true;
}

bool is_member_all_pairs(const FunctionTable& f, const BoundingFamily& bounds, Tolerance tol)
{
    const auto& dom = f.domain();
    require(dom == bounds.domain(), ErrorCode::argument, "function and bounds live on different grids");
    std::vector<int> x(static_cast<std::size_t>(dom.dims()));
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
        dom.coords_at(i, x);
        for (std::size_t j = 0; j < dom.size(); ++j) {
            if (i == j) continue;
            dom.coords_at(j, y);
            const double m = bounds(x, y);
            const double fx = f.at(i);
            const double fy = f.at(j);
            if (tol.positive(fx - fy - m, std::max({std::abs(fx), std::abs(fy), std::abs(m)}))) return false;
        }
    }
    return true;
}

std::vector<double> symmetrization_shift(const BoundingFamily& bounds, int dim)
{
    const int n = bounds.domain().side();
    auto lo = bounds.lower_row(dim);
    auto hi = bounds.upper_row(dim);
    for (std::size_t t = 0; t < lo.size(); ++t)
        require(std::isfinite(lo[t]) && std::isfinite(hi[t]), ErrorCode::unsupported,
                "symmetrization requires finite bounds");
    std::vector<double> shift(static_cast<std::size_t>(n), 0.0);
    for (int x = n - 1; x >= 1; --x) {
        const auto t = static_cast<std::size_t>(x - 1);
        shift[t] = shift[t + 1] + (hi[t] + lo[t]) / 2.0;
    }
    return shift;
}

SymmetrizedLine symmetrize(const FunctionTable& f, const BoundingFamily& bounds)
{
    require(f.domain().dims() == 1 && bounds.domain() == f.domain(), ErrorCode::argument,
            "symmetrize works on a single line");
    const auto shift = symmetrization_shift(bounds, 1);

    std::vector<double> g(f.values().begin(), f.values().end());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += shift[i];

    auto lo = bounds.lower_row(1);
    auto hi = bounds.upper_row(1);
    std::vector<double> new_lo(lo.size());
    std::vector<double> new_hi(hi.size());
    for (std::size_t t = 0; t < lo.size(); ++t) {
        new_hi[t] = (hi[t] - lo[t]) / 2.0;
        new_lo[t] = -new_hi[t];
    }
    return {FunctionTable::with_tight_range(f.domain(), std::move(g)),
            BoundingFamily(f.domain(), {std::move(new_lo)}, {std::move(new_hi)})};
}

MetricAxiomReport check_metric_axioms(const Quasimetric& m, std::span<const PointTriple> triples, Tolerance tol)
{
    MetricAxiomReport report;
    const auto& dom = m.domain();
    for (const auto& [x, y, z] : triples) {
        require(dom.contains(x) && dom.contains(y) && dom.contains(z), ErrorCode::argument,
                "triple point outside the metric's domain");
        const double xz = m(x, z);
        const double xy = m(x, y);
        const double yz = m(y, z);

        ++report.triangle_checks;
        if (!tol.less_equal(xz, xy + yz)) {
            report.passed = false;
            report.counterexample = describe("triangle inequality", x, y, z);
            return report;
        }

        if (coordinate_monotone(x.view(), y.view(), z.view())) {
            ++report.linearity_checks;
            if (!tol.equal(xz, xy + yz)) {
                report.passed = false;
                report.counterexample = describe("linearity", x, y, z);
                return report;
            }
        }

        for (int r = 1; r <= dom.dims(); ++r) {
            if (x[r] != y[r] || z[r] == x[r]) continue;
            GridPoint xp = x;
            GridPoint yp = y;
            xp[r] = z[r];
            yp[r] = z[r];
            ++report.projection_checks;
            if (!tol.equal(m(x, y), m(xp, yp)) || !tol.equal(m(x, xp), m(y, yp))) {
                report.passed = false;
                report.counterexample = describe("projection", x, y, z);
                return report;
            }
        }
    }
    return report;
}

std::vector<PointTriple> all_triples(const HypergridDomain& domain)
{
    const std::size_t size = domain.size();
    std::vector<GridPoint> pts;
    pts.reserve(size);
    for (std::size_t i = 0; i < size; ++i) pts.push_back(domain.point_at(i));
    std::vector<PointTriple> out;
    out.reserve(size * size * size);
    for (const auto& a : pts)
        for (const auto& b : pts)
            for (const auto& c : pts) out.push_back({a, b, c});
    return out;
}

} // namespace bdt
