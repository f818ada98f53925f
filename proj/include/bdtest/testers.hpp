#pragma once

// One-sided randomized testers for P(B).
//
// The line tester symmetrizes the bounds (l' = -u' with u' = (u - l)/2),
// samples one pair at line distance at most R/u'_min and rejects iff that pair
// is violated. R is the declared range width of f widened by the spread of the
// symmetrization shift, which bounds the range of the symmetrized function
// without querying it; for already symmetric bounds R = b - a.
//
// The hypergrid tester repeats the line tester on uniformly random axis lines,
// by default ceil(8 C d ln 3 / eps) times with C = u'_max / u'_min.

#include "bdtest/bounds.hpp"
#include "bdtest/distributions.hpp"
#include "bdtest/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bdt {

// Read-only point-query access to f. Implementations must be safe to share
// across threads.
class FunctionOracle {
public:
    virtual ~FunctionOracle() = default;
    virtual const HypergridDomain& domain() const = 0;
    virtual double value(std::span<const int> x) const = 0;
    virtual double range_width() const = 0;
    // True when every value is known to be an integer (enables exact comparisons).
    virtual bool integral() const { return false; }
};

class TableOracle final : public FunctionOracle {
public:
    explicit TableOracle(const FunctionTable& table) : table_(&table), integral_(table.is_integral()) {}

    const HypergridDomain& domain() const override { return table_->domain(); }
    double value(std::span<const int> x) const override { return table_->at(x); }
    double range_width() const override { return table_->range_width(); }
    bool integral() const override { return integral_; }

private:
    const FunctionTable* table_;
    bool integral_;
};

struct TesterConfig {
    double epsilon = 0.1;
    int p = 1;
    std::optional<std::uint64_t> trials; // iteration override
    std::uint64_t seed = 0;
    double confidence = 2.0 / 3.0;
};

// Throws ErrorCode::argument unless eps in (0,1), p in {1,2}, trials >= 1.
void validate(const TesterConfig& cfg);

enum class Decision { accept, reject };

struct Witness {
    GridPoint x;
    GridPoint y;
    double score = 0.0;
};

struct Verdict {
    Decision decision = Decision::accept;
    std::optional<Witness> witness;
    std::uint64_t queries = 0;
    std::uint64_t iterations = 0;         // executed
    std::uint64_t planned_iterations = 0; // budget
    double effective_epsilon = 0.0;
    std::string tester;

    bool rejected() const { return decision == Decision::reject; }
};

// Pairs drawn by a line tester, as positions on a line of some length.
class PairSet {
public:
    virtual ~PairSet() = default;
    virtual std::uint64_t size() const = 0;
    // k-th pair in source-major order: by first position, then by second.
    virtual std::pair<std::int64_t, std::int64_t> pair_at(std::uint64_t k) const = 0;

    std::pair<std::int64_t, std::int64_t> sample(Rng& rng) const { return pair_at(rng.below(size())); }
};

// {(x, y) : 1 <= x < y <= n, y - x <= R / u_m}, never materialized.
class LinePairSet final : public PairSet {
public:
    // Throws ErrorCode::unsupported when u_m <= 0 or is infinite.
    LinePairSet(int n, double range_width, double min_upper);
    static LinePairSet with_max_gap(int n, int max_gap);

    int side() const { return n_; }
    int max_gap() const { return gap_; }
    std::uint64_t size() const override;
    std::pair<std::int64_t, std::int64_t> pair_at(std::uint64_t k) const override;

private:
    LinePairSet() = default;
    int n_ = 1;
    int gap_ = 0;
};

LinePairSet line_pair_set(int n, double range_width, double min_upper);

// Pairs (s, t) of a bloated line [N] whose segment indices differ by 1..max_gap.
class SegmentPairSet final : public PairSet {
public:
    SegmentPairSet(std::span<const std::int64_t> cumulative, int max_gap);

    std::uint64_t size() const override { return prefix_.back(); }
    std::pair<std::int64_t, std::int64_t> pair_at(std::uint64_t k) const override;

private:
    std::vector<std::int64_t> cumulative_; // length n+1
    std::vector<std::int64_t> width_;      // partners per source in segment j
    std::vector<std::uint64_t> prefix_;    // pair counts, length n+1
};

// C = u'_max / u'_min over all dimensions. Requires finite bounds.
double bounds_ratio(const BoundingFamily& bounds);

// ceil(8 C d ln 3 / eps).
std::uint64_t default_iterations(int dims, double epsilon, double ratio);

// Single-shot tester on a line (d = 1): exactly 2 queries when a pair exists.
Verdict line_tester(const FunctionOracle& f, const BoundingFamily& bounds, Rng& rng);

Verdict hypergrid_tester(const FunctionOracle& f, const BoundingFamily& bounds, const TesterConfig& cfg, Rng& rng);

// Runs the hypergrid tester at proximity eps^2.
Verdict l2_tester(const FunctionOracle& f, const BoundingFamily& bounds, const TesterConfig& cfg, Rng& rng);

// Hypergrid tester on the bloated grid [N]^d with lazy f_ext; each query to
// f_ext is one query to f. Pairs are restricted to segment gaps <= R/u'_min.
Verdict product_tester(const FunctionOracle& f, const BoundingFamily& bounds, const ProductDistribution& dist,
                       const TesterConfig& cfg, Rng& rng);

// Monotonicity on a line: x uniform, gap 2^k with k uniform in [0, floor(log2(n-1))].
Verdict monotonicity_pair_tester(const FunctionOracle& f, Rng& rng);

// Monotonicity pair tester on uniformly random axis lines, repeated
// trials or ceil(8 d ln 3 ceil(log2 n) / eps) times. No soundness constant is claimed.
Verdict monotonicity_hypergrid_tester(const FunctionOracle& f, const TesterConfig& cfg, Rng& rng);

// Dispatch on p, the distribution, and monotone bounds; seeds from cfg.seed.
Verdict run_tester(const FunctionOracle& f, const BoundingFamily& bounds, const ProductDistribution* dist,
                   const TesterConfig& cfg);

} // namespace bdt
