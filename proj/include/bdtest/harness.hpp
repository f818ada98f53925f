#pragma once

// Synthetic instances, rejection-rate estimation and experiment sweeps.

#include "bdtest/bounds.hpp"
#include "bdtest/distributions.hpp"
#include "bdtest/stats.hpp"
#include "bdtest/testers.hpp"
#include "bdtest/violation.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bdt {

struct MemberOptions {
    bool integral = false;   // integer increments, so exact comparisons apply downstream
    double clamp_span = 4.0; // sampling width next to a single infinite bound
    // Used on edges where both bounds are infinite; required there.
    std::optional<std::pair<double, double>> interval;
};

// Separable f(x) = sum_r psi_r(x_r) with every increment psi_r(t+1) - psi_r(t)
// drawn uniformly from [l_r(t), u_r(t)], clamped to a finite window next to an
// infinite bound. The declared range is [min f, max f].
FunctionTable gen_member(const BoundingFamily& bounds, Rng& rng, const MemberOptions& options = {});

enum class FarMethod { unmodified, oracle, heuristic };

const char* far_method_name(FarMethod method);

struct FarOptions {
    MemberOptions member;
    double spike_scale = 1.0; // spike magnitude as a multiple of the range width
    std::size_t oracle_cap = kDefaultGraphCap;
    std::size_t max_spikes = 0; // 0 means every point once
    std::size_t attempts = 8;   // fresh base members tried before giving up
    const ProductDistribution* dist = nullptr; // measure distance under this distribution
};

struct FarInstance {
    FunctionTable f;
    std::optional<double> measured; // exact oracle distance, when within the cap
    FarMethod method = FarMethod::unmodified;
    std::size_t spikes = 0;
};

// Plants delta spikes (clamped to [a, b]) at distinct random points of a
// gen_member function until the distance reaches `target`. Spikes go up on one
// coordinate-parity class and down on the other, the class picked at random. Grids
// above the oracle cap stop on the planted mass sum |change| / (r N) instead,
// which is an upper bound on the distance and leaves `measured` empty.
// A fresh base member is drawn when the spike budget runs out; throws
// ErrorCode::generation after `attempts` bases.
FarInstance gen_far(const BoundingFamily& bounds, double target, Rng& rng, const FarOptions& options = {});

struct RejectionEstimate {
    std::uint64_t trials = 0;
    std::uint64_t rejections = 0;
    double rate = 0.0;
    Interval wilson;
};

// Runs `single_shot` with Rng(mix_seed(seed, i)) for i < trials. trials >= 100.
RejectionEstimate estimate_rejection(const std::function<bool(Rng&)>& single_shot, std::uint64_t trials,
                                     std::uint64_t seed);

// Lower bound on one tester iteration's rejection probability for an eps-far f:
// eps / (4C) on a line, eps / (8 d C) on [n]^d.
double predicted_rejection_bound(double epsilon, int dims, double ratio);

enum class RowKind { completeness, soundness };

struct RowSpec {
    std::string name;
    RowKind kind = RowKind::soundness;
    int side = 2;
    int dims = 1;
    std::string bounds = "lipschitz:1"; // preset or bounds file
    std::optional<ProductDistribution> dist;
    std::string dist_label;
    double epsilon = 0.1; // planted distance for soundness rows and tester proximity
    int p = 1;
    std::uint64_t trials = 1000;   // single-shot trials
    std::uint64_t full_runs = 1;   // full tester runs at the default iteration count
    std::optional<std::uint64_t> iterations; // override for the full tester
    FarOptions far;
    std::size_t instance = 0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0: hardware concurrency
    std::vector<RowSpec> rows;
    std::string json_path;
    std::string csv_path;
};

// JSON config; relative file references resolve against base_dir.
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir = "");

struct ExperimentRow {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    RowSpec spec;
    std::string tester;
    double range_width = 0.0;
    double ratio = 1.0;
    std::optional<double> oracle_epsilon;
    std::string epsilon_method;
    std::size_t spikes = 0;
    RejectionEstimate estimate;
    std::optional<double> predicted;
    double effective_epsilon = 0.0;
    std::uint64_t default_iterations = 0;
    std::optional<double> budget_x; // C d / eps, for rows whose budget follows the closed form
    std::uint64_t full_rejections = 0;
    std::uint64_t iterations = 0; // executed over all full runs
    std::uint64_t queries = 0;    // over all full runs
    std::optional<bool> isotonic_check;
    bool pass = false;
    std::string error;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::vector<ExperimentRow> rows;
    // Default query budget 2t against C d / eps over rows with finite bounds.
    std::optional<LinearFit> query_fit;

    bool all_passed() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string report_json(const ExperimentReport& report);
std::string report_csv(const ExperimentReport& report);

} // namespace bdt
