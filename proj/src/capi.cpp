#include "bdtest/bdtest.h"

#include "bdtest/error.hpp"
#include "bdtest/harness.hpp"
#include "bdtest/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>

struct bdt_function {
    bdt::FunctionTable table;
};

struct bdt_bounds {
    bdt::BoundingFamily family;
};

struct bdt_distribution {
    bdt::ProductDistribution dist;
};

namespace {

thread_local std::string g_last_error;

template <class F>
bdt_status guarded(F&& body)
{
    try {
        body();
        g_last_error.clear();
        return BDT_OK;
    } catch (const bdt::Error& e) {
        g_last_error = e.what();
        return static_cast<bdt_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return BDT_ERR_CAPACITY;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BDT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BDT_ERR_INTERNAL;
    }
}

void need(const void* p, const char* name)
{
    bdt::require(p != nullptr, bdt::ErrorCode::argument, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bdt::HypergridDomain domain_of(int n, int d)
{
    return bdt::HypergridDomain(n, d);
}

} // namespace

extern "C" {

const char* bdt_version(void)
{
    return "0.1.0";
}

const char* bdt_status_name(bdt_status status)
{
    if (status == BDT_OK) return "ok";
    if (status < BDT_ERR_ARGUMENT || status > BDT_ERR_INTERNAL) return "unknown";
    return bdt::error_code_name(static_cast<bdt::ErrorCode>(status));
}

const char* bdt_last_error(void)
{
    return g_last_error.c_str();
}

void bdt_string_free(char* s)
{
    std::free(s);
}

bdt_status bdt_function_load(const char* path, bdt_function** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new bdt_function{bdt::parse_function(bdt::read_text_file(path))};
    });
}

bdt_status bdt_function_parse(const char* text, bdt_function** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new bdt_function{bdt::parse_function(text)};
    });
}

bdt_status bdt_function_create(int n, int d, const double* values, double a, double b, bdt_function** out)
{
    return guarded([&] {
        need(values, "values");
        need(out, "out");
        const auto dom = domain_of(n, d);
        *out = new bdt_function{bdt::FunctionTable(dom, std::vector<double>(values, values + dom.size()), a, b)};
    });
}

void bdt_function_free(bdt_function* f)
{
    delete f;
}

bdt_status bdt_function_info(const bdt_function* f, int* n, int* d, double* a, double* b)
{
    return guarded([&] {
        need(f, "function");
        if (n != nullptr) *n = f->table.domain().side();
        if (d != nullptr) *d = f->table.domain().dims();
        if (a != nullptr) *a = f->table.range_lo();
        if (b != nullptr) *b = f->table.range_hi();
    });
}

bdt_status bdt_function_value(const bdt_function* f, const int* coords, double* out)
{
    return guarded([&] {
        need(f, "function");
        need(coords, "coords");
        need(out, "out");
        const std::span<const int> x(coords, static_cast<std::size_t>(f->table.domain().dims()));
        bdt::require(f->table.domain().contains(x), bdt::ErrorCode::argument, "point is outside the grid");
        *out = f->table.at(x);
    });
}

bdt_status bdt_function_to_text(const bdt_function* f, char** out)
{
    return guarded([&] {
        need(f, "function");
        need(out, "out");
        *out = dup_string(bdt::format_function(f->table));
    });
}

bdt_status bdt_bounds_load(const char* spec, int n, int d, bdt_bounds** out)
{
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = new bdt_bounds{bdt::load_bounds(spec, domain_of(n, d))};
    });
}

bdt_status bdt_bounds_parse(const char* text, int n, int d, bdt_bounds** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new bdt_bounds{bdt::parse_bounds(text, domain_of(n, d))};
    });
}

bdt_status bdt_bounds_create(int n, int d, const double* lower, const double* upper, bdt_bounds** out)
{
    return guarded([&] {
        need(out, "out");
        const auto dom = domain_of(n, d);
        const auto edges = static_cast<std::size_t>(n - 1);
        if (edges > 0) {
            need(lower, "lower");
            need(upper, "upper");
        }
        std::vector<std::vector<double>> lo(static_cast<std::size_t>(d));
        std::vector<std::vector<double>> hi(static_cast<std::size_t>(d));
        for (std::size_t r = 0; r < lo.size(); ++r) {
            if (edges == 0) continue;
            lo[r].assign(lower + r * edges, lower + (r + 1) * edges);
            hi[r].assign(upper + r * edges, upper + (r + 1) * edges);
        }
        *out = new bdt_bounds{bdt::BoundingFamily(dom, std::move(lo), std::move(hi))};
    });
}

void bdt_bounds_free(bdt_bounds* b)
{
    delete b;
}

bdt_status bdt_bounds_to_text(const bdt_bounds* b, char** out)
{
    return guarded([&] {
        need(b, "bounds");
        need(out, "out");
        *out = dup_string(bdt::format_bounds(b->family));
    });
}

bdt_status bdt_metric(const bdt_bounds* b, const int* x, const int* y, double* out)
{
    return guarded([&] {
        need(b, "bounds");
        need(x, "x");
        need(y, "y");
        need(out, "out");
        const auto d = static_cast<std::size_t>(b->family.domain().dims());
        *out = bdt::metric(b->family, bdt::GridPoint(std::vector<int>(x, x + d)), bdt::GridPoint(std::vector<int>(y, y + d)));
    });
}

bdt_status bdt_is_member(const bdt_function* f, const bdt_bounds* b, int* out)
{
    return guarded([&] {
        need(f, "function");
        need(b, "bounds");
        need(out, "out");
        bdt::require(f->table.domain() == b->family.domain(), bdt::ErrorCode::argument,
                     "function and bounds live on different grids");
        *out = bdt::is_member(f->table, b->family) ? 1 : 0;
    });
}

bdt_status bdt_distribution_load(const char* path, bdt_distribution** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new bdt_distribution{bdt::parse_distribution(bdt::read_text_file(path))};
    });
}

bdt_status bdt_distribution_parse(const char* text, bdt_distribution** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new bdt_distribution{bdt::parse_distribution(text)};
    });
}

bdt_status bdt_distribution_create(int n, int d, const int64_t* masses, bdt_distribution** out)
{
    return guarded([&] {
        need(masses, "masses");
        need(out, "out");
        bdt::require(n >= 1 && d >= 1, bdt::ErrorCode::argument, "n and d must be >= 1");
        const auto row = static_cast<std::size_t>(n);
        std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(d));
        for (std::size_t r = 0; r < rows.size(); ++r) rows[r].assign(masses + r * row, masses + (r + 1) * row);
        *out = new bdt_distribution{bdt::ProductDistribution(n, std::move(rows))};
    });
}

void bdt_distribution_free(bdt_distribution* dist)
{
    delete dist;
}

bdt_status bdt_distribution_to_text(const bdt_distribution* dist, char** out)
{
    return guarded([&] {
        need(dist, "distribution");
        need(out, "out");
        *out = dup_string(bdt::format_distribution(dist->dist));
    });
}

bdt_status bdt_distribution_bloated_size(const bdt_distribution* dist, char** out)
{
    return guarded([&] {
        need(dist, "distribution");
        need(out, "out");
        *out = dup_string(bdt::BloatedGrid(dist->dist).target_size().str());
    });
}

bdt_status bdt_rationalize(const char* probabilities_text, double precision, bdt_distribution** out)
{
    return guarded([&] {
        need(probabilities_text, "probabilities_text");
        need(out, "out");
        int side = 0;
        const auto probs = bdt::parse_probabilities(probabilities_text, side);
        *out = new bdt_distribution{bdt::rationalize(side, probs, precision)};
    });
}

bdt_status bdt_distance_json(const bdt_function* f, const bdt_bounds* b, const bdt_distribution* dist, int p,
                             size_t max_points, char** out)
{
    return guarded([&] {
        need(f, "function");
        need(b, "bounds");
        need(out, "out");
        bdt::DistanceOptions options;
        if (max_points != 0) options.max_points = max_points;
        const auto result = dist != nullptr ? bdt::l1_distance(f->table, b->family, dist->dist, options)
                                            : bdt::l1_distance(f->table, b->family, options);
        *out = dup_string(bdt::distance_json(result, p, b->family));
    });
}

bdt_status bdt_test_json(const bdt_function* f, const bdt_bounds* b, const bdt_distribution* dist,
                         const bdt_test_options* options, char** out, int* rejected)
{
    return guarded([&] {
        need(f, "function");
        need(b, "bounds");
        need(options, "options");
        need(out, "out");
        bdt::TesterConfig cfg;
        cfg.epsilon = options->epsilon;
        cfg.p = options->p;
        if (options->trials != 0) cfg.trials = options->trials;
        cfg.seed = options->seed;
        const bdt::TableOracle oracle(f->table);
        const auto verdict = bdt::run_tester(oracle, b->family, dist != nullptr ? &dist->dist : nullptr, cfg);
        *out = dup_string(bdt::verdict_json(verdict));
        if (rejected != nullptr) *rejected = verdict.rejected() ? 1 : 0;
    });
}

bdt_status bdt_generate(const bdt_bounds* b, const bdt_distribution* dist, const bdt_generate_options* options,
                        bdt_function** out, char** info)
{
    return guarded([&] {
        need(b, "bounds");
        need(options, "options");
        need(out, "out");
        bdt::FarOptions far;
        far.member.integral = options->integral != 0;
        if (options->clamp_span != 0.0) far.member.clamp_span = options->clamp_span;
        if (options->spike_scale != 0.0) far.spike_scale = options->spike_scale;
        far.dist = dist != nullptr ? &dist->dist : nullptr;
        bdt::Rng rng(options->seed);
        auto inst = bdt::gen_far(b->family, options->target_epsilon, rng, far);

        nlohmann::json j;
        j["seed"] = options->seed;
        j["target_epsilon"] = options->target_epsilon;
        j["method"] = bdt::far_method_name(inst.method);
        j["measured_epsilon"] = inst.measured ? nlohmann::json(*inst.measured) : nlohmann::json(nullptr);
        j["spikes"] = inst.spikes;
        const std::string text = j.dump(2) + "\n";

        auto handle = std::make_unique<bdt_function>(bdt_function{std::move(inst.f)});
        if (info != nullptr) *info = dup_string(text);
        *out = handle.release();
    });
}

bdt_status bdt_experiment_run(const char* config_text, const char* base_dir, uint64_t seed, int override_seed,
                              char** report_json, char** report_csv, int* all_passed)
{
    return guarded([&] {
        need(config_text, "config_text");
        auto cfg = bdt::parse_experiment_config(config_text, base_dir != nullptr ? base_dir : "");
        if (override_seed != 0) cfg.seed = seed;
        const auto report = bdt::run_experiment(cfg);
        const std::string json_text = bdt::report_json(report);
        const std::string csv_text = bdt::report_csv(report);
        if (!cfg.json_path.empty()) bdt::write_text_file(cfg.json_path, json_text);
        if (!cfg.csv_path.empty()) bdt::write_text_file(cfg.csv_path, csv_text);
        char* j = report_json != nullptr ? dup_string(json_text) : nullptr;
        char* c = nullptr;
        try {
            if (report_csv != nullptr) c = dup_string(csv_text);
        } catch (...) {
            std::free(j);
            throw;
        }
        if (report_json != nullptr) *report_json = j;
        if (report_csv != nullptr) *report_csv = c;
        if (all_passed != nullptr) *all_passed = report.all_passed() ? 1 : 0;
    });
}

} // extern "C"
