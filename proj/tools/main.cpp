// bdtest command line: generate, distance, test, experiment, dist.

#include "bdtest/bdtest.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitError = 3;

struct StatusError {
    bdt_status status;
    std::string message;
};

void check(bdt_status s)
{
    if (s != BDT_OK) throw StatusError{s, bdt_last_error()};
}

struct FreeString {
    void operator()(char* s) const { bdt_string_free(s); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Function = std::unique_ptr<bdt_function, Deleter<bdt_function, bdt_function_free>>;
using Bounds = std::unique_ptr<bdt_bounds, Deleter<bdt_bounds, bdt_bounds_free>>;
using Distribution = std::unique_ptr<bdt_distribution, Deleter<bdt_distribution, bdt_distribution_free>>;

Function load_function(const std::string& path)
{
    bdt_function* f = nullptr;
    check(bdt_function_load(path.c_str(), &f));
    return Function(f);
}

Bounds load_bounds(const std::string& spec, int n, int d)
{
    bdt_bounds* b = nullptr;
    check(bdt_bounds_load(spec.c_str(), n, d, &b));
    return Bounds(b);
}

Distribution load_distribution(const std::string& path)
{
    bdt_distribution* dist = nullptr;
    check(bdt_distribution_load(path.c_str(), &dist));
    return Distribution(dist);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StatusError{BDT_ERR_IO, "cannot open '" + path + "' for reading"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const char* text, const std::string& path)
{
    if (path.empty()) {
        std::fputs(text, stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw StatusError{BDT_ERR_IO, "cannot write '" + path + "'"};
}

std::string parent_dir(const std::string& path)
{
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Testers and exact distance oracles for bounded-derivative properties on [n]^d"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bdt_version()));

    // generate
    auto* gen = app.add_subcommand("generate", "Sample a function in P(B), or one planted to be far from it");
    std::string gen_bounds;
    int gen_n = 0;
    int gen_d = 1;
    std::string gen_dist;
    std::string gen_out;
    std::string gen_info;
    bdt_generate_options gen_opts{0.0, 0, 0, 0.0, 0.0};
    bool gen_integer = false;
    gen->add_option("--bounds,-b", gen_bounds, "Preset (monotone, lipschitz:c, const:l:u) or bounds file")->required();
    gen->add_option("-n", gen_n, "Side length")->required()->check(CLI::PositiveNumber);
    gen->add_option("-d", gen_d, "Dimension")->check(CLI::PositiveNumber);
    gen->add_option("--dist", gen_dist, "Measure the planted distance under this distribution file");
    gen->add_option("--epsilon,-e", gen_opts.target_epsilon, "Target distance; 0 samples a member")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", gen_opts.seed, "Seed")->required();
    gen->add_flag("--integer", gen_integer, "Integer increments");
    gen->add_option("--clamp-span", gen_opts.clamp_span, "Sampling width next to an infinite bound");
    gen->add_option("--spike-scale", gen_opts.spike_scale, "Spike magnitude as a multiple of the range width");
    gen->add_option("--output,-o", gen_out, "Function file to write (default stdout)");
    gen->add_option("--info", gen_info, "Write generation details as JSON");

    // distance
    auto* dis = app.add_subcommand("distance", "Exact normalized L1 distance to P(B) with the witness matching");
    std::string dis_function;
    std::string dis_bounds;
    std::string dis_dist;
    int dis_p = 1;
    std::size_t dis_cap = 0;
    dis->add_option("--function,-f", dis_function, "Function file")->required();
    dis->add_option("--bounds,-b", dis_bounds, "Preset or bounds file")->required();
    dis->add_option("--dist", dis_dist, "Distribution file");
    dis->add_option("-p", dis_p, "Norm (1 or 2)")->check(CLI::IsMember({1, 2}));
    dis->add_option("--max-points", dis_cap, "Largest grid the quadratic scan accepts");

    // test
    auto* tst = app.add_subcommand("test", "Run the randomized tester");
    std::string tst_function;
    std::string tst_bounds;
    std::string tst_dist;
    bdt_test_options tst_opts{0.1, 1, 0, 0};
    tst->add_option("--function,-f", tst_function, "Function file")->required();
    tst->add_option("--bounds,-b", tst_bounds, "Preset or bounds file")->required();
    tst->add_option("--dist", tst_dist, "Distribution file");
    tst->add_option("--epsilon,-e", tst_opts.epsilon, "Proximity parameter in (0, 1)")->required();
    tst->add_option("-p", tst_opts.p, "Norm (1 or 2)")->check(CLI::IsMember({1, 2}));
    tst->add_option("--trials", tst_opts.trials, "Iteration count override")->check(CLI::PositiveNumber);
    tst->add_option("--seed", tst_opts.seed, "Seed")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run an experiment config; exits 0 iff every row passes");
    std::string exp_config;
    std::uint64_t exp_seed = 0;
    std::string exp_json;
    std::string exp_csv;
    bool exp_quiet = false;
    exp->add_option("--config,-c", exp_config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    exp->add_option("--seed", exp_seed, "Master seed")->required();
    exp->add_option("--json", exp_json, "Also write the JSON report here");
    exp->add_option("--csv", exp_csv, "Also write the CSV report here");
    exp->add_flag("--quiet,-q", exp_quiet, "Do not print the JSON report");

    // dist
    auto* dst = app.add_subcommand("dist", "Product distribution utilities");
    dst->require_subcommand(1);
    auto* dst_check = dst->add_subcommand("check", "Validate a distribution file");
    std::string check_path;
    dst_check->add_option("file", check_path, "Distribution file")->required();
    auto* dst_bloat = dst->add_subcommand("bloat", "Bloated grid information");
    std::string bloat_path;
    bool bloat_size = false;
    dst_bloat->add_option("file", bloat_path, "Distribution file")->required();
    dst_bloat->add_flag("--size", bloat_size, "Print N^d")->required();
    auto* dst_rat = dst->add_subcommand("rationalize", "Round real probabilities to integer masses");
    std::string rat_path;
    double rat_precision = 1e-3;
    dst_rat->add_option("file", rat_path, "Probability file: n d, then d rows of n weights")->required();
    dst_rat->add_option("--precision", rat_precision, "Largest allowed rounding step 1/N")->check(CLI::Range(0.0, 1.0));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto bounds = load_bounds(gen_bounds, gen_n, gen_d);
            Distribution dist;
            if (!gen_dist.empty()) dist = load_distribution(gen_dist);
            gen_opts.integral = gen_integer ? 1 : 0;
            bdt_function* f = nullptr;
            char* info = nullptr;
            check(bdt_generate(bounds.get(), dist.get(), &gen_opts, &f, &info));
            Function fn(f);
            OwnedString info_text(info);
            char* text = nullptr;
            check(bdt_function_to_text(fn.get(), &text));
            OwnedString body(text);
            emit(body.get(), gen_out);
            if (!gen_info.empty()) emit(info_text.get(), gen_info);
            else std::fputs(info_text.get(), stderr);
            return 0;
        }
        if (*dis) {
            auto f = load_function(dis_function);
            int n = 0;
            int d = 0;
            check(bdt_function_info(f.get(), &n, &d, nullptr, nullptr));
            auto bounds = load_bounds(dis_bounds, n, d);
            Distribution dist;
            if (!dis_dist.empty()) dist = load_distribution(dis_dist);
            char* out = nullptr;
            check(bdt_distance_json(f.get(), bounds.get(), dist.get(), dis_p, dis_cap, &out));
            OwnedString text(out);
            std::fputs(text.get(), stdout);
            return 0;
        }
        if (*tst) {
            auto f = load_function(tst_function);
            int n = 0;
            int d = 0;
            check(bdt_function_info(f.get(), &n, &d, nullptr, nullptr));
            auto bounds = load_bounds(tst_bounds, n, d);
            Distribution dist;
            if (!tst_dist.empty()) dist = load_distribution(tst_dist);
            char* out = nullptr;
            int rejected = 0;
            check(bdt_test_json(f.get(), bounds.get(), dist.get(), &tst_opts, &out, &rejected));
            OwnedString text(out);
            std::fputs(text.get(), stdout);
            return 0;
        }
        if (*exp) {
            const std::string config = read_file(exp_config);
            char* json = nullptr;
            char* csv = nullptr;
            int passed = 0;
            check(bdt_experiment_run(config.c_str(), parent_dir(exp_config).c_str(), exp_seed, 1, &json, &csv, &passed));
            OwnedString json_text(json);
            OwnedString csv_text(csv);
            if (!exp_json.empty()) emit(json_text.get(), exp_json);
            if (!exp_csv.empty()) emit(csv_text.get(), exp_csv);
            if (!exp_quiet) std::fputs(json_text.get(), stdout);
            return passed != 0 ? 0 : kExitFailed;
        }
        if (*dst_check) {
            auto dist = load_distribution(check_path);
            char* out = nullptr;
            check(bdt_distribution_to_text(dist.get(), &out));
            OwnedString text(out);
            std::printf("ok\n");
            return 0;
        }
        if (*dst_bloat) {
            auto dist = load_distribution(bloat_path);
            char* out = nullptr;
            check(bdt_distribution_bloated_size(dist.get(), &out));
            OwnedString text(out);
            std::printf("%s\n", text.get());
            return 0;
        }
        if (*dst_rat) {
            const std::string probs = read_file(rat_path);
            bdt_distribution* raw = nullptr;
            check(bdt_rationalize(probs.c_str(), rat_precision, &raw));
            Distribution dist(raw);
            char* out = nullptr;
            check(bdt_distribution_to_text(dist.get(), &out));
            OwnedString text(out);
            std::fputs(text.get(), stdout);
            return 0;
        }
    } catch (const StatusError& e) {
        std::fprintf(stderr, "error (%s): %s\n", bdt_status_name(e.status), e.message.c_str());
        return kExitError;
    }
    return 0;
}
