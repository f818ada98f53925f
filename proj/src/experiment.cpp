#include "bdtest/harness.hpp"

#include "bdtest/error.hpp"
#include "bdtest/io.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <set>
#include <thread>

namespace bdt {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"seed", "threads", "output", "sweeps"};
const std::set<std::string> kSweepKeys = {"name",      "kind",        "side",       "sides",     "dims",
                                          "bounds",    "distribution", "epsilon",   "epsilons",  "p",
                                          "trials",    "full_runs",   "iterations", "instances", "integer",
                                          "clamp_span", "interval",   "spike_scale", "oracle_cap", "max_spikes",
                                          "attempts"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    require(obj.is_object(), ErrorCode::parse, where + " must be a JSON object");
    for (const auto& [key, value] : obj.items())
        require(allowed.count(key) != 0, ErrorCode::parse, "unknown key '" + key + "' in " + where);
}

template <class T>
std::vector<T> list_or_scalar(const json& obj, const char* plural, const char* singular, std::vector<T> fallback)
{
    if (obj.contains(plural)) {
        require(obj.at(plural).is_array() && !obj.at(plural).empty(), ErrorCode::parse,
                std::string(plural) + " must be a non-empty array");
        return obj.at(plural).get<std::vector<T>>();
    }
    if (obj.contains(singular)) return {obj.at(singular).get<T>()};
    return fallback;
}

std::string resolve(const std::string& path, const std::string& base_dir)
{
    if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base_dir) / path).string();
}

ProductDistribution distribution_from(const json& value, const std::string& base_dir, std::string& label)
{
    if (value.is_string()) {
        label = value.get<std::string>();
        return parse_distribution(read_text_file(resolve(label, base_dir)));
    }
    require(value.is_object() && value.contains("masses"), ErrorCode::parse,
            "distribution must be a file path or an object with 'masses'");
    const auto masses = value.at("masses").get<std::vector<std::vector<std::int64_t>>>();
    require(!masses.empty(), ErrorCode::parse, "distribution masses must not be empty");
    label = value.at("masses").dump();
    return ProductDistribution(static_cast<int>(masses.front().size()), masses);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

ExperimentRow run_row(const RowSpec& spec, std::size_t index, std::uint64_t seed)
{
    ExperimentRow row;
    row.index = index;
    row.seed = seed;
    row.spec = spec;
    try {
        const HypergridDomain dom(spec.side, spec.dims);
        const BoundingFamily bounds = load_bounds(spec.bounds, dom);
        const ProductDistribution* dist = spec.dist ? &*spec.dist : nullptr;
        const bool monotone = bounds.is_monotone();
        const bool weighted = dist != nullptr && !dist->is_uniform();
        FarOptions far = spec.far;
        far.dist = dist;

        Rng gen(mix_seed(seed, 0));
        std::optional<FunctionTable> f;
        if (spec.kind == RowKind::completeness) {
            f = gen_member(bounds, gen, far.member);
            require(is_member(*f, bounds), ErrorCode::internal, "generated member violates the bounds");
            row.oracle_epsilon = 0.0;
            row.epsilon_method = "member";
        } else {
            FarInstance inst = gen_far(bounds, spec.epsilon, gen, far);
            f = std::move(inst.f);
            row.oracle_epsilon = inst.measured;
            row.epsilon_method = far_method_name(inst.method);
            row.spikes = inst.spikes;
        }
        row.range_width = f->range_width();
        const TableOracle oracle(*f);

        row.effective_epsilon = spec.p == 2 ? spec.epsilon * spec.epsilon : spec.epsilon;
        if (monotone) {
            row.tester = "monotonicity-hypergrid";
        } else {
            row.ratio = bounds_ratio(bounds);
            row.tester = weighted ? "product" : (spec.dims == 1 ? "line" : "hypergrid");
            row.default_iterations = default_iterations(spec.dims, row.effective_epsilon, row.ratio);
            row.budget_x = row.ratio * spec.dims / row.effective_epsilon;
        }
        if (spec.p == 2) row.tester = "l2-" + row.tester;

        TesterConfig single;
        single.epsilon = row.effective_epsilon;
        single.trials = 1;
        const auto shot = [&](Rng& rng) {
            if (monotone) return monotonicity_hypergrid_tester(oracle, single, rng).rejected();
            if (weighted) return product_tester(oracle, bounds, *dist, single, rng).rejected();
            return hypergrid_tester(oracle, bounds, single, rng).rejected();
        };
        row.estimate = estimate_rejection(shot, spec.trials, mix_seed(seed, 1));
        if (spec.kind == RowKind::soundness && !monotone && row.oracle_epsilon)
            row.predicted = predicted_rejection_bound(*row.oracle_epsilon, spec.dims, row.ratio);

        const std::uint64_t full_seed = mix_seed(seed, 2);
        for (std::uint64_t k = 0; k < spec.full_runs; ++k) {
            TesterConfig cfg;
            cfg.epsilon = spec.epsilon;
            cfg.p = spec.p;
            cfg.trials = spec.iterations;
            cfg.seed = mix_seed(full_seed, k);
            const Verdict v = run_tester(oracle, bounds, dist, cfg);
            if (v.rejected()) ++row.full_rejections;
            row.iterations += v.iterations;
            row.queries += v.queries;
            if (monotone && k == 0) row.default_iterations = v.planned_iterations;
        }

        if (spec.dims == 1 && monotone && row.oracle_epsilon && spec.kind == RowKind::soundness) {
            if (dist != nullptr) {
                row.isotonic_check = distance_preservation_check(*f, bounds, *dist, spec.far.oracle_cap).passed;
            } else {
                DistanceOptions opts;
                opts.max_points = spec.far.oracle_cap;
                const double mwm = l1_distance(*f, bounds, opts).matching_weight;
                row.isotonic_check = tolerance_for(*f, bounds).equal(mwm, isotonic_l1_oracle(*f));
            }
        }

        if (spec.kind == RowKind::completeness) {
            row.pass = row.estimate.rejections == 0 && row.full_rejections == 0;
        } else {
            row.pass = (!row.predicted || row.estimate.wilson.hi >= *row.predicted) && row.isotonic_check != false;
        }
    } catch (const Error& e) {
        row.error = std::string(error_code_name(e.code())) + ": " + e.what();
        row.pass = false;
    } catch (const std::exception& e) {
        row.error = std::string("internal: ") + e.what();
        row.pass = false;
    }
    return row;
}

json row_json(const ExperimentRow& row)
{
    const auto& s = row.spec;
    json j;
    j["index"] = row.index;
    j["seed"] = row.seed;
    j["name"] = s.name;
    j["kind"] = s.kind == RowKind::completeness ? "completeness" : "soundness";
    j["n"] = s.side;
    j["d"] = s.dims;
    j["bounds"] = s.bounds;
    j["distribution"] = s.dist_label.empty() ? json(nullptr) : json(s.dist_label);
    j["epsilon"] = s.epsilon;
    j["p"] = s.p;
    j["instance"] = s.instance;
    j["tester"] = row.tester;
    j["range_width"] = row.range_width;
    j["ratio"] = row.ratio;
    j["oracle_epsilon"] = optional_json(row.oracle_epsilon);
    j["epsilon_method"] = row.epsilon_method;
    j["spikes"] = row.spikes;
    j["trials"] = row.estimate.trials;
    j["rejections"] = row.estimate.rejections;
    j["rate"] = row.estimate.rate;
    j["ci_lo"] = row.estimate.wilson.lo;
    j["ci_hi"] = row.estimate.wilson.hi;
    j["predicted"] = optional_json(row.predicted);
    j["effective_epsilon"] = row.effective_epsilon;
    j["default_iterations"] = row.default_iterations;
    j["default_queries"] = 2 * row.default_iterations;
    j["budget_x"] = optional_json(row.budget_x);
    j["full_runs"] = s.full_runs;
    j["full_rejections"] = row.full_rejections;
    j["iterations"] = row.iterations;
    j["queries"] = row.queries;
    j["isotonic_check"] = row.isotonic_check ? json(*row.isotonic_check) : json(nullptr);
    j["pass"] = row.pass;
    j["error"] = row.error;
    return j;
}

} // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string("experiment config is not valid JSON: ") + e.what());
    }
    check_keys(doc, kTopKeys, "experiment config");

    ExperimentConfig cfg;
    try {
        cfg.seed = doc.value("seed", std::uint64_t{0});
        cfg.threads = doc.value("threads", 0u);
        if (doc.contains("output")) {
            const auto& out = doc.at("output");
            check_keys(out, {"json", "csv"}, "output");
            if (out.contains("json")) cfg.json_path = resolve(out.at("json").get<std::string>(), base_dir);
            if (out.contains("csv")) cfg.csv_path = resolve(out.at("csv").get<std::string>(), base_dir);
        }
        if (!doc.contains("sweeps")) return cfg;
        require(doc.at("sweeps").is_array(), ErrorCode::parse, "sweeps must be an array");

        std::size_t sweep_index = 0;
        for (const auto& sw : doc.at("sweeps")) {
            const std::string where = "sweep " + std::to_string(sweep_index++);
            check_keys(sw, kSweepKeys, where);
            RowSpec base;
            base.name = sw.value("name", where);
            const std::string kind = sw.value("kind", std::string("soundness"));
            require(kind == "soundness" || kind == "completeness", ErrorCode::parse,
                    where + ": kind must be 'soundness' or 'completeness'");
            base.kind = kind == "soundness" ? RowKind::soundness : RowKind::completeness;
            base.bounds = sw.value("bounds", base.bounds);
            base.p = sw.value("p", 1);
            base.trials = sw.value("trials", base.trials);
            base.full_runs = sw.value("full_runs", base.full_runs);
            if (sw.contains("iterations")) base.iterations = sw.at("iterations").get<std::uint64_t>();
            base.far.member.integral = sw.value("integer", false);
            base.far.member.clamp_span = sw.value("clamp_span", base.far.member.clamp_span);
            if (sw.contains("interval")) {
                const auto iv = sw.at("interval").get<std::vector<double>>();
                require(iv.size() == 2 && iv[0] < iv[1], ErrorCode::parse, where + ": interval must be [lo, hi]");
                base.far.member.interval = std::make_pair(iv[0], iv[1]);
            }
            base.far.spike_scale = sw.value("spike_scale", base.far.spike_scale);
            base.far.oracle_cap = sw.value("oracle_cap", base.far.oracle_cap);
            base.far.max_spikes = sw.value("max_spikes", base.far.max_spikes);
            base.far.attempts = sw.value("attempts", base.far.attempts);
            require(base.far.attempts >= 1, ErrorCode::parse, where + ": attempts must be >= 1");
            if (sw.contains("distribution")) base.dist = distribution_from(sw.at("distribution"), base_dir, base.dist_label);

            require(base.p == 1 || base.p == 2, ErrorCode::parse, where + ": p must be 1 or 2");
            require(base.trials >= 100, ErrorCode::parse, where + ": trials must be >= 100");
            const auto instances = sw.value("instances", std::size_t{1});
            const auto sides = list_or_scalar<int>(sw, "sides", "side", {});
            const auto dims = list_or_scalar<int>(sw, "dims", "dims", {1});
            const auto epsilons = list_or_scalar<double>(sw, "epsilons", "epsilon", {0.1});
            require(!sides.empty(), ErrorCode::parse, where + ": side or sides is required");

            const std::string raw_bounds = base.bounds;
            for (int n : sides) {
                for (int d : dims) {
                    const HypergridDomain dom(n, d);
                    if (!bounds_preset(raw_bounds, dom)) {
                        base.bounds = resolve(raw_bounds, base_dir);
                        load_bounds(base.bounds, dom);
                    }
                    if (base.dist)
                        require(base.dist->side() == n && base.dist->dims() == d, ErrorCode::parse,
                                where + ": distribution does not match the grid [" + std::to_string(n) + "]^" +
                                    std::to_string(d));
                    for (double eps : epsilons) {
                        require(eps > 0.0 && eps < 1.0, ErrorCode::parse, where + ": epsilon must lie in (0, 1)");
                        for (std::size_t i = 0; i < instances; ++i) {
                            RowSpec row = base;
                            row.side = n;
                            row.dims = d;
                            row.epsilon = eps;
                            row.instance = i;
                            cfg.rows.push_back(std::move(row));
                        }
                    }
                }
            }
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string("experiment config: ") + e.what());
    }
    return cfg;
}

bool ExperimentReport::all_passed() const
{
    return std::all_of(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.pass; });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    ExperimentReport report;
    report.seed = cfg.seed;
    report.rows.resize(cfg.rows.size());

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cfg.rows.size(), 1)));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cfg.rows.size(); i = next++)
            report.rows[i] = run_row(cfg.rows[i], i, mix_seed(cfg.seed, i));
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : report.rows) {
        if (!row.budget_x || !row.error.empty()) continue;
        xs.push_back(*row.budget_x);
        ys.push_back(2.0 * static_cast<double>(row.default_iterations));
    }
    if (std::set<double>(xs.begin(), xs.end()).size() >= 2) report.query_fit = linear_fit(xs, ys);
    return report;
}

std::string report_json(const ExperimentReport& report)
{
    json j;
    j["seed"] = report.seed;
    j["all_passed"] = report.all_passed();
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(row_json(row));
    j["rows"] = std::move(rows);
    if (report.query_fit) {
        j["query_fit"] = {{"slope", report.query_fit->slope},
                          {"intercept", report.query_fit->intercept},
                          {"r_squared", report.query_fit->r_squared}};
    } else {
        j["query_fit"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& report)
{
    static const char* const columns[] = {
        "index",      "seed",         "name",           "kind",      "n",          "d",
        "bounds",     "distribution", "epsilon",        "p",         "instance",   "tester",
        "range_width", "ratio",       "oracle_epsilon", "epsilon_method", "spikes", "trials",
        "rejections", "rate",         "ci_lo",          "ci_hi",     "predicted",  "effective_epsilon",
        "default_iterations", "default_queries", "budget_x", "full_runs", "full_rejections", "iterations",
        "queries",    "isotonic_check", "pass",         "error"};
    std::string out = "master_seed";
    for (const char* c : columns) out += std::string(",") + c;
    out += '\n';
    for (const auto& row : report.rows) {
        const json j = row_json(row);
        out += std::to_string(report.seed);
        for (const char* c : columns) {
            const json& v = j.at(c);
            out += ',';
            if (v.is_null()) continue;
            out += csv_field(v.is_string() ? v.get<std::string>() : v.dump());
        }
        out += '\n';
    }
    return out;
}

} // namespace bdt
