#include "bdtest/io.hpp"

#include "bdtest/error.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bdt {

namespace {

using nlohmann::json;

class Tokens {
public:
    explicit Tokens(std::string_view text)
    {
        std::size_t i = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (c == '#') {
                while (i < text.size() && text[i] != '\n') ++i;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else {
                const std::size_t start = i;
                while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
                tokens_.push_back(text.substr(start, i - start));
            }
        }
    }

    bool done() const { return pos_ == tokens_.size(); }
    std::size_t remaining() const { return tokens_.size() - pos_; }

    std::string_view next(const char* what)
    {
        require(!done(), ErrorCode::parse, std::string("unexpected end of input, expected ") + what);
        return tokens_[pos_++];
    }

    double real(const char* what)
    {
        const auto tok = next(what);
        if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
        if (tok == "-inf") return -std::numeric_limits<double>::infinity();
        double v = 0.0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        require(ec == std::errc() && end == tok.data() + tok.size(), ErrorCode::parse,
                std::string("expected a number for ") + what + ", got '" + std::string(tok) + "'");
        require(!std::isnan(v), ErrorCode::parse, std::string("NaN is not allowed for ") + what);
        return v;
    }

    std::int64_t integer(const char* what)
    {
        const auto tok = next(what);
        std::int64_t v = 0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        require(ec == std::errc() && end == tok.data() + tok.size(), ErrorCode::parse,
                std::string("expected an integer for ") + what + ", got '" + std::string(tok) + "'");
        return v;
    }

    int small_int(const char* what)
    {
        const auto v = integer(what);
        require(v >= 1 && v <= std::numeric_limits<int>::max(), ErrorCode::parse,
                std::string(what) + " must be a positive integer");
        return static_cast<int>(v);
    }

    void expect_end()
    {
        if (!done()) fail(ErrorCode::parse, "unexpected trailing token '" + std::string(tokens_[pos_]) + "'");
    }

private:
    std::vector<std::string_view> tokens_;
    std::size_t pos_ = 0;
};

std::string format_real(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t colon = std::min(text.find(':', start), text.size());
        Tokens t(text.substr(start, colon - start));
        out.push_back(t.real("preset parameter"));
        t.expect_end();
        start = colon + 1;
    }
    return out;
}

json point_json(const GridPoint& p)
{
    return json(p.coords);
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    require(!in.bad(), ErrorCode::io, "error reading '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    require(static_cast<bool>(out), ErrorCode::io, "error writing '" + path + "'");
}

FunctionTable parse_function(std::string_view text)
{
    Tokens t(text);
    const int n = t.small_int("n");
    const int d = t.small_int("d");
    const double a = t.real("a");
    const double b = t.real("b");
    const HypergridDomain domain(n, d);
    require(domain.size() == t.remaining(), ErrorCode::parse,
            "function file declares " + std::to_string(domain.size()) + " values but holds " +
                std::to_string(t.remaining()));
    std::vector<double> values;
    values.reserve(domain.size());
    while (!t.done()) values.push_back(t.real("function value"));
    return FunctionTable(domain, std::move(values), a, b);
}

std::string format_function(const FunctionTable& f)
{
    const auto& dom = f.domain();
    std::string out = std::to_string(dom.side()) + " " + std::to_string(dom.dims()) + " " +
                      format_real(f.range_lo()) + " " + format_real(f.range_hi()) + "\n";
    const auto row = static_cast<std::size_t>(dom.side());
    for (std::size_t i = 0; i < dom.size(); ++i) {
        out += format_real(f.at(i));
        out += (i + 1) % row == 0 ? '\n' : ' ';
    }
    return out;
}

BoundingFamily parse_bounds(std::string_view text, const HypergridDomain& domain)
{
    Tokens t(text);
    const auto edges = static_cast<std::size_t>(domain.side() - 1);
    const auto d = static_cast<std::size_t>(domain.dims());
    require(t.remaining() == 2 * d * edges, ErrorCode::parse,
            "bounds file needs " + std::to_string(2 * d * edges) + " values (two rows of n-1 per dimension), found " +
                std::to_string(t.remaining()));
    std::vector<std::vector<double>> lower(d, std::vector<double>(edges));
    std::vector<std::vector<double>> upper(d, std::vector<double>(edges));
    for (std::size_t r = 0; r < d; ++r) {
        for (auto& v : lower[r]) v = t.real("lower bound");
        for (auto& v : upper[r]) v = t.real("upper bound");
    }
    return BoundingFamily(domain, std::move(lower), std::move(upper));
}

std::string format_bounds(const BoundingFamily& bounds)
{
    std::string out;
    const auto emit = [&out](std::span<const double> row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ' ';
            out += format_real(row[i]);
        }
        out += '\n';
    };
    for (int r = 1; r <= bounds.domain().dims(); ++r) {
        emit(bounds.lower_row(r));
        emit(bounds.upper_row(r));
    }
    return out;
}

std::optional<BoundingFamily> bounds_preset(std::string_view spec, const HypergridDomain& domain)
{
    if (spec == "monotone") return BoundingFamily::monotone(domain);
    const auto colon = spec.find(':');
    const auto name = spec.substr(0, colon);
    if (name != "lipschitz" && name != "const") return std::nullopt;
    require(colon != std::string_view::npos, ErrorCode::parse, "preset '" + std::string(name) + "' needs parameters");
    const auto params = parse_real_list(spec.substr(colon + 1));
    if (name == "lipschitz") {
        require(params.size() == 1, ErrorCode::parse, "lipschitz preset takes one parameter: lipschitz:c");
        return BoundingFamily::lipschitz(domain, params[0]);
    }
    require(params.size() == 2, ErrorCode::parse, "const preset takes two parameters: const:l:u");
    return BoundingFamily::constant(domain, params[0], params[1]);
}

BoundingFamily load_bounds(const std::string& spec, const HypergridDomain& domain)
{
    if (auto preset = bounds_preset(spec, domain)) return std::move(*preset);
    return parse_bounds(read_text_file(spec), domain);
}

ProductDistribution parse_distribution(std::string_view text)
{
    Tokens t(text);
    const int n = t.small_int("n");
    const int d = t.small_int("d");
    const std::int64_t big_n = t.integer("N");
    require(big_n >= 1, ErrorCode::parse, "N must be a positive integer");
    std::vector<std::vector<std::int64_t>> masses(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        std::int64_t sum = 0;
        for (int j = 0; j < n; ++j) {
            const std::int64_t q = t.integer("mass");
            require(q >= 0, ErrorCode::parse, "masses must be non-negative");
            require(sum <= big_n - q, ErrorCode::parse,
                    "masses of dimension " + std::to_string(r + 1) + " exceed N = " + std::to_string(big_n));
            sum += q;
            masses[static_cast<std::size_t>(r)].push_back(q);
        }
        require(sum == big_n, ErrorCode::parse,
                "masses of dimension " + std::to_string(r + 1) + " sum to " + std::to_string(sum) + ", not N = " +
                    std::to_string(big_n));
    }
    t.expect_end();
    return ProductDistribution(n, std::move(masses));
}

std::string format_distribution(const ProductDistribution& dist)
{
    std::string out = std::to_string(dist.side()) + " " + std::to_string(dist.dims()) + " " +
                      std::to_string(dist.denominator()) + "\n";
    for (int r = 1; r <= dist.dims(); ++r) {
        const auto row = dist.masses(r);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) out += ' ';
            out += std::to_string(row[j]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<double>> parse_probabilities(std::string_view text, int& side)
{
    Tokens t(text);
    side = t.small_int("n");
    const int d = t.small_int("d");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(d));
    for (auto& row : rows)
        for (int j = 0; j < side; ++j) row.push_back(t.real("probability"));
    t.expect_end();
    return rows;
}

std::string verdict_json(const Verdict& verdict)
{
    json j;
    j["decision"] = verdict.rejected() ? "reject" : "accept";
    if (verdict.witness) {
        j["witness"] = {{"x", point_json(verdict.witness->x)},
                        {"y", point_json(verdict.witness->y)},
                        {"score", verdict.witness->score}};
    } else {
        j["witness"] = nullptr;
    }
    j["queries"] = verdict.queries;
    j["trials"] = verdict.iterations;
    j["planned_trials"] = verdict.planned_iterations;
    j["effective_epsilon"] = verdict.effective_epsilon;
    j["tester"] = verdict.tester;
    return j.dump(2) + "\n";
}

std::string distance_json(const DistanceResult& result, int p, const BoundingFamily& bounds)
{
    require(p == 1 || p == 2, ErrorCode::argument, "p must be 1 or 2");
    json j;
    j["p"] = p;
    j["l1_distance"] = result.distance;
    j["matching_weight"] = result.matching_weight;
    j["range_width"] = result.range_width;
    j["points"] = result.point_count;
    j["grid"] = {{"n", result.evaluated_domain.side()}, {"d", result.evaluated_domain.dims()}};
    json edges = json::array();
    for (const auto& e : result.matching.edges) {
        edges.push_back({{"x", point_json(result.evaluated_domain.point_at(e.u))},
                         {"y", point_json(result.evaluated_domain.point_at(e.v))},
                         {"score", e.weight}});
    }
    j["matching"] = std::move(edges);
    if (p == 2) {
        bool clampable = true;
        for (int r = 1; r <= bounds.domain().dims(); ++r)
            for (int t = 1; t < bounds.domain().side(); ++t)
                clampable = clampable && bounds.lower(r, t) <= 0.0 && bounds.upper(r, t) >= 0.0;
        j["l2_lower"] = result.distance;
        j["l2_upper"] = clampable ? json(std::sqrt(result.distance)) : json(nullptr);
        j["distance"] = nullptr;
    } else {
        j["distance"] = result.distance;
    }
    return j.dump(2) + "\n";
}

} // namespace bdt
