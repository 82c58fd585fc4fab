#include "lrvlab/io.hpp"

#include "lrvlab/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

namespace lrvlab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

struct Record {
    std::vector<std::string> fields;
    std::vector<bool> quoted;
    long line = 0;
};

std::vector<Record> split_records(std::string_view text, std::string_view source) {
    std::vector<Record> out;
    std::size_t pos = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
    long line = 1;
    while (pos < text.size()) {
        Record rec;
        rec.line = line;
        std::string field;
        bool quoted = false;
        bool end_of_record = false;
        while (!end_of_record) {
            if (pos < text.size() && text[pos] == '"' && field.find_first_not_of(" \t") == std::string::npos) {
                field.clear();
                quoted = true;
                ++pos;
                for (;;) {
                    if (pos >= text.size()) {
                        std::ostringstream msg;
                        msg << source << ": unterminated quoted field starting on line " << rec.line;
                        throw DomainError(msg.str());
                    }
                    const char c = text[pos++];
                    if (c == '"') {
                        if (pos < text.size() && text[pos] == '"') {
                            field.push_back('"');
                            ++pos;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field.push_back(c);
                    }
                }
                while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
                if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
                    std::ostringstream msg;
                    msg << source << ": unexpected character after closing quote on line " << line;
                    throw DomainError(msg.str());
                }
            }
            if (pos >= text.size()) {
                end_of_record = true;
            } else if (text[pos] == ',') {
                ++pos;
            } else if (text[pos] == '\r' || text[pos] == '\n') {
                if (text[pos] == '\r') ++pos;
                if (pos < text.size() && text[pos] == '\n') ++pos;
                ++line;
                end_of_record = true;
            } else {
                field.push_back(text[pos++]);
                continue;
            }
            rec.fields.push_back(std::move(field));
            rec.quoted.push_back(quoted);
            field.clear();
            quoted = false;
        }
        out.push_back(std::move(rec));
    }
    // trailing blank lines
    while (!out.empty() && out.back().fields.size() == 1 && !out.back().quoted[0] &&
           trim(out.back().fields[0]).empty())
        out.pop_back();
    return out;
}

bool is_missing_token(std::string_view raw) {
    std::string s = trim(raw);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    static const char* const tokens[] = {"", "na", "n/a", "nan", "-nan", "null", "none", "missing", "."};
    return std::any_of(std::begin(tokens), std::end(tokens), [&](const char* t) { return s == t; });
}

std::optional<double> parse_number(std::string_view raw) {
    std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    std::string_view v = s;
    if (v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) return std::nullopt;
    return out;
}

nlohmann::json toml_to_json(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
        return j;
    }
    if (const auto* a = node.as_array()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& v : *a) j.push_back(toml_to_json(v));
        return j;
    }
    if (const auto* s = node.as_string()) return s->get();
    if (const auto* i = node.as_integer()) return i->get();
    if (const auto* f = node.as_floating_point()) return f->get();
    if (const auto* b = node.as_boolean()) return b->get();
    std::ostringstream os;
    node.visit([&](const auto& v) { os << v; });
    return os.str();
}

nlohmann::json matrix_json(const std::vector<double>& flat, std::size_t dims) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < dims; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < dims; ++c) row.push_back(flat[r * dims + c]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

CsvData read_csv(std::istream& in, std::string_view source) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto records = split_records(text, source);
    if (records.empty()) throw DomainError(std::string(source) + ": no data");

    CsvData out{{}, TimeSeries(std::vector<double>{0.0, 0.0})};
    std::size_t first = 0;
    {
        const auto& r0 = records.front();
        bool header = false;
        for (const auto& f : r0.fields)
            if (!parse_number(f) && !is_missing_token(f)) header = true;
        if (header) {
            for (const auto& f : r0.fields) out.header.push_back(trim(f));
            first = 1;
        }
    }
    if (first >= records.size()) throw DomainError(std::string(source) + ": header without data rows");
    const std::size_t dims = records[first].fields.size();
    if (!out.header.empty() && out.header.size() != dims) {
        std::ostringstream msg;
        msg << source << ": header has " << out.header.size() << " columns but record 2 has " << dims;
        throw DomainError(msg.str());
    }
    std::vector<double> data;
    data.reserve((records.size() - first) * dims);
    for (std::size_t r = first; r < records.size(); ++r) {
        const auto& rec = records[r];
        const long row = static_cast<long>(r) + 1;
        if (rec.fields.size() != dims) {
            std::ostringstream msg;
            msg << source << ": record " << row << " (line " << rec.line << ") has " << rec.fields.size()
                << " columns, expected " << dims;
            throw DomainError(msg.str());
        }
        for (std::size_t c = 0; c < dims; ++c) {
            const auto& f = rec.fields[c];
            std::ostringstream where;
            where << source << ": record " << row << " (line " << rec.line << "), column " << c + 1;
            if (is_missing_token(f)) throw DomainError(where.str() + ": missing value '" + trim(f) + "' is not supported");
            const auto v = parse_number(f);
            if (!v) throw DomainError(where.str() + ": cannot parse '" + trim(f) + "' as a number");
            if (!std::isfinite(*v)) throw DomainError(where.str() + ": non-finite value '" + trim(f) + "'");
            data.push_back(*v);
        }
    }
    if (data.size() / dims < 2) throw InsufficientDataError(std::string(source) + ": need at least two observations");
    out.series = TimeSeries(std::move(data), dims);
    return out;
}

CsvData read_csv_file(const std::string& path) {
    if (path == "-") return read_csv(std::cin, "<stdin>");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open input file '" + path + "'");
    return read_csv(in, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv(std::ostream& out, const TimeSeries& x, const std::vector<std::string>& header) {
    if (!header.empty()) {
        if (header.size() != x.dims()) throw DomainError("CSV header width does not match the series");
        for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << csv_field(header[c]);
        out << '\n';
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t s = 0; s < x.dims(); ++s) out << (s ? "," : "") << format_double(x(i, s));
        out << '\n';
    }
}

nlohmann::json parse_toml(std::string_view text, std::string_view source) {
    try {
        const auto table = toml::parse(text, source);
        return toml_to_json(table);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw ConfigError(msg.str());
    }
}

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open config file '" + path.string() + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (path.extension() == ".toml") return parse_toml(text, path.string());
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

nlohmann::json document(std::string_view kind, nlohmann::json payload) {
    nlohmann::json j = nlohmann::json::object();
    j["schema"] = std::string(kSchema);
    j["kind"] = std::string(kind);
    if (payload.is_object()) {
        for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = std::move(it.value());
    } else {
        j["result"] = std::move(payload);
    }
    return j;
}

void to_json(nlohmann::json& j, const DifferenceSequence& d) {
    j = {{"m", d.order()},
         {"d", std::vector<double>(d.coefficients().begin(), d.coefficients().end())},
         {"deltas", std::vector<double>(d.deltas().begin(), d.deltas().end())},
         {"Delta_m", d.delta_m()}};
}

void to_json(nlohmann::json& j, const EstimatorConfig& c) {
    j = {{"sequence", c.seq}, {"kernel", c.kernel.name()}, {"ell", c.ell}, {"h", c.h},
         {"lambda", c.lambda()}, {"p", c.p}, {"symmetrize", c.symmetrize}};
    j["center_differences"] = c.center_differences ? nlohmann::json(*c.center_differences) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const LrvResult& r) {
    j = {{"value", r.value}, {"dims", r.dims}, {"gamma_d", r.gamma_d}, {"config", r.config},
         {"regime", to_string(r.regime)}};
    if (r.dims > 1) j["matrix"] = matrix_json(r.matrix, r.dims);
}

void to_json(nlohmann::json& j, const DetectedJump& d) {
    j = {{"time", d.time}, {"raw_jump", d.raw_jump}, {"winsorized_jump", d.winsorized_jump}};
}

void to_json(nlohmann::json& j, const SegmentFit& s) {
    j = {{"start", s.start}, {"length", s.length}, {"intercept", s.intercept}, {"slope", s.slope}, {"shift", s.shift}};
}

void to_json(nlohmann::json& j, const RcpReport& r) {
    j = {{"b", r.b}, {"M", r.M}, {"N", r.N}, {"jumps", r.detected_jumps}, {"segments", r.slopes},
         {"warnings", r.warnings}};
}

void to_json(nlohmann::json& j, const PilotEstimates& p) {
    j = {{"v_sharp", p.v_sharp}, {"vq_sharp", p.vq_sharp}, {"ell_v", p.ell_v}, {"ell_vq", p.ell_vq},
         {"gamma0_d", p.gamma0_d}};
}

void to_json(nlohmann::json& j, const SuggestedResult& r) {
    j = {{"lrv", r.lrv.value},
         {"ell", r.ell},
         {"h", r.lrv.config.h},
         {"m", r.lrv.config.m()},
         {"kernel", r.lrv.config.kernel.name()},
         {"regime", to_string(r.lrv.regime)},
         {"fallback", r.fallback},
         {"clamped", r.clamped},
         {"pilots", r.pilots},
         {"estimate", r.lrv}};
    j["ell_hat"] = std::isfinite(r.ell_hat) ? nlohmann::json(r.ell_hat) : nlohmann::json(nullptr);
    j["rcp"] = r.rcp ? nlohmann::json(*r.rcp) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const TestResult& r) {
    j = {{"statistic", r.statistic}, {"critical_value", r.critical_value}, {"level", r.level},
         {"reject", r.reject}, {"lrv_used", r.lrv_used}, {"location", r.location}};
}

void to_json(nlohmann::json& j, const TrendBand& b) {
    j = {{"grid", b.grid}, {"mu_hat", b.mu_hat}, {"half_width", b.half_width}, {"level", b.level},
         {"bandwidth", b.bandwidth}, {"b_star", b.b_star}, {"v_hat", b.v_hat}, {"gamma0", b.gamma0},
         {"quantile", b.quantile}};
}

void to_json(nlohmann::json& j, const MseTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"estimator", r.estimator}, {"mean", r.mean}, {"bias", r.bias}, {"mse", r.mse}, {"se", r.se}});
    nlohmann::json paired = nlohmann::json::array();
    for (std::size_t a = 0; a < t.rows.size(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t b = 0; b < t.rows.size(); ++b) row.push_back(a == b ? 0.0 : t.paired_se(a, b));
        paired.push_back(std::move(row));
    }
    j = {{"target", t.target}, {"rows", rows}, {"paired_se", paired}};
}

void to_json(nlohmann::json& j, const PowerTable& t) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : t.cells)
        cells.push_back({{"estimator", c.estimator}, {"xi", c.xi}, {"power", c.power},
                         {"adjusted_power", c.adjusted_power}, {"se", c.se}});
    j = {{"cells", cells}, {"null_quantiles", t.null_quantiles}};
}

void to_json(nlohmann::json& j, const CoverageRow& r) {
    j = {{"b", r.b}, {"coverage", r.coverage}, {"mean_half_width", r.mean_half_width}, {"se", r.se}};
}

void write_csv(std::ostream& out, const MseTable& t) {
    out << "estimator,target,mean,bias,mse,se\n";
    for (const auto& r : t.rows)
        out << csv_field(r.estimator) << ',' << format_double(t.target) << ',' << format_double(r.mean) << ','
            << format_double(r.bias) << ',' << format_double(r.mse) << ',' << format_double(r.se) << '\n';
}

void write_csv(std::ostream& out, const PowerTable& t) {
    out << "estimator,xi,power,adjusted_power,se\n";
    for (const auto& c : t.cells)
        out << csv_field(c.estimator) << ',' << format_double(c.xi) << ',' << format_double(c.power) << ','
            << format_double(c.adjusted_power) << ',' << format_double(c.se) << '\n';
}

void write_csv(std::ostream& out, const std::vector<CoverageRow>& rows) {
    out << "b,coverage,mean_half_width,se\n";
    for (const auto& r : rows)
        out << format_double(r.b) << ',' << format_double(r.coverage) << ',' << format_double(r.mean_half_width) << ','
            << format_double(r.se) << '\n';
}

void write_csv(std::ostream& out, const TrendBand& b) {
    out << "t,mu_hat,lower,upper\n";
    for (std::size_t i = 0; i < b.grid.size(); ++i)
        out << format_double(b.grid[i]) << ',' << format_double(b.mu_hat[i]) << ','
            << format_double(b.mu_hat[i] - b.half_width) << ',' << format_double(b.mu_hat[i] + b.half_width) << '\n';
}

} // namespace lrvlab
