#include "mbm/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "mbm/errors.hpp"

namespace mbm {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_json(std::string_view text, const char* what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

// Loaders re-validate the decoded object; a file that breaks an invariant
// is malformed input, not a caller bug.
template <typename Fn>
void validate_as_parse(const char* what, Fn&& fn) {
    try {
        fn();
    } catch (const ParameterError& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

ordered_json points_to_json(const std::vector<cplx>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : pts) arr.push_back({{"re", p.real()}, {"im", p.imag()}});
    return arr;
}

std::vector<cplx> points_from_json(const ordered_json& arr, const char* what) {
    if (!arr.is_array()) throw ParseError(std::string(what) + ": expected an array");
    std::vector<cplx> pts;
    pts.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("re") || !item.contains("im") ||
            !item["re"].is_number() || !item["im"].is_number())
            throw ParseError(std::string(what) + ": entries need numeric re/im");
        pts.emplace_back(item["re"].get<double>(), item["im"].get<double>());
    }
    return pts;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double_field(std::string_view s, const char* what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(std::string(what) + ": bad number '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_int_field(std::string_view s, const char* what) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(std::string(what) + ": bad integer '" + std::string(s) + "'");
    return v;
}

// Lines of a CSV body after checking the exact expected header.
std::vector<std::string_view> csv_rows(std::string_view text, std::string_view header,
                                       const char* what) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        const std::string_view line = text.substr(start, pos - start);
        if (!line.empty()) lines.push_back(line);
        start = pos + 1;
    }
    if (lines.empty() || lines.front() != header)
        throw ParseError(std::string(what) + ": expected header '" + std::string(header) + "'");
    lines.erase(lines.begin());
    return lines;
}

void check_no_separator(const std::string& label) {
    if (label.find(',') != std::string::npos || label.find('\n') != std::string::npos)
        throw ParameterError("curve label must not contain ',' or newline");
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw NumericError("double formatting failed");
    return std::string(buf.data(), p);
}

std::string constellation_to_json(const Constellation& c) {
    c.validate();
    ordered_json j;
    j["k"] = c.k;
    j["provenance"] = to_string(c.provenance);
    if (c.seed)
        j["seed"] = *c.seed;
    else
        j["seed"] = nullptr;
    j["points"] = points_to_json(c.points);
    return dump(j);
}

Constellation constellation_from_json(std::string_view text) {
    const ordered_json j = parse_json(text, "constellation");
    if (!j.is_object() || !j.contains("k") || !j.contains("provenance") ||
        !j.contains("seed") || !j.contains("points"))
        throw ParseError("constellation: missing k/provenance/seed/points");
    Constellation c;
    if (!j["k"].is_number_integer()) throw ParseError("constellation: k must be an integer");
    c.k = j["k"].get<int>();
    const auto prov = provenance_from_string(j["provenance"].get<std::string>());
    if (!prov) throw ParseError("constellation: unknown provenance");
    c.provenance = *prov;
    if (!j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
    c.points = points_from_json(j["points"], "constellation points");
    validate_as_parse("constellation", [&] { c.validate(); });
    return c;
}

void save_constellation(const Constellation& c, const std::filesystem::path& path) {
    write_text_file(path, constellation_to_json(c));
}

Constellation load_constellation(const std::filesystem::path& path) {
    return constellation_from_json(read_text_file(path));
}

std::string weights_to_json(const WeightsFile& w) {
    w.weights.validate();
    if (w.metric != "euclidean" && w.metric != "hamming")
        throw ParameterError("weights metric must be euclidean or hamming");
    ordered_json j;
    j["k"] = w.weights.k;
    j["weights"] = points_to_json(w.weights.weights);
    j["achieved_dmin"] = w.achieved_dmin;
    j["metric"] = w.metric;
    return dump(j);
}

WeightsFile weights_from_json(std::string_view text) {
    const ordered_json j = parse_json(text, "weights");
    if (!j.is_object() || !j.contains("k") || !j.contains("weights") ||
        !j.contains("achieved_dmin") || !j.contains("metric"))
        throw ParseError("weights: missing k/weights/achieved_dmin/metric");
    WeightsFile w;
    w.weights.k = j["k"].get<int>();
    w.weights.weights = points_from_json(j["weights"], "weights");
    w.achieved_dmin = j["achieved_dmin"].get<double>();
    w.metric = j["metric"].get<std::string>();
    if (w.metric != "euclidean" && w.metric != "hamming")
        throw ParseError("weights: metric must be euclidean or hamming");
    validate_as_parse("weights", [&] { w.weights.validate(); });
    return w;
}

void save_weights(const WeightsFile& w, const std::filesystem::path& path) {
    write_text_file(path, weights_to_json(w));
}

WeightsFile load_weights(const std::filesystem::path& path) {
    return weights_from_json(read_text_file(path));
}

std::string mapping_to_json(const MappingFile& m) {
    m.mapping.validate();
    ordered_json j;
    j["k"] = m.mapping.k;
    j["labels"] = m.mapping.label_of;
    j["achieved_cost"] = m.achieved_cost;
    j["metric"] = "hamming";
    return dump(j);
}

MappingFile mapping_from_json(std::string_view text) {
    const ordered_json j = parse_json(text, "mapping");
    if (!j.is_object() || !j.contains("k") || !j.contains("labels") ||
        !j.contains("achieved_cost") || !j.contains("metric"))
        throw ParseError("mapping: missing k/labels/achieved_cost/metric");
    if (j["metric"].get<std::string>() != "hamming")
        throw ParseError("mapping: metric must be hamming");
    MappingFile m;
    m.mapping.k = j["k"].get<int>();
    m.mapping.label_of = j["labels"].get<std::vector<std::uint32_t>>();
    m.achieved_cost = j["achieved_cost"].get<long>();
    validate_as_parse("mapping", [&] { m.mapping.validate(); });
    return m;
}

void save_mapping(const MappingFile& m, const std::filesystem::path& path) {
    write_text_file(path, mapping_to_json(m));
}

MappingFile load_mapping(const std::filesystem::path& path) {
    return mapping_from_json(read_text_file(path));
}

std::string curve_to_csv(const SerCurve& curve) {
    check_no_separator(curve.label);
    std::string out = "snr_db,errors,trials,rate,label\n";
    for (const auto& row : curve.rows) {
        out += format_double(row.snr_db);
        out += ',';
        out += std::to_string(row.errors);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += format_double(row.rate);
        out += ',';
        out += curve.label;
        out += '\n';
    }
    return out;
}

SerCurve curve_from_csv(std::string_view text) {
    SerCurve curve;
    for (const auto line : csv_rows(text, "snr_db,errors,trials,rate,label", "curve")) {
        const auto fields = split(line, ',');
        if (fields.size() != 5) throw ParseError("curve: expected 5 fields per row");
        SerRow row;
        row.snr_db = parse_double_field(fields[0], "curve snr_db");
        row.errors = parse_int_field(fields[1], "curve errors");
        row.trials = parse_int_field(fields[2], "curve trials");
        row.rate = parse_double_field(fields[3], "curve rate");
        if (row.trials > 0 &&
            row.rate != static_cast<double>(row.errors) / static_cast<double>(row.trials))
            throw ParseError("curve: rate does not equal errors/trials");
        curve.rows.push_back(row);
        curve.label = std::string(fields[4]);
    }
    return curve;
}

void save_curve(const SerCurve& curve, const std::filesystem::path& path) {
    write_text_file(path, curve_to_csv(curve));
}

SerCurve load_curve(const std::filesystem::path& path) {
    return curve_from_csv(read_text_file(path));
}

std::string trace_to_csv(std::span<const TrialRecord> trace) {
    std::string out = "trial,accepted,d_value\n";
    for (const auto& rec : trace) {
        out += std::to_string(rec.trial);
        out += ',';
        out += rec.accepted ? '1' : '0';
        out += ',';
        out += format_double(rec.d_value);
        out += '\n';
    }
    return out;
}

std::vector<TrialRecord> trace_from_csv(std::string_view text) {
    std::vector<TrialRecord> trace;
    for (const auto line : csv_rows(text, "trial,accepted,d_value", "trace")) {
        const auto fields = split(line, ',');
        if (fields.size() != 3) throw ParseError("trace: expected 3 fields per row");
        TrialRecord rec;
        rec.trial = parse_int_field(fields[0], "trace trial");
        const std::int64_t acc = parse_int_field(fields[1], "trace accepted");
        if (acc != 0 && acc != 1) throw ParseError("trace: accepted must be 0 or 1");
        rec.accepted = acc == 1;
        rec.d_value = parse_double_field(fields[2], "trace d_value");
        trace.push_back(rec);
    }
    return trace;
}

void save_trace(std::span<const TrialRecord> trace, const std::filesystem::path& path) {
    write_text_file(path, trace_to_csv(trace));
}

std::string histogram_to_csv(const Histogram& h, bool max_normalized) {
    h.validate();
    double scale = 1.0;
    if (max_normalized) {
        double peak = 0.0;
        for (std::size_t b = 0; b < h.counts.size(); ++b) peak = std::max(peak, h.density(b));
        if (peak > 0.0) scale = 1.0 / peak;
    }
    std::string out = "bin_left,bin_right,count,density\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out += format_double(h.edges[b]);
        out += ',';
        out += format_double(h.edges[b + 1]);
        out += ',';
        out += std::to_string(h.counts[b]);
        out += ',';
        out += format_double(h.density(b) * scale);
        out += '\n';
    }
    return out;
}

Histogram histogram_from_csv(std::string_view text) {
    Histogram h;
    bool first = true;
    for (const auto line : csv_rows(text, "bin_left,bin_right,count,density", "histogram")) {
        const auto fields = split(line, ',');
        if (fields.size() != 4) throw ParseError("histogram: expected 4 fields per row");
        const double left = parse_double_field(fields[0], "histogram bin_left");
        const double right = parse_double_field(fields[1], "histogram bin_right");
        if (first) {
            h.edges.push_back(left);
            first = false;
        } else if (h.edges.back() != left) {
            throw ParseError("histogram: bins must be contiguous");
        }
        h.edges.push_back(right);
        h.counts.push_back(parse_int_field(fields[2], "histogram count"));
    }
    for (auto c : h.counts) h.total += c;
    validate_as_parse("histogram", [&] { h.validate(); });
    return h;
}

void save_histogram(const Histogram& h, const std::filesystem::path& path,
                    bool max_normalized) {
    write_text_file(path, histogram_to_csv(h, max_normalized));
}

std::string pdf_overlay_to_csv(const std::function<double(double)>& pdf, double lo,
                               double hi, int samples) {
    if (samples < 2) throw ParameterError("overlay needs at least 2 samples");
    if (!(lo < hi)) throw ParameterError("overlay range must satisfy lo < hi");
    std::string out = "d,pdf\n";
    for (int i = 0; i < samples; ++i) {
        const double d = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        out += format_double(d);
        out += ',';
        out += format_double(pdf(d));
        out += '\n';
    }
    return out;
}

void save_pdf_overlay(const std::function<double(double)>& pdf, double lo, double hi,
                      int samples, const std::filesystem::path& path) {
    write_text_file(path, pdf_overlay_to_csv(pdf, lo, hi, samples));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace mbm
