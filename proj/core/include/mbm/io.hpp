#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "mbm/constellation.hpp"
#include "mbm/optimizer.hpp"
#include "mbm/sim.hpp"
#include "mbm/stats.hpp"

namespace mbm {

// Shortest decimal form that parses back to the same double (to_chars).
std::string format_double(double v);

// Constellation JSON:
//   {"k": <int>, "provenance": "<string>", "seed": <uint64|null>,
//    "points": [{"re": <float>, "im": <float>}, ...]}
std::string constellation_to_json(const Constellation& c);
Constellation constellation_from_json(std::string_view text);
void save_constellation(const Constellation& c, const std::filesystem::path& path);
Constellation load_constellation(const std::filesystem::path& path);

// WeightVector JSON:
//   {"k": <int>, "weights": [{"re": <float>, "im": <float>}, ...],
//    "achieved_dmin": <float>, "metric": "euclidean"}
struct WeightsFile {
    WeightVector weights;
    double achieved_dmin = 0.0;
    std::string metric = "euclidean";
};
std::string weights_to_json(const WeightsFile& w);
WeightsFile weights_from_json(std::string_view text);
void save_weights(const WeightsFile& w, const std::filesystem::path& path);
WeightsFile load_weights(const std::filesystem::path& path);

// BitMapping JSON:
//   {"k": <int>, "labels": [<int>, ...], "achieved_cost": <int>,
//    "metric": "hamming"}
struct MappingFile {
    BitMapping mapping;
    long achieved_cost = 0;
};
std::string mapping_to_json(const MappingFile& m);
MappingFile mapping_from_json(std::string_view text);
void save_mapping(const MappingFile& m, const std::filesystem::path& path);
MappingFile load_mapping(const std::filesystem::path& path);

// Curve CSV, header: snr_db,errors,trials,rate,label
std::string curve_to_csv(const SerCurve& curve);
SerCurve curve_from_csv(std::string_view text);
void save_curve(const SerCurve& curve, const std::filesystem::path& path);
SerCurve load_curve(const std::filesystem::path& path);

// Trace CSV, header: trial,accepted,d_value
std::string trace_to_csv(std::span<const TrialRecord> trace);
std::vector<TrialRecord> trace_from_csv(std::string_view text);
void save_trace(std::span<const TrialRecord> trace, const std::filesystem::path& path);

// Histogram CSV, header: bin_left,bin_right,count,density
// max_normalized scales densities so the tallest bin is 1.
std::string histogram_to_csv(const Histogram& h, bool max_normalized = false);
Histogram histogram_from_csv(std::string_view text);
void save_histogram(const Histogram& h, const std::filesystem::path& path,
                    bool max_normalized = false);

// Analytic overlay CSV, header: d,pdf
std::string pdf_overlay_to_csv(const std::function<double(double)>& pdf, double lo,
                               double hi, int samples);
void save_pdf_overlay(const std::function<double(double)>& pdf, double lo, double hi,
                      int samples, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mbm
