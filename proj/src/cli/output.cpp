#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "chiralsim/cli.hpp"

namespace chiralsim::cli {

using nlohmann::json;

namespace {

const char* const k_param_columns[] = {"area_error", "step1_area_error", "step2_area_error",
                                       "step3_area_error", "phase_error", "delta12",
                                       "delta23", "delta13", "gamma"};
const char* const k_result_columns[] = {"p_l1", "p_l2", "p_l3", "p_r1", "p_r2", "p_r3",
                                        "contrast", "engine", "drift"};

std::array<double, 9> params(const ErrorModel& m)
{
    return {m.area_error,       m.step_area_errors[0], m.step_area_errors[1],
            m.step_area_errors[2], m.phase_error,   m.detuning.delta12,
            m.detuning.delta23, m.detuning.delta13, m.max_rate()};
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::filesystem::path resolve_output(const std::string& path)
{
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(output_dir_env); dir && *dir) {
            return std::filesystem::path(dir) / p;
        }
    }
    return p;
}

std::string csv_header()
{
    std::string out;
    for (const char* c : k_param_columns) {
        out += c;
        out += ',';
    }
    for (std::size_t k = 0; k < std::size(k_result_columns); ++k) {
        out += k_result_columns[k];
        out += k + 1 < std::size(k_result_columns) ? "," : "\n";
    }
    return out;
}

std::string csv_row(const SweepRecord& rec)
{
    std::string out;
    for (double v : params(rec.model)) {
        out += format_double(v) + ",";
    }
    for (double v : rec.p_left) {
        out += format_double(v) + ",";
    }
    for (double v : rec.p_right) {
        out += format_double(v) + ",";
    }
    out += format_double(rec.contrast) + ",";
    out += rec.error.empty() ? to_string(rec.engine) : "error";
    out += "," + format_double(rec.drift) + "\n";
    return out;
}

std::string sweep_csv(const std::vector<SweepRecord>& records)
{
    std::string out = csv_header();
    for (const auto& r : records) {
        out += csv_row(r);
    }
    return out;
}

json sweep_json(const std::vector<SweepRecord>& records)
{
    json rows = json::array();
    for (const auto& rec : records) {
        json row = json::object();
        const auto p = params(rec.model);
        for (std::size_t k = 0; k < p.size(); ++k) {
            row[k_param_columns[k]] = p[k];
        }
        for (std::size_t k = 0; k < 3; ++k) {
            row[k_result_columns[k]] = number_or_null(rec.p_left[k]);
            row[k_result_columns[3 + k]] = number_or_null(rec.p_right[k]);
        }
        row["contrast"] = number_or_null(rec.contrast);
        row["engine"] = rec.error.empty() ? to_string(rec.engine) : "error";
        row["drift"] = number_or_null(rec.drift);
        if (!rec.error.empty()) {
            row["error"] = rec.error;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json protocol_json(const DiscriminationReport& report)
{
    json j = json::object();
    j["engine"] = to_string(report.left.engine);
    j["p_l1"] = report.left.populations[0];
    j["p_l2"] = report.left.populations[1];
    j["p_l3"] = report.left.populations[2];
    j["p_r1"] = report.right.populations[0];
    j["p_r2"] = report.right.populations[1];
    j["p_r3"] = report.right.populations[2];
    j["contrast"] = report.contrast;
    j["drift"] = std::max(report.left.drift, report.right.drift);
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace chiralsim::cli
