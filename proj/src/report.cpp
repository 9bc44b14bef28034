#include "synthlab/report.hpp"

#include "synthlab/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace synthlab {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Report::Report(std::string command, std::uint64_t seed, std::string config_echo)
    : command_(std::move(command)), seed_(seed), config_echo_(std::move(config_echo)) {
    json header{{"type", "header"},
                {"tool", "synthlab"},
                {"version", kToolVersion},
                {"schema", kSchemaVersion},
                {"command", command_},
                {"seed", seed_},
                {"config", config_echo_}};
    summary_lines_.push_back(header.dump());
}

void Report::set_csv_columns(const std::vector<std::string>& names) { csv_columns_ = names; }

void Report::add_csv_row(const std::vector<std::string>& cells) {
    if (cells.size() != csv_columns_.size())
        throw ArgumentError("report: row width does not match the column header");
    csv_rows_.push_back(cells);
}

void Report::add_metric(const std::string& name, double value) {
    json row{{"type", "metric"}, {"name", name}, {"value", format_double(value)}};
    summary_lines_.push_back(row.dump());
}

void Report::add_slope(const std::string& name, double slope, double residual, double target) {
    json row{{"type", "slope"},
             {"name", name},
             {"slope", format_double(slope)},
             {"residual", format_double(residual)},
             {"target", format_double(target)}};
    summary_lines_.push_back(row.dump());
}

void Report::add_assertion(const std::string& name, double value, double bound, double tolerance,
                           bool pass) {
    if (!pass)
        ++failures_;
    json row{{"type", "assertion"}, {"name", name},
             {"value", format_double(value)}, {"bound", format_double(bound)},
             {"tolerance", format_double(tolerance)}, {"pass", pass}};
    summary_lines_.push_back(row.dump());
}

std::string Report::csv_text() const {
    std::string out;
    for (std::size_t i = 0; i < csv_columns_.size(); ++i) {
        if (i)
            out += ',';
        out += csv_columns_[i];
    }
    out += '\n';
    for (const auto& row : csv_rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string Report::jsonl_text() const {
    std::string out;
    for (const auto& line : summary_lines_) {
        out += line;
        out += '\n';
    }
    return out;
}

void Report::write(const std::string& dir, const std::string& basename) const {
    std::filesystem::create_directories(dir);
    auto base = std::filesystem::path(dir) / basename;
    {
        std::ofstream csv(base.string() + ".csv", std::ios::binary | std::ios::trunc);
        csv << csv_text();
    }
    {
        std::ofstream jsonl(base.string() + ".jsonl", std::ios::binary | std::ios::trunc);
        jsonl << jsonl_text();
    }
}

} // namespace synthlab
