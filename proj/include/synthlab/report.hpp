#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synthlab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

// Plot-ready CSV table plus a JSON-lines summary. No timestamps and no thread
// counts anywhere: identical (config, seed) runs must serialize
// byte-identically whatever the worker pool size.
class Report {
  public:
    Report(std::string command, std::uint64_t seed, std::string config_echo);

    void set_csv_columns(const std::vector<std::string>& names);
    void add_csv_row(const std::vector<std::string>& cells);

    // "metric" row: a named value, no pass/fail semantics.
    void add_metric(const std::string& name, double value);
    // "slope" row: fitted slope with residual and target.
    void add_slope(const std::string& name, double slope, double residual, double target);
    // "assertion" row: value against a bound at an explicit tolerance.
    void add_assertion(const std::string& name, double value, double bound, double tolerance,
                       bool pass);

    bool all_assertions_pass() const { return failures_ == 0; }
    int failures() const { return failures_; }

    std::string csv_text() const;
    std::string jsonl_text() const;

    // Writes <dir>/<basename>.csv and <dir>/<basename>.jsonl.
    void write(const std::string& dir, const std::string& basename) const;

    const std::string& config_echo() const { return config_echo_; }

  private:
    std::string command_;
    std::uint64_t seed_;
    std::string config_echo_;
    std::vector<std::string> csv_columns_;
    std::vector<std::vector<std::string>> csv_rows_;
    std::vector<std::string> summary_lines_;
    int failures_ = 0;
};

// Fixed round-trip formatting used across all report output.
std::string format_double(double v);

} // namespace synthlab
