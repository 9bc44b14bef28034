#pragma once

#include "synthlab/measures.hpp"
#include "synthlab/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace synthlab {

inline constexpr std::uint64_t kDefaultSeed = 1729; // documented default

enum class Command {
    Spectrum,
    Profile,
    Fr,
    Approx,
    Stability,
    Endpoint,
    Uncertainty,
    Kuznecov,
    Volume
};

const char* command_name(Command c);
std::optional<Command> command_from_name(const std::string& name);

struct ExperimentConfig {
    Command command = Command::Spectrum;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;

    Manifold manifold;
    double lambda_max = 10.0;

    bool has_measure = false;
    MeasureSpec measure;

    double p = 3.0;
    std::vector<double> r_grid;
    int k_terms = 5;
    int trials = 1000;
    double delta_min = 0.02;
    double delta_max = 0.2;
    int delta_count = 8;
    double eta_target = 0.1;
    long long n_samples = 100000;
    std::size_t support_points = 4096;
    std::size_t quad_nodes = 0; // 0 = automatic order

    std::string out_dir = ".";
    std::string basename = "run";

    // threads is a runtime knob with no effect on results, so it is excluded
    // from identity and from the canonical echo.
    bool operator==(const ExperimentConfig& o) const;

    // Canonical flat key = value form; re-parses to an equal config.
    std::string canonical_text() const;

    std::vector<double> delta_grid() const; // log-spaced [delta_min, delta_max]
};

struct ParseOutcome {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors; // every violation, each naming its line
};

// Flat "key = value" document with [section] headers; '#' starts a comment.
ParseOutcome parse_config(const std::string& text);

} // namespace synthlab
