#include "synthlab/errors.hpp"
#include "synthlab/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw synthlab::ArgumentError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthlab: spectral synthesis experiments on model manifolds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int threads = 0;

    const char* commands[] = {"spectrum", "profile",  "fr",          "approx",  "stability",
                              "endpoint", "uncertainty", "kuznecov", "volume"};
    for (const char* name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (overrides the config)");
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
    }

    CLI11_PARSE(app, argc, argv);
    std::string sub_name = app.get_subcommands().front()->get_name();

    try {
        auto outcome = synthlab::parse_config(read_file(config_path));
        if (!outcome.config) {
            std::cerr << "config invalid (" << outcome.errors.size() << " problem"
                      << (outcome.errors.size() == 1 ? "" : "s") << "):\n";
            for (const auto& e : outcome.errors)
                std::cerr << "  - " << e << "\n";
            return 1;
        }
        auto cfg = *outcome.config;
        if (synthlab::command_name(cfg.command) != sub_name) {
            auto cli_cmd = synthlab::command_from_name(sub_name);
            if (!cli_cmd) {
                std::cerr << "unknown command " << sub_name << "\n";
                return 1;
            }
            cfg.command = *cli_cmd;
            // Re-validate under the CLI-selected command; threads is not part
            // of the canonical text, so carry it across.
            int keep_threads = cfg.threads;
            auto recheck = synthlab::parse_config(cfg.canonical_text());
            if (!recheck.config) {
                std::cerr << "config invalid for command " << sub_name << ":\n";
                for (const auto& e : recheck.errors)
                    std::cerr << "  - " << e << "\n";
                return 1;
            }
            cfg = *recheck.config;
            cfg.threads = keep_threads;
        }
        if (seed >= 0)
            cfg.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0)
            cfg.threads = threads;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;

        int code = synthlab::run_and_write(cfg);
        std::cout << cfg.out_dir << "/" << cfg.basename << ".csv\n"
                  << cfg.out_dir << "/" << cfg.basename << ".jsonl\n";
        if (code != 0)
            std::cerr << "assertion failures recorded in the summary\n";
        return code;
    } catch (const synthlab::ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 1;
    } catch (const synthlab::ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return 1;
    } catch (const synthlab::HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
