#include "synthlab/runner.hpp"

#include "synthlab/errors.hpp"

#include <doctest.h>

#include <string>

using namespace synthlab;

namespace {

ExperimentConfig parsed(const std::string& text) {
    auto out = parse_config(text);
    REQUIRE_MESSAGE(out.config.has_value(), text);
    return *out.config;
}

} // namespace

TEST_CASE("spectrum report carries the header and passes its assertions") {
    auto cfg = parsed(R"(
[experiment]
command = spectrum
[manifold]
model = torus2
lambda_max = 30
)");
    auto rep = run_experiment(cfg);
    CHECK(rep.all_assertions_pass());
    auto jsonl = rep.jsonl_text();
    CHECK(jsonl.rfind("{\"command\":\"spectrum\"", 0) == 0);
    CHECK(jsonl.find("\"type\":\"assertion\"") != std::string::npos);
    auto csv = rep.csv_text();
    CHECK(csv.rfind("index,n,lambda,multiplicity,cumulative_count", 0) == 0);
}

TEST_CASE("report echo re-parses to the same experiment") {
    auto cfg = parsed(R"(
[experiment]
command = profile
seed = 99
[manifold]
model = sphere2
lambda_max = 20
[measure]
preset = equator
)");
    auto rep = run_experiment(cfg);
    auto round = parse_config(rep.config_echo());
    REQUIRE(round.config.has_value());
    CHECK(*round.config == cfg);
}

TEST_CASE("volume reports are byte-identical across thread counts") {
    auto base = parsed(R"(
[experiment]
command = volume
seed = 4242
[manifold]
model = torus2
lambda_max = 10
[measure]
preset = subtorus
subtorus_k = 1
[params]
delta_min = 0.05
delta_max = 0.4
delta_count = 6
n_samples = 20000
)");
    auto cfg4 = base;
    cfg4.threads = 4;
    auto rep1 = run_experiment(base);
    auto rep4 = run_experiment(cfg4);
    CHECK(rep1.csv_text() == rep4.csv_text());
    CHECK(rep1.jsonl_text() == rep4.jsonl_text());
}

TEST_CASE("profile command flags the closed-form cross-check") {
    auto cfg = parsed(R"(
[experiment]
command = profile
[manifold]
model = sphere2
lambda_max = 24
[measure]
preset = equator
)");
    auto rep = run_experiment(cfg);
    CHECK(rep.all_assertions_pass());
    CHECK(rep.jsonl_text().find("closed_vs_quadrature_norm2") != std::string::npos);
}

TEST_CASE("kuznecov rejects torus configs at parse time") {
    auto out = parse_config(R"(
[experiment]
command = kuznecov
[manifold]
model = torus2
lambda_max = 10
[measure]
preset = subtorus
subtorus_k = 1
)");
    CHECK_FALSE(out.config.has_value());
}

TEST_CASE("failed assertions are counted for the exit-code contract") {
    Report rep("spectrum", 1, "");
    rep.add_assertion("holds", 0.5, 1.0, 0.1, true);
    CHECK(rep.all_assertions_pass());
    rep.add_assertion("breaks", 2.0, 1.0, 0.1, false);
    CHECK_FALSE(rep.all_assertions_pass());
    CHECK(rep.failures() == 1);
    CHECK(rep.jsonl_text().find("\"pass\":false") != std::string::npos);
}

TEST_CASE("endpoint refuses zero-dimensional supports") {
    auto cfg = parsed(R"(
[experiment]
command = endpoint
[manifold]
model = torus2
lambda_max = 20
[measure]
preset = atoms
atoms = 1.0,2.0,0,1.0
[params]
r_grid = 4,8
)");
    CHECK_THROWS_AS(run_experiment(cfg), ArgumentError);
}
