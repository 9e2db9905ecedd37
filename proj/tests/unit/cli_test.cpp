#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "routerisk/cli/commands.hpp"
#include "routerisk/error.hpp"
#include "routerisk/io/json_io.hpp"

using namespace routerisk;
namespace fs = std::filesystem;

namespace {

io::RunConfig small_config(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "routerisk_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    io::RunConfig c;
    c.paths.scenarios = (dir / "scenarios.jsonl").string();
    c.paths.family_scenarios = (dir / "family.jsonl").string();
    c.paths.weights = (dir / "gate.json").string();
    c.paths.labels = (dir / "labels.csv").string();
    c.paths.report_dir = (dir / "report").string();
    c.benchmark.regimes = {bench::Regime::Clean, bench::Regime::Mixed};
    c.benchmark.scenarios_per_regime = 10;
    c.benchmark.families = {bench::Family::BA};
    c.benchmark.family_seeds = 2;
    c.gate.epochs = 5;
    c.benchmark.eval_split = "all";
    c.cascade.trials = 2000;
    c.cascade.depth = 4;
    c.latency.calls = 20;
    c.latency.snapshots = 4;
    return c;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char ch : text) n += ch == '\n';
    return n;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("gen writes byte-identical files on rerun") {
        const auto c = small_config("gen");
        std::ostringstream log;
        const auto r = cli::cmd_gen(c, log);
        CHECK(r.regime_scenarios == 20);
        CHECK(r.family_scenarios == 10);
        const auto first = io::read_text_file(c.paths.scenarios);
        const auto families = io::read_text_file(c.paths.family_scenarios);
        cli::cmd_gen(c, log);
        CHECK(io::read_text_file(c.paths.scenarios) == first);
        CHECK(io::read_text_file(c.paths.family_scenarios) == families);
        CHECK(line_count(first) == 20);
    }

    TEST_CASE("train and eval produce weights, labels and reports") {
        auto c = small_config("pipeline");
        std::ostringstream log;
        cli::cmd_gen(c, log);
        const auto t = cli::cmd_train(c, log);
        CHECK(t.examples == 40);
        CHECK(fs::exists(c.paths.weights));
        const auto labels = io::read_text_file(c.paths.labels);
        CHECK(labels.rfind("scenario_id,group,split,route,label,margin_hyp,margin_euc,", 0) == 0);
        CHECK(line_count(labels) == 41);

        c.benchmark.scorers = {"native", "oracle", "constant", "learned_gate"};
        const auto e = cli::cmd_eval(c, log);
        REQUIRE(e.suites.size() == 2);
        for (const auto& suite : e.suites) {
            for (const auto& r : suite.results) {
                if (r.scorer == "oracle") CHECK(r.overall.win_rate == 1.0);
                if (r.scorer == "constant") CHECK(r.overall.win_rate == 0.0);
            }
        }
        CHECK(e.gate.has_value());
        for (const char* f : {"scenarios.csv", "terms.csv", "decomposition.csv", "summary.json"})
            CHECK(fs::exists(fs::path(c.paths.report_dir) / f));
    }

    TEST_CASE("commands fail cleanly on missing inputs") {
        auto c = small_config("missing");
        std::ostringstream log;
        CHECK_THROWS_AS(cli::cmd_train(c, log), Error);
        CHECK_THROWS_AS(cli::cmd_eval(c, log), Error);
        cli::cmd_gen(c, log);
        c.benchmark.scorers = {"learned_gate"};
        CHECK_THROWS_AS(cli::cmd_eval(c, log), Error);
        c.benchmark.scorers = {"unknown"};
        CHECK_THROWS_AS(cli::cmd_eval(c, log), Error);
    }

    TEST_CASE("cascade report has one row per grid point and branching") {
        auto c = small_config("cascade");
        c.cascade.branching = {2.0, 3.0};
        std::ostringstream log;
        const auto reports = cli::cmd_cascade(c, log);
        REQUIRE(reports.size() == 2);
        const auto csv = io::read_text_file(fs::path(c.paths.report_dir) / "criticality.csv");
        CHECK(line_count(csv) == 1 + 2 * 20);
    }

    TEST_CASE("latency rows cover the requested scorers") {
        auto c = small_config("latency");
        std::ostringstream log;
        cli::cmd_gen(c, log);
        c.benchmark.scorers = {"native", "euclidean"};
        const auto rows = cli::cmd_bench(c, log);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            CHECK(r.calls == 20);
            CHECK(r.median_us <= r.p95_us);
        }
    }
}
