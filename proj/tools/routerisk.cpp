// routerisk: scenario generation, gate training, evaluation, cascade sweeps
// and latency measurement.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "routerisk/cli/commands.hpp"
#include "routerisk/error.hpp"
#include "routerisk/io/json_io.hpp"

namespace {

using routerisk::Error;
using routerisk::ErrorCode;
namespace io = routerisk::io;
namespace bench = routerisk::bench;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Flag values; unset flags leave the config file (or defaults) untouched.
struct Overrides {
    std::string config;
    std::optional<std::string> scenarios, family_scenarios, weights, labels, out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> regimes, families, scorers;
    std::optional<std::string> protocol, split;
    std::optional<std::size_t> count, family_seeds, threads;
    std::optional<std::size_t> epochs;
    std::optional<double> learning_rate;
    std::optional<unsigned> feature_mask;
    std::vector<double> branching, p_grid;
    std::optional<std::size_t> depth, trials, calls;
    bool dump_config = false;
};

io::RunConfig resolve(const Overrides& o) {
    io::RunConfig c = o.config.empty() ? io::RunConfig{} : io::load_config(o.config);
    if (o.scenarios) c.paths.scenarios = *o.scenarios;
    if (o.family_scenarios) c.paths.family_scenarios = *o.family_scenarios;
    if (o.weights) c.paths.weights = *o.weights;
    if (o.labels) c.paths.labels = *o.labels;
    if (o.out) c.paths.report_dir = *o.out;
    if (o.seed) {
        c.benchmark.seed = *o.seed;
        c.cascade.seed = *o.seed;
        c.gate.seed = *o.seed;
    }
    if (!o.regimes.empty()) {
        c.benchmark.regimes.clear();
        for (const auto& r : o.regimes) c.benchmark.regimes.push_back(bench::parse_regime(r));
    }
    if (!o.families.empty()) {
        c.benchmark.families.clear();
        for (const auto& f : o.families) c.benchmark.families.push_back(bench::parse_family(f));
    }
    if (!o.scorers.empty()) c.benchmark.scorers = o.scorers;
    if (o.protocol) c.benchmark.protocol = bench::parse_protocol(*o.protocol);
    if (o.split) c.benchmark.eval_split = *o.split;
    if (o.count) c.benchmark.scenarios_per_regime = *o.count;
    if (o.family_seeds) c.benchmark.family_seeds = *o.family_seeds;
    if (o.threads) c.benchmark.threads = *o.threads;
    if (o.epochs) c.gate.epochs = *o.epochs;
    if (o.learning_rate) c.gate.learning_rate = *o.learning_rate;
    if (o.feature_mask) {
        if (*o.feature_mask > routerisk::kAllFeatures) throw Error(ErrorCode::InvalidConfig, "feature mask must fit in 9 bits");
        c.gate.feature_mask = static_cast<std::uint16_t>(*o.feature_mask);
    }
    if (!o.branching.empty()) c.cascade.branching = o.branching;
    if (!o.p_grid.empty()) c.cascade.p_grid = o.p_grid;
    if (o.depth) c.cascade.depth = *o.depth;
    if (o.trials) c.cascade.trials = *o.trials;
    if (o.calls) c.latency.calls = *o.calls;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Route risk scoring benchmark harness"};
    app.require_subcommand(1);
    Overrides o;
    app.add_option("-c,--config", o.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
    app.add_flag("--dump-config", o.dump_config, "Print the effective config as JSON before running");
    app.add_option("--scenarios", o.scenarios, "Regime scenario JSON-lines file");
    app.add_option("--family-scenarios", o.family_scenarios, "Family scenario JSON-lines file");
    app.add_option("--weights", o.weights, "Gate weight file");
    app.add_option("--labels", o.labels, "Gate label audit CSV");
    app.add_option("-o,--out", o.out, "Report directory");
    app.add_option("--seed", o.seed, "Base seed for generation, training and cascades");
    app.add_option("--threads", o.threads, "Worker threads for evaluation");

    auto* gen = app.add_subcommand("gen", "Generate regime and family scenarios");
    gen->add_option("--regime", o.regimes, "Regime to generate (repeatable)");
    gen->add_option("--family", o.families, "Family to generate (repeatable)");
    gen->add_option("--protocol", o.protocol, "Attack protocol for regime scenarios");
    gen->add_option("--count", o.count, "Scenarios per regime");
    gen->add_option("--family-seeds", o.family_seeds, "Seeds per family");

    auto* train = app.add_subcommand("train", "Train the geometry gate on train-split scenarios");
    train->add_option("--epochs", o.epochs, "Training epochs");
    train->add_option("--lr", o.learning_rate, "Learning rate");
    train->add_option("--feature-mask", o.feature_mask, "9-bit feature mask");

    auto* eval = app.add_subcommand("eval", "Evaluate scorers and write reports");
    eval->add_option("--scorer", o.scorers, "Scorer to evaluate (repeatable)");
    eval->add_option("--split", o.split, "eval, train or all");

    auto* cascade = app.add_subcommand("cascade", "Cascade criticality sweep");
    cascade->add_option("--branching", o.branching, "Branching factor (repeatable)");
    cascade->add_option("--p", o.p_grid, "Transmission probabilities (repeatable)");
    cascade->add_option("--depth", o.depth, "Tree depth");
    cascade->add_option("--trials", o.trials, "Monte-Carlo trials per probability");

    auto* bench_cmd = app.add_subcommand("bench", "Per-call scorer latency");
    bench_cmd->add_option("--scorer", o.scorers, "Scorer to time (repeatable)");
    bench_cmd->add_option("--calls", o.calls, "Calls per scorer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const io::RunConfig cfg = resolve(o);
        if (o.dump_config) std::cout << io::to_json(cfg).dump(2) << "\n";
        if (gen->parsed()) routerisk::cli::cmd_gen(cfg, std::cout);
        if (train->parsed()) routerisk::cli::cmd_train(cfg, std::cout);
        if (eval->parsed()) routerisk::cli::cmd_eval(cfg, std::cout);
        if (cascade->parsed()) routerisk::cli::cmd_cascade(cfg, std::cout);
        if (bench_cmd->parsed()) routerisk::cli::cmd_bench(cfg, std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::InvalidConfig ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
