// Command-line front end: ranking scaling benchmarks, NSGA-II optimization
// runs and the ranker validation suite.

#include "moo/moo.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_override;
    std::string ranker_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t trials = 1000;
};

moo::bench::BenchConfig load_and_override(const CliOptions& opt) {
    moo::bench::BenchConfig cfg = moo::bench::load_config(opt.config_path);
    if (opt.seed_set) cfg.seed = opt.seed;
    if (!opt.out_override.empty()) cfg.out = opt.out_override;
    if (!opt.ranker_override.empty()) {
        auto kind = moo::ranking::ranker_from_string(opt.ranker_override);
        if (!kind) throw moo::ConfigError("unknown ranker '" + opt.ranker_override + "'");
        cfg.rankers = {*kind};
    }
    return cfg;
}

int run_bench(const CliOptions& opt) {
    const auto cfg = load_and_override(opt);
    const auto result = moo::bench::run_scaling_experiment(cfg);
    std::cout << "wrote " << result.detail.size() << " timing rows to " << result.detail_path
              << "\nwrote " << result.summary.size() << " summary rows to "
              << result.summary_path << "\n";
    return 0;
}

void write_front_csv(const std::string& path, const moo::evolution::RunResult& result) {
    std::ofstream out(path);
    if (!out) throw moo::IoError("cannot write " + path);

    std::vector<std::size_t> where(result.final_population.size());
    for (std::size_t i = 0; i < result.final_population.size(); ++i)
        where[result.final_population[i].id] = i;

    const std::size_t m = result.final_population[0].objectives.size();
    out << "genome";
    for (std::size_t k = 1; k <= m; ++k) out << ",f" << k;
    out << '\n';

    char buf[64];
    for (moo::Id id : result.final_front) {
        const moo::Individual& ind = result.final_population[where[id]];
        std::string genome(ind.genome.size(), '0');
        for (std::size_t b = 0; b < ind.genome.size(); ++b)
            if (ind.genome[b]) genome[b] = '1';
        out << genome;
        for (double v : ind.objectives) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw moo::IoError("write failed for " + path);
}

template <moo::evolution::Problem P>
int optimize_with(const moo::bench::BenchConfig& cfg, const P& problem) {
    moo::evolution::EvolutionConfig run_cfg;
    run_cfg.population_size = cfg.population;
    run_cfg.genome_length = problem.genome_length();
    run_cfg.objective_count = problem.objective_count();
    run_cfg.generations = cfg.generations;
    run_cfg.crossover_rate = cfg.crossover_rate;
    run_cfg.mutation_rate = cfg.mutation_rate;
    run_cfg.ranker = cfg.rankers.front();
    run_cfg.seed = cfg.seed;

    const auto result = moo::evolution::run(run_cfg, problem);
    write_front_csv(cfg.out, result);
    std::cout << "ranker=" << moo::ranking::to_string(run_cfg.ranker)
              << " generations=" << cfg.generations << " front_size=" << result.final_front.size()
              << " wall_s=" << result.wall_seconds << "\nwrote " << cfg.out << "\n";
    return 0;
}

int run_optimize(const CliOptions& opt) {
    const auto cfg = load_and_override(opt);
    switch (cfg.problem) {
        case moo::bench::ProblemKind::Random:
            throw moo::ConfigError(
                "optimize requires a genome-based problem "
                "(genesel-synth, genesel-files or lotz)");
        case moo::bench::ProblemKind::GeneselSynth: {
            const auto synth = moo::genesel::synth_dataset(
                cfg.genes, cfg.train_samples, cfg.test_samples, cfg.informative, cfg.separation,
                moo::detail::mix_seed(cfg.seed, 0xda7a));
            return optimize_with(cfg, moo::genesel::GeneSubsetProblem(synth.data));
        }
        case moo::bench::ProblemKind::GeneselFiles: {
            auto data = moo::dataio::load_dataset(cfg.expression_path, cfg.labels_path);
            if (cfg.prefilter > 0) data = moo::dataio::prefilter_top_k(data, cfg.prefilter);
            return optimize_with(cfg, moo::genesel::GeneSubsetProblem(data));
        }
        case moo::bench::ProblemKind::Lotz:
            return optimize_with(cfg, moo::problems::Lotz{cfg.genome_length});
    }
    return 1;
}

int run_validate(const CliOptions& opt) {
    moo::bench::ValidationConfig vc;
    vc.seed = opt.seed;
    vc.trials = opt.trials;
    const auto report = moo::bench::validate_rankers(vc);
    std::cout << "trials: " << report.trials << " (N in " << vc.min_n << ".." << vc.max_n
              << ", M in 2..4)\n"
              << "fast vs oracle mismatches:  " << report.fast_mismatches << "\n"
              << "sweep vs oracle mismatches: " << report.sweep_mismatches << "\n"
              << "position-sum dominance violations: " << report.dominance_violations << " ("
              << report.pairs_checked << " dominated pairs checked)\n"
              << (report.ok() ? "PASS" : "FAIL") << "\n";
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NSGA-II with interchangeable non-dominated ranking backends"};
    app.require_subcommand(1);

    CliOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config = cmd->add_option("--config", opt.config_path, "config file (key = value)");
        if (needs_config) config->required();
        cmd->add_option("--seed", opt.seed, "seed override")->each([&](const std::string&) {
            opt.seed_set = true;
        });
        cmd->add_option("--out", opt.out_override, "output path override");
        cmd->add_option("--ranker", opt.ranker_override,
                        "ranking backend: oracle | fast | sweep | position_sum");
    };

    auto* bench_cmd =
        app.add_subcommand("bench", "time ranking backends over a population-size grid");
    add_common(bench_cmd, true);

    auto* optimize_cmd = app.add_subcommand("optimize", "run NSGA-II and emit the final front");
    add_common(optimize_cmd, true);

    auto* validate_cmd = app.add_subcommand(
        "validate", "cross-check all ranking backends on random instances");
    validate_cmd->add_option("--seed", opt.seed, "base seed")->each([&](const std::string&) {
        opt.seed_set = true;
    });
    validate_cmd->add_option("--trials", opt.trials, "number of random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, --help exits 0
    }

    try {
        if (bench_cmd->parsed()) return run_bench(opt);
        if (optimize_cmd->parsed()) return run_optimize(opt);
        if (validate_cmd->parsed()) return run_validate(opt);
    } catch (const moo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const moo::dataio::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
