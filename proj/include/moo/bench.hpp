#pragma once

#include "moo/core.hpp"
#include "moo/dataio.hpp"
#include "moo/evolution.hpp"
#include "moo/genesel.hpp"
#include "moo/problems.hpp"
#include "moo/ranking.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace moo::bench {

enum class ProblemKind { Random, GeneselSynth, GeneselFiles, Lotz };

struct BenchConfig {
    std::vector<ranking::Ranker> rankers = {ranking::Ranker::FastNds,
                                            ranking::Ranker::PositionSum};
    std::vector<std::size_t> sizes = {500, 1000, 2000, 4000};
    std::size_t objectives = 3;   // random-problem objective count
    std::size_t replicates = 10;
    std::size_t generations = 50; // per run for non-random problems
    ProblemKind problem = ProblemKind::Random;

    // genesel-synth parameters
    std::size_t genes = 200;
    std::size_t train_samples = 38;
    std::size_t test_samples = 34;
    std::size_t informative = 5;
    double separation = 6.0;

    // genesel-files parameters
    std::string expression_path;
    std::string labels_path;
    std::size_t prefilter = 0; // top-k gene prefilter, 0 disables

    // lotz
    std::size_t genome_length = 16;

    // evolution parameters (optimize + full-run benchmarks)
    double crossover_rate = 0.9;
    double mutation_rate = -1.0; // negative selects 1/L
    std::size_t population = 100;

    std::uint64_t seed = 0;
    std::string out = "results.csv";

    void validate() const {
        if (rankers.empty()) throw ConfigError("rankers must not be empty");
        if (replicates < 1) throw ConfigError("replicates must be >= 1");
        if (sizes.empty()) throw ConfigError("sizes must not be empty");
        for (std::size_t n : sizes)
            if (n < 4 || n % 2 != 0) throw ConfigError("population sizes must be even and >= 4");
        if (objectives < 2) throw ConfigError("objectives must be >= 2");
        if (problem == ProblemKind::GeneselFiles &&
            (expression_path.empty() || labels_path.empty()))
            throw ConfigError("genesel-files problem requires expression and labels paths");
        if (out.empty()) throw ConfigError("out must not be empty");
    }
};

struct TimingRecord {
    ranking::Ranker ranker = ranking::Ranker::FastNds;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double wall_s = 0.0;
    double rank_s = 0.0;
};

/// Uniform-random objective vectors; `integer_ties` draws from {0..4} to
/// force heavy duplication.
inline Population random_population(std::size_t n, std::size_t m, std::uint64_t seed,
                                    bool integer_ties = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> small(0, 4);
    Population pop;
    pop.members.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop[i].id = static_cast<Id>(i);
        pop[i].objectives.resize(m);
        for (std::size_t k = 0; k < m; ++k)
            pop[i].objectives[k] = integer_ties ? static_cast<double>(small(rng)) : unit(rng);
    }
    return pop;
}

namespace detail {

inline void rank_only(Population& pop, ranking::Ranker kind) {
    switch (kind) {
        case ranking::Ranker::Oracle: ranking::oracle_front_sort(pop); break;
        case ranking::Ranker::FastNds: ranking::fast_non_dominated_sort(pop); break;
        case ranking::Ranker::Sweep: ranking::sweep_front_sort(pop); break;
        case ranking::Ranker::PositionSum: ranking::position_sum_rank(pop); break;
    }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Times the ranking call alone on seeded random populations. The wall
/// column additionally covers input generation; replicate seeds derive from
/// (base, N, M, replicate) so every ranker sees identical workloads.
inline std::vector<TimingRecord> time_ranker(ranking::Ranker kind, std::size_t n, std::size_t m,
                                             std::size_t replicates, std::uint64_t base_seed) {
    if (n < 4) throw ContractViolation("time_ranker: N must be >= 4");
    if (replicates < 1) throw ContractViolation("time_ranker: replicates must be >= 1");
    std::vector<TimingRecord> records;
    records.reserve(replicates);
    for (std::size_t r = 0; r < replicates; ++r) {
        const std::uint64_t seed = moo::detail::mix_seed(base_seed, n, m, r);
        const auto wall0 = std::chrono::steady_clock::now();
        Population pop = random_population(n, m, seed);
        const auto rank0 = std::chrono::steady_clock::now();
        detail::rank_only(pop, kind);
        const double rank_s = detail::seconds_since(rank0);
        records.push_back({kind, n, m, r, seed, detail::seconds_since(wall0), rank_s});
    }
    return records;
}

struct SummaryRow {
    ranking::Ranker ranker = ranking::Ranker::FastNds;
    std::size_t n = 0;
    std::size_t m = 0;
    double mean_rank_s = 0.0;
    double sd_rank_s = 0.0;
    double mean_wall_s = 0.0;
    double sd_wall_s = 0.0;
};

struct ScalingResult {
    std::vector<TimingRecord> detail;
    std::vector<SummaryRow> summary;
    std::string detail_path;
    std::string summary_path;
};

inline std::string summary_path_for(const std::string& out) {
    const std::size_t dot = out.rfind('.');
    const std::size_t slash = out.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + "_summary";
    return out.substr(0, dot) + "_summary" + out.substr(dot);
}

namespace detail {

inline SummaryRow summarize(const std::vector<TimingRecord>& cell) {
    SummaryRow row;
    row.ranker = cell.front().ranker;
    row.n = cell.front().n;
    row.m = cell.front().m;
    const double count = static_cast<double>(cell.size());
    for (const auto& r : cell) {
        row.mean_rank_s += r.rank_s;
        row.mean_wall_s += r.wall_s;
    }
    row.mean_rank_s /= count;
    row.mean_wall_s /= count;
    for (const auto& r : cell) {
        row.sd_rank_s += (r.rank_s - row.mean_rank_s) * (r.rank_s - row.mean_rank_s);
        row.sd_wall_s += (r.wall_s - row.mean_wall_s) * (r.wall_s - row.mean_wall_s);
    }
    row.sd_rank_s = std::sqrt(row.sd_rank_s / count);
    row.sd_wall_s = std::sqrt(row.sd_wall_s / count);
    return row;
}

template <evolution::Problem P>
std::vector<TimingRecord> time_full_runs(const BenchConfig& cfg, ranking::Ranker kind,
                                         std::size_t n, const P& problem) {
    std::vector<TimingRecord> records;
    records.reserve(cfg.replicates);
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        evolution::EvolutionConfig run_cfg;
        run_cfg.population_size = n;
        run_cfg.genome_length = problem.genome_length();
        run_cfg.objective_count = problem.objective_count();
        run_cfg.generations = cfg.generations;
        run_cfg.crossover_rate = cfg.crossover_rate;
        run_cfg.mutation_rate = cfg.mutation_rate;
        run_cfg.ranker = kind;
        run_cfg.seed = moo::detail::mix_seed(cfg.seed, n, 0, r);
        auto result = evolution::run(run_cfg, problem);
        records.push_back({kind, n, problem.objective_count(), r, run_cfg.seed,
                           result.wall_seconds, result.rank_seconds});
    }
    return records;
}

}  // namespace detail

/// Runs the (ranker x population size) grid and writes the detail and
/// summary CSVs. Output files are opened before any timing starts.
inline ScalingResult run_scaling_experiment(const BenchConfig& cfg) {
    cfg.validate();

    ScalingResult result;
    result.detail_path = cfg.out;
    result.summary_path = summary_path_for(cfg.out);

    std::ofstream detail_out(result.detail_path);
    if (!detail_out) throw IoError("cannot write " + result.detail_path);
    std::ofstream summary_out(result.summary_path);
    if (!summary_out) throw IoError("cannot write " + result.summary_path);

    detail_out << "ranker,N,M,replicate,seed,wall_s,rank_s\n";
    summary_out << "ranker,N,M,mean_rank_s,sd_rank_s,mean_wall_s,sd_wall_s\n";

    // Non-random problems are built once and shared across all cells.
    std::optional<genesel::Dataset> dataset;
    if (cfg.problem == ProblemKind::GeneselSynth) {
        dataset = genesel::synth_dataset(cfg.genes, cfg.train_samples, cfg.test_samples,
                                         cfg.informative, cfg.separation,
                                         moo::detail::mix_seed(cfg.seed, 0xda7a))
                      .data;
    } else if (cfg.problem == ProblemKind::GeneselFiles) {
        dataset = dataio::load_dataset(cfg.expression_path, cfg.labels_path);
        if (cfg.prefilter > 0) dataset = dataio::prefilter_top_k(*dataset, cfg.prefilter);
    }

    char buf[256];
    for (ranking::Ranker kind : cfg.rankers) {
        for (std::size_t n : cfg.sizes) {
            std::vector<TimingRecord> cell;
            switch (cfg.problem) {
                case ProblemKind::Random:
                    cell = time_ranker(kind, n, cfg.objectives, cfg.replicates, cfg.seed);
                    break;
                case ProblemKind::GeneselSynth:
                case ProblemKind::GeneselFiles:
                    cell = detail::time_full_runs(cfg, kind, n,
                                                  genesel::GeneSubsetProblem(*dataset));
                    break;
                case ProblemKind::Lotz:
                    cell = detail::time_full_runs(cfg, kind, n,
                                                  problems::Lotz{cfg.genome_length});
                    break;
            }
            for (const auto& r : cell) {
                std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%llu,%.9e,%.9e",
                              ranking::to_string(r.ranker), r.n, r.m, r.replicate,
                              static_cast<unsigned long long>(r.seed), r.wall_s, r.rank_s);
                detail_out << buf << '\n';
            }
            const SummaryRow row = detail::summarize(cell);
            std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.9e,%.9e,%.9e,%.9e",
                          ranking::to_string(row.ranker), row.n, row.m, row.mean_rank_s,
                          row.sd_rank_s, row.mean_wall_s, row.sd_wall_s);
            summary_out << buf << '\n';
            result.summary.push_back(row);
            result.detail.insert(result.detail.end(), cell.begin(), cell.end());
        }
    }
    if (!detail_out || !summary_out) throw IoError("write failed for " + cfg.out);
    return result;
}

struct ValidationConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::size_t min_n = 2;
    std::size_t max_n = 64;
};

struct ValidationReport {
    std::size_t trials = 0;
    std::size_t fast_mismatches = 0;
    std::size_t sweep_mismatches = 0;
    std::size_t dominance_violations = 0; // position-sum consistency
    std::size_t pairs_checked = 0;

    bool ok() const { return fast_mismatches + sweep_mismatches + dominance_violations == 0; }
};

/// Cross-checks the fast and sweep sorts against the peeling oracle and the
/// position-sum rank against pairwise dominance, over random instances that
/// mix continuous and heavily tied integer objective values.
inline ValidationReport validate_rankers(const ValidationConfig& vc) {
    if (vc.trials < 1 || vc.min_n < 1 || vc.max_n < vc.min_n)
        throw ConfigError("validate_rankers: bad configuration");

    ValidationReport rep;
    rep.trials = vc.trials;
    for (std::size_t t = 0; t < vc.trials; ++t) {
        std::mt19937_64 rng(moo::detail::mix_seed(vc.seed, t));
        std::uniform_int_distribution<std::size_t> pick_n(vc.min_n, vc.max_n);
        std::uniform_int_distribution<std::size_t> pick_m(2, 4);
        const std::size_t n = pick_n(rng);
        const std::size_t m = pick_m(rng);
        const bool ties = t % 2 == 1;
        Population pop = random_population(n, m, rng(), ties);

        const FrontPartition oracle = ranking::oracle_front_sort(pop);
        if (ranking::fast_non_dominated_sort(pop) != oracle) ++rep.fast_mismatches;
        if (ranking::sweep_front_sort(pop) != oracle) ++rep.sweep_mismatches;

        const RankAssignment ranks = ranking::position_sum_rank(pop);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Dominance rel = dominates(pop[p].objectives, pop[q].objectives);
                const Id a = pop[p].id;
                const Id b = pop[q].id;
                if (rel == Dominance::Left) {
                    ++rep.pairs_checked;
                    if (ranks.rank_of[a] >= ranks.rank_of[b]) ++rep.dominance_violations;
                } else if (rel == Dominance::Right) {
                    ++rep.pairs_checked;
                    if (ranks.rank_of[b] >= ranks.rank_of[a]) ++rep.dominance_violations;
                }
            }
        }
    }
    return rep;
}

// --- flat key=value config files ---------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string item =
            trim(comma == std::string::npos ? value.substr(start)
                                            : value.substr(start, comma - start));
        if (!item.empty()) items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

inline std::size_t parse_size(const std::string& v, const std::string& key) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" + v + "'");
    return out;
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" + v + "'");
    return out;
}

inline double parse_real(const std::string& v, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    return out;
}

}  // namespace detail

/// Loads a flat `key = value` config file. Lists are comma separated;
/// blank lines and lines starting with '#' are ignored.
inline BenchConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    BenchConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));

        if (key == "rankers") {
            cfg.rankers.clear();
            for (const auto& name : detail::split_list(value)) {
                auto kind = ranking::ranker_from_string(name);
                if (!kind) throw ConfigError("config: unknown ranker '" + name + "'");
                cfg.rankers.push_back(*kind);
            }
        } else if (key == "sizes") {
            cfg.sizes.clear();
            for (const auto& item : detail::split_list(value))
                cfg.sizes.push_back(detail::parse_size(item, key));
        } else if (key == "objectives") {
            cfg.objectives = detail::parse_size(value, key);
        } else if (key == "replicates") {
            cfg.replicates = detail::parse_size(value, key);
        } else if (key == "generations") {
            cfg.generations = detail::parse_size(value, key);
        } else if (key == "problem") {
            if (value == "random") cfg.problem = ProblemKind::Random;
            else if (value == "genesel-synth") cfg.problem = ProblemKind::GeneselSynth;
            else if (value == "genesel-files") cfg.problem = ProblemKind::GeneselFiles;
            else if (value == "lotz") cfg.problem = ProblemKind::Lotz;
            else throw ConfigError("config: unknown problem '" + value + "'");
        } else if (key == "genes") {
            cfg.genes = detail::parse_size(value, key);
        } else if (key == "train_samples") {
            cfg.train_samples = detail::parse_size(value, key);
        } else if (key == "test_samples") {
            cfg.test_samples = detail::parse_size(value, key);
        } else if (key == "informative") {
            cfg.informative = detail::parse_size(value, key);
        } else if (key == "separation") {
            cfg.separation = detail::parse_real(value, key);
        } else if (key == "expression") {
            cfg.expression_path = value;
        } else if (key == "labels") {
            cfg.labels_path = value;
        } else if (key == "prefilter") {
            cfg.prefilter = detail::parse_size(value, key);
        } else if (key == "genome_length") {
            cfg.genome_length = detail::parse_size(value, key);
        } else if (key == "crossover_rate") {
            cfg.crossover_rate = detail::parse_real(value, key);
        } else if (key == "mutation_rate") {
            cfg.mutation_rate = detail::parse_real(value, key);
        } else if (key == "population") {
            cfg.population = detail::parse_size(value, key);
        } else if (key == "seed") {
            cfg.seed = detail::parse_u64(value, key);
        } else if (key == "out") {
            cfg.out = value;
        } else {
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace moo::bench
