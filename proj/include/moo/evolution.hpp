#pragma once

#include "moo/core.hpp"
#include "moo/ranking.hpp"

#include <chrono>
#include <concepts>
#include <limits>
#include <random>
#include <utility>

namespace moo::evolution {

using Rng = std::mt19937_64;

/// A problem evaluates bit genomes into minimized objective vectors.
/// Evaluation must be a pure function of the genome.
template <typename P>
concept Problem = requires(const P& p, const Genome& g) {
    { p.genome_length() } -> std::convertible_to<std::size_t>;
    { p.objective_count() } -> std::convertible_to<std::size_t>;
    { p.evaluate(g) } -> std::convertible_to<ObjectiveVector>;
};

/// Problems may override the density of ones in the initial population.
template <typename P>
concept HasInitDensity = requires(const P& p) {
    { p.init_density() } -> std::convertible_to<double>;
};

struct EvolutionConfig {
    std::size_t population_size = 0; // N, even and >= 4
    std::size_t genome_length = 0;   // L
    std::size_t objective_count = 0; // M
    std::size_t generations = 1;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;     // negative selects the 1/L default
    ranking::Ranker ranker = ranking::Ranker::FastNds;
    std::uint64_t seed = 0;

    double resolved_mutation_rate() const {
        return mutation_rate < 0.0 ? 1.0 / static_cast<double>(genome_length) : mutation_rate;
    }

    void validate() const {
        if (population_size < 4 || population_size % 2 != 0)
            throw ConfigError("population_size must be even and >= 4");
        if (genome_length < 2) throw ConfigError("genome_length must be >= 2");
        if (objective_count < 2) throw ConfigError("objective_count must be >= 2");
        if (generations < 1) throw ConfigError("generations must be >= 1");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw ConfigError("crossover_rate must be in [0,1]");
        if (mutation_rate > 1.0) throw ConfigError("mutation_rate must be in [0,1]");
    }
};

struct GenerationStats {
    std::uint32_t generation = 0;
    std::size_t best_group_size = 0;
    ObjectiveVector objective_min;
    ObjectiveVector objective_max;
};

struct RunResult {
    Population final_population;
    std::vector<Id> final_front; // ids of the best-ranked group
    std::vector<GenerationStats> per_generation;
    double wall_seconds = 0.0;
    double rank_seconds = 0.0; // time spent inside the ranking backend
};

/// Per-id crowding distances within one rank group. Boundary members carry
/// infinity; ids outside the group stay NaN.
struct CrowdingRecord {
    std::vector<double> distance_of;

    double at(Id id) const { return distance_of[id]; }
};

inline CrowdingRecord crowding_distance(const std::vector<Id>& group, const Population& pop) {
    if (group.empty()) throw ContractViolation("crowding_distance: empty group");

    std::vector<std::size_t> where(pop.size(), pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) where[pop[i].id] = i;
    for (Id id : group) {
        moo::detail::require(id < pop.size() && where[id] < pop.size(),
                             "crowding_distance: id not in population");
        moo::detail::require(pop[where[id]].evaluated(), "crowding_distance: unevaluated member");
    }

    const std::size_t m = pop[where[group.front()]].objectives.size();
    CrowdingRecord rec;
    rec.distance_of.assign(pop.size(), std::numeric_limits<double>::quiet_NaN());
    for (Id id : group) rec.distance_of[id] = 0.0;

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Id> order(group);
    for (std::size_t k = 0; k < m; ++k) {
        auto value = [&](Id id) { return pop[where[id]].objectives[k]; };
        std::sort(order.begin(), order.end(), [&](Id a, Id b) {
            if (value(a) != value(b)) return value(a) < value(b);
            return a < b;
        });
        rec.distance_of[order.front()] = inf;
        rec.distance_of[order.back()] = inf;
        const double range = value(order.back()) - value(order.front());
        if (range <= 0.0) continue; // zero-range objective contributes nothing
        for (std::size_t j = 1; j + 1 < order.size(); ++j)
            rec.distance_of[order[j]] += (value(order[j + 1]) - value(order[j - 1])) / range;
    }
    return rec;
}

/// NSGA-II crowded comparison: lower rank wins, then larger crowding, then
/// lower id for determinism. True when `a` precedes `b`.
inline bool crowded_precedes(const Individual& a, const Individual& b) {
    if (!a.rank || !b.rank)
        throw ContractViolation("crowded_precedes: rank annotation unset");
    if (*a.rank != *b.rank) return *a.rank < *b.rank;
    if (!a.crowding || !b.crowding)
        throw ContractViolation("crowded_precedes: crowding annotation unset");
    if (*a.crowding != *b.crowding) return *a.crowding > *b.crowding;
    return a.id < b.id;
}

/// Fills the next parent population: whole rank groups while they fit, then
/// the least crowded members of the first group that does not. Selected
/// members carry fresh rank/crowding annotations and dense ids 0..target-1.
inline Population environmental_selection(Population& combined, std::size_t target,
                                          ranking::Ranker ranker,
                                          double* rank_seconds = nullptr) {
    if (combined.size() < target)
        throw ContractViolation("environmental_selection: combined population smaller than target");

    const auto t0 = std::chrono::steady_clock::now();
    auto groups = ranking::rank_groups(combined, ranker);
    if (rank_seconds)
        *rank_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<std::size_t> where(combined.size());
    for (std::size_t i = 0; i < combined.size(); ++i) where[combined[i].id] = i;

    Population next;
    next.members.reserve(target);
    auto admit = [&](Id id, double crowd) {
        Individual ind = combined[where[id]];
        ind.crowding = crowd;
        ind.id = static_cast<Id>(next.members.size());
        next.members.push_back(std::move(ind));
    };

    for (const auto& group : groups) {
        if (next.size() == target) break;
        CrowdingRecord crowd = crowding_distance(group, combined);
        if (next.size() + group.size() <= target) {
            for (Id id : group) admit(id, crowd.at(id));
        } else {
            std::vector<Id> by_crowding(group);
            std::sort(by_crowding.begin(), by_crowding.end(), [&](Id a, Id b) {
                if (crowd.at(a) != crowd.at(b)) return crowd.at(a) > crowd.at(b);
                return a < b;
            });
            const std::size_t need = target - next.size();
            for (std::size_t j = 0; j < need; ++j) admit(by_crowding[j], crowd.at(by_crowding[j]));
            break;
        }
    }
    return next;
}

/// Draws two members uniformly with replacement; the crowded comparison
/// decides the winner.
inline const Individual& binary_tournament(const Population& pop, Rng& rng) {
    if (pop.empty()) throw ContractViolation("binary_tournament: empty population");
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const Individual& a = pop[pick(rng)];
    const Individual& b = pop[pick(rng)];
    return crowded_precedes(a, b) ? a : b;
}

namespace detail {

inline std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b, std::size_t cut) {
    Genome c1(a.begin(), a.begin() + cut);
    c1.insert(c1.end(), b.begin() + cut, b.end());
    Genome c2(b.begin(), b.begin() + cut);
    c2.insert(c2.end(), a.begin() + cut, a.end());
    return {std::move(c1), std::move(c2)};
}

}  // namespace detail

inline std::pair<Genome, Genome> single_point_crossover(const Genome& a, const Genome& b,
                                                        Rng& rng, double rate) {
    if (a.size() != b.size())
        throw ContractViolation("single_point_crossover: genome length mismatch");
    if (a.size() < 2) throw ContractViolation("single_point_crossover: genomes must have length >= 2");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < rate) {
        std::uniform_int_distribution<std::size_t> cut(1, a.size() - 1);
        return detail::crossover_at(a, b, cut(rng));
    }
    return {a, b};
}

inline Genome bitflip_mutation(Genome g, Rng& rng, double per_bit_rate) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& bit : g)
        if (unit(rng) < per_bit_rate) bit ^= 1u;
    return g;
}

namespace detail {

template <Problem P>
void evaluate_member(const P& problem, Individual& ind, std::size_t m) {
    try {
        ind.objectives = problem.evaluate(ind.genome);
    } catch (const std::exception& e) {
        throw std::runtime_error("evaluation of individual " + std::to_string(ind.id) +
                                 " failed: " + e.what());
    }
    if (ind.objectives.size() != m)
        throw ContractViolation("evaluation of individual " + std::to_string(ind.id) +
                                " returned wrong objective count");
    for (double v : ind.objectives)
        if (!std::isfinite(v))
            throw ContractViolation("evaluation of individual " + std::to_string(ind.id) +
                                    " returned a non-finite value");
}

}  // namespace detail

/// One generation: tournament + crossover + mutation produce N offspring,
/// parents and offspring combine to 2N with dense ids, the configured
/// ranker and environmental selection return the next N parents.
template <Problem P>
Population evolve_generation(const Population& parents, const EvolutionConfig& cfg,
                             const P& problem, Rng& rng, double* rank_seconds = nullptr) {
    const std::size_t n = cfg.population_size;
    moo::detail::require(parents.size() == n, "evolve_generation: parent population size mismatch");

    Population combined;
    combined.members.reserve(2 * n);
    for (const Individual& p : parents) {
        Individual copy = p;
        copy.id = static_cast<Id>(combined.members.size());
        copy.rank.reset();
        copy.crowding.reset();
        combined.members.push_back(std::move(copy));
    }
    const double mutation = cfg.resolved_mutation_rate();
    while (combined.size() < 2 * n) {
        const Individual& p1 = binary_tournament(parents, rng);
        const Individual& p2 = binary_tournament(parents, rng);
        auto [g1, g2] = single_point_crossover(p1.genome, p2.genome, rng, cfg.crossover_rate);
        for (Genome* g : {&g1, &g2}) {
            Individual child;
            child.id = static_cast<Id>(combined.members.size());
            child.genome = bitflip_mutation(std::move(*g), rng, mutation);
            detail::evaluate_member(problem, child, cfg.objective_count);
            combined.members.push_back(std::move(child));
        }
    }
    return environmental_selection(combined, n, cfg.ranker, rank_seconds);
}

namespace detail {

inline GenerationStats collect_stats(const Population& pop, std::uint32_t generation) {
    GenerationStats s;
    s.generation = generation;
    const std::size_t m = pop[0].objectives.size();
    s.objective_min.assign(m, std::numeric_limits<double>::infinity());
    s.objective_max.assign(m, -std::numeric_limits<double>::infinity());
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (const Individual& ind : pop) best = std::min(best, ind.rank.value());
    for (const Individual& ind : pop) {
        if (*ind.rank == best) ++s.best_group_size;
        for (std::size_t k = 0; k < m; ++k) {
            s.objective_min[k] = std::min(s.objective_min[k], ind.objectives[k]);
            s.objective_max[k] = std::max(s.objective_max[k], ind.objectives[k]);
        }
    }
    return s;
}

inline std::vector<Id> best_rank_group(const Population& pop) {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (const Individual& ind : pop) best = std::min(best, ind.rank.value());
    std::vector<Id> ids;
    for (const Individual& ind : pop)
        if (*ind.rank == best) ids.push_back(ind.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace detail

/// Full run: seeded random initialization, annotation bootstrap, then the
/// generational loop for the configured budget.
template <Problem P>
RunResult run(const EvolutionConfig& cfg, const P& problem) {
    cfg.validate();
    if (cfg.genome_length != problem.genome_length())
        throw ConfigError("genome_length does not match the problem");
    if (cfg.objective_count != problem.objective_count())
        throw ConfigError("objective_count does not match the problem");

    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;
    Rng rng(cfg.seed);

    double density = 0.5;
    if constexpr (HasInitDensity<P>) density = problem.init_density();

    Population pop;
    pop.members.resize(cfg.population_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        Individual& ind = pop[i];
        ind.id = static_cast<Id>(i);
        ind.genome.resize(cfg.genome_length);
        for (auto& bit : ind.genome) bit = unit(rng) < density ? 1u : 0u;
        detail::evaluate_member(problem, ind, cfg.objective_count);
    }
    // Generation 0 bootstrap: rank and crowd before the first tournament.
    pop = environmental_selection(pop, cfg.population_size, cfg.ranker, &result.rank_seconds);

    for (std::uint32_t g = 1; g <= cfg.generations; ++g) {
        pop = evolve_generation(pop, cfg, problem, rng, &result.rank_seconds);
        result.per_generation.push_back(detail::collect_stats(pop, g));
    }

    result.final_front = detail::best_rank_group(pop);
    result.final_population = std::move(pop);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace moo::evolution
