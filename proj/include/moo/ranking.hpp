#pragma once

#include "moo/core.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

namespace moo::ranking {

enum class Ranker { Oracle, FastNds, Sweep, PositionSum };

inline const char* to_string(Ranker kind) {
    switch (kind) {
        case Ranker::Oracle: return "oracle";
        case Ranker::FastNds: return "fast";
        case Ranker::Sweep: return "sweep";
        case Ranker::PositionSum: return "position_sum";
    }
    return "?";
}

inline std::optional<Ranker> ranker_from_string(std::string_view name) {
    if (name == "oracle") return Ranker::Oracle;
    if (name == "fast" || name == "fast_nds") return Ranker::FastNds;
    if (name == "sweep") return Ranker::Sweep;
    if (name == "position_sum" || name == "possum") return Ranker::PositionSum;
    return std::nullopt;
}

/// One objective's sorted order plus tie-aware positions: equal objective
/// values share a position, distinct values occupy 1..D contiguously.
struct ObjectiveIndex {
    std::size_t objective = 0;
    std::vector<Id> sorted_ids;             // ascending by objective, ties by id
    std::vector<std::uint32_t> position_of; // indexed by id
};

/// Memory instrumentation for the space trade-off between backends.
struct SortStats {
    std::size_t dominated_entries = 0; // total size of all dominated-sets
    std::size_t index_entries = 0;     // per-objective position slots written
};

namespace detail {

// Objectives gathered into one contiguous buffer keyed by id. Ids are dense
// 0..n-1 by contract, so member order stops mattering as soon as the
// population is flattened; every backend works purely in id space.
struct FlatObjectives {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> values; // n*m, row i holds the objectives of id i

    const double* row(std::size_t id) const { return values.data() + id * m; }
};

inline FlatObjectives flatten(const Population& pop) {
    const std::size_t n = pop.size();
    moo::detail::require(n >= 1, "ranking: population must be non-empty");

    FlatObjectives flat;
    flat.n = n;
    flat.m = pop[0].objectives.size();
    moo::detail::require(flat.m >= 1, "ranking: member 0 is not evaluated");
    flat.values.resize(n * flat.m);

    std::vector<std::uint8_t> seen(n, 0);
    for (const Individual& ind : pop) {
        moo::detail::require(ind.evaluated(), "ranking: unevaluated member");
        moo::detail::require(ind.objectives.size() == flat.m,
                             "ranking: inconsistent objective count");
        moo::detail::require(ind.id < n, "ranking: ids must be dense 0..n-1");
        moo::detail::require(!seen[ind.id], "ranking: duplicate id");
        seen[ind.id] = 1;
        for (std::size_t k = 0; k < flat.m; ++k) {
            const double v = ind.objectives[k];
            moo::detail::require(std::isfinite(v), "ranking: non-finite objective value");
            flat.values[ind.id * flat.m + k] = v;
        }
    }
    return flat;
}

inline Dominance compare_rows(const double* a, const double* b, std::size_t m) {
    bool a_better = false;
    bool b_better = false;
    for (std::size_t k = 0; k < m; ++k) {
        if (a[k] < b[k])
            a_better = true;
        else if (b[k] < a[k])
            b_better = true;
    }
    if (a_better && b_better) return Dominance::None;
    if (a_better) return Dominance::Left;
    if (b_better) return Dominance::Right;
    return Dominance::Equal;
}

// Canonicalizes fronts of ids (sorted ascending within each front) and
// writes 1-based front ranks back onto the population.
inline FrontPartition finish_partition(Population& pop, std::size_t n,
                                       std::vector<std::vector<Id>>& fronts) {
    std::vector<std::uint32_t> rank_of(n, 0);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::sort(fronts[f].begin(), fronts[f].end());
        for (Id id : fronts[f]) rank_of[id] = static_cast<std::uint32_t>(f + 1);
    }
    for (auto& ind : pop) ind.rank = rank_of[ind.id];
    return FrontPartition{std::move(fronts)};
}

// Shared by sort_on_objective and position_sum_rank so the rank scheme can
// reuse one scratch index across objectives.
inline void sort_on_objective_into(const FlatObjectives& flat, std::size_t objective,
                                   ObjectiveIndex& out) {
    out.objective = objective;
    out.sorted_ids.resize(flat.n);
    std::iota(out.sorted_ids.begin(), out.sorted_ids.end(), 0u);

    const std::size_t m = flat.m;
    const double* v = flat.values.data();
    std::sort(out.sorted_ids.begin(), out.sorted_ids.end(), [&](Id a, Id b) {
        const double va = v[a * m + objective];
        const double vb = v[b * m + objective];
        if (va != vb) return va < vb;
        return a < b;
    });

    out.position_of.assign(flat.n, 0);
    std::uint32_t pos = 0;
    double prev = 0.0;
    for (std::size_t j = 0; j < flat.n; ++j) {
        const double val = v[out.sorted_ids[j] * m + objective];
        if (j == 0 || val != prev) ++pos; // first element always opens position 1
        prev = val;
        out.position_of[out.sorted_ids[j]] = pos;
    }
}

}  // namespace detail

/// Correctness oracle: peels non-dominated sets by all-pairs comparison.
inline FrontPartition oracle_front_sort(Population& pop) {
    auto flat = detail::flatten(pop);

    std::vector<Id> alive(flat.n);
    std::iota(alive.begin(), alive.end(), 0u);

    std::vector<std::vector<Id>> fronts;
    while (!alive.empty()) {
        std::vector<Id> front;
        std::vector<Id> rest;
        for (Id i : alive) {
            bool dominated = false;
            for (Id j : alive) {
                if (i == j) continue;
                if (detail::compare_rows(flat.row(j), flat.row(i), flat.m) == Dominance::Left) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        alive = std::move(rest);
    }
    return detail::finish_partition(pop, flat.n, fronts);
}

/// Classic two-phase sort: one all-pairs pass fills the domination records,
/// then fronts peel off by decrementing domination counts.
inline FrontPartition fast_non_dominated_sort(Population& pop, SortStats* stats = nullptr) {
    auto flat = detail::flatten(pop);
    const std::size_t n = flat.n;

    std::vector<DominationRecord> records(n);
    for (Id p = 0; p < n; ++p) {
        for (Id q = p + 1; q < n; ++q) {
            switch (detail::compare_rows(flat.row(p), flat.row(q), flat.m)) {
                case Dominance::Left:
                    records[p].dominated_set.push_back(q);
                    ++records[q].domination_count;
                    break;
                case Dominance::Right:
                    records[q].dominated_set.push_back(p);
                    ++records[p].domination_count;
                    break;
                default:
                    break;
            }
        }
    }
    if (stats) {
        stats->dominated_entries = 0;
        for (const auto& r : records) stats->dominated_entries += r.dominated_set.size();
    }

    std::vector<std::vector<Id>> fronts;
    std::vector<Id> current;
    for (Id p = 0; p < n; ++p)
        if (records[p].domination_count == 0) current.push_back(p);

    while (!current.empty()) {
        std::vector<Id> next;
        for (Id p : current)
            for (Id q : records[p].dominated_set)
                if (--records[q].domination_count == 0) next.push_back(q);
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return detail::finish_partition(pop, n, fronts);
}

/// Sweep sort: after a lexicographic presort no solution can dominate an
/// earlier one, so each solution drops into the first front that admits it.
inline FrontPartition sweep_front_sort(Population& pop) {
    auto flat = detail::flatten(pop);
    const std::size_t n = flat.n;
    const std::size_t m = flat.m;

    std::vector<Id> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](Id a, Id b) {
        const double* ra = flat.row(a);
        const double* rb = flat.row(b);
        for (std::size_t k = 0; k < m; ++k) {
            if (ra[k] != rb[k]) return ra[k] < rb[k];
        }
        return a < b;
    });

    std::vector<std::vector<Id>> fronts;
    for (Id id : order) {
        const double* row = flat.row(id);
        auto admits = [&](const std::vector<Id>& front) {
            return std::none_of(front.begin(), front.end(), [&](Id member) {
                return detail::compare_rows(flat.row(member), row, m) == Dominance::Left;
            });
        };
        bool placed = false;
        for (auto& front : fronts) {
            if (admits(front)) {
                front.push_back(id);
                placed = true;
                break;
            }
        }
        if (!placed) fronts.push_back({id});
    }
    return detail::finish_partition(pop, n, fronts);
}

/// Sorted order and tie-aware positions for a single objective.
inline ObjectiveIndex sort_on_objective(const Population& pop, std::size_t objective) {
    auto flat = detail::flatten(pop);
    if (objective >= flat.m)
        throw ContractViolation("sort_on_objective: objective index out of range");
    ObjectiveIndex out;
    detail::sort_on_objective_into(flat, objective, out);
    return out;
}

/// The position-sum scheme: rank = sum over objectives of the individual's
/// tie-aware sorted position. Lower is better; dominance implies a strictly
/// lower sum, but equal fronts do not imply equal sums.
inline RankAssignment position_sum_rank(Population& pop, SortStats* stats = nullptr) {
    auto flat = detail::flatten(pop);
    const std::size_t n = flat.n;

    RankAssignment out;
    out.rank_of.assign(n, 0);
    ObjectiveIndex scratch; // one index buffer reused across objectives
    for (std::size_t k = 0; k < flat.m; ++k) {
        detail::sort_on_objective_into(flat, k, scratch);
        for (std::size_t id = 0; id < n; ++id) out.rank_of[id] += scratch.position_of[id];
        if (stats) stats->index_entries += n;
    }
    for (auto& ind : pop) ind.rank = out.rank_of[ind.id];
    return out;
}

/// Uniform view for selection: ordered id groups, best first. Front-based
/// backends yield their fronts; the position-sum backend yields groups of
/// equal rank sum ordered by ascending sum. Rank annotations are set.
inline std::vector<std::vector<Id>> rank_groups(Population& pop, Ranker kind,
                                                SortStats* stats = nullptr) {
    switch (kind) {
        case Ranker::Oracle: return oracle_front_sort(pop).fronts;
        case Ranker::FastNds: return fast_non_dominated_sort(pop, stats).fronts;
        case Ranker::Sweep: return sweep_front_sort(pop).fronts;
        case Ranker::PositionSum: break;
    }
    RankAssignment ranks = position_sum_rank(pop, stats);
    std::vector<Id> ids(ranks.rank_of.size());
    std::iota(ids.begin(), ids.end(), 0u);
    std::sort(ids.begin(), ids.end(), [&](Id a, Id b) {
        if (ranks.rank_of[a] != ranks.rank_of[b]) return ranks.rank_of[a] < ranks.rank_of[b];
        return a < b;
    });
    std::vector<std::vector<Id>> groups;
    for (Id id : ids) {
        if (groups.empty() || ranks.rank_of[groups.back().front()] != ranks.rank_of[id])
            groups.emplace_back();
        groups.back().push_back(id);
    }
    return groups;
}

}  // namespace moo::ranking
