#include "moo/ranking.hpp"

#include "moo/bench.hpp" // random_population

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using moo::FrontPartition;
using moo::Id;
using moo::Population;
namespace ranking = moo::ranking;

namespace {

Population make_pop(std::vector<moo::ObjectiveVector> objectives) {
    Population pop;
    pop.members.resize(objectives.size());
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        pop[i].id = static_cast<Id>(i);
        pop[i].objectives = std::move(objectives[i]);
    }
    return pop;
}

using Fronts = std::vector<std::vector<Id>>;

// Independent position oracle: 1 + number of distinct strictly smaller
// values of that objective anywhere in the population.
std::uint32_t brute_position(const Population& pop, std::size_t objective, Id id) {
    double value = 0.0;
    for (const auto& ind : pop)
        if (ind.id == id) value = ind.objectives[objective];
    std::vector<double> smaller;
    for (const auto& ind : pop)
        if (ind.objectives[objective] < value) smaller.push_back(ind.objectives[objective]);
    std::sort(smaller.begin(), smaller.end());
    smaller.erase(std::unique(smaller.begin(), smaller.end()), smaller.end());
    return static_cast<std::uint32_t>(smaller.size()) + 1;
}

}  // namespace

TEST_CASE("oracle front sort peels the expected fronts") {
    SECTION("mixed four-point population") {
        auto pop = make_pop({{1, 2}, {2, 1}, {2, 2}, {3, 3}});
        CHECK(ranking::oracle_front_sort(pop).fronts == Fronts{{0, 1}, {2}, {3}});
        CHECK(pop[0].rank == 1);
        CHECK(pop[2].rank == 2);
        CHECK(pop[3].rank == 3);
    }
    SECTION("singleton") {
        auto pop = make_pop({{1, 1}});
        CHECK(ranking::oracle_front_sort(pop).fronts == Fronts{{0}});
    }
    SECTION("duplicates are mutually non-dominating") {
        auto pop = make_pop({{1, 1}, {1, 1}});
        CHECK(ranking::oracle_front_sort(pop).fronts == Fronts{{0, 1}});
    }
}

TEST_CASE("fast non-dominated sort matches the hand-traced cases") {
    SECTION("mixed four-point population") {
        auto pop = make_pop({{1, 2}, {2, 1}, {2, 2}, {3, 3}});
        CHECK(ranking::fast_non_dominated_sort(pop).fronts == Fronts{{0, 1}, {2}, {3}});
    }
    SECTION("anti-chain collapses to one front") {
        std::vector<moo::ObjectiveVector> objs;
        for (int k = 1; k <= 16; ++k) objs.push_back({double(k), double(16 - k)});
        auto pop = make_pop(objs);
        const auto fronts = ranking::fast_non_dominated_sort(pop).fronts;
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0].size() == 16);
    }
    SECTION("total order yields singleton fronts") {
        std::vector<moo::ObjectiveVector> objs;
        for (int k = 1; k <= 12; ++k) objs.push_back({double(k), double(k)});
        auto pop = make_pop(objs);
        const auto fronts = ranking::fast_non_dominated_sort(pop).fronts;
        REQUIRE(fronts.size() == 12);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            CHECK(fronts[f] == std::vector<Id>{static_cast<Id>(f)});
        }
    }
}

TEST_CASE("sweep front sort matches the hand-traced cases") {
    SECTION("mixed four-point population") {
        auto pop = make_pop({{1, 2}, {2, 1}, {2, 2}, {3, 3}});
        CHECK(ranking::sweep_front_sort(pop).fronts == Fronts{{0, 1}, {2}, {3}});
    }
    SECTION("equal vectors share a front") {
        auto pop = make_pop({{2, 2}, {2, 2}});
        CHECK(ranking::sweep_front_sort(pop).fronts == Fronts{{0, 1}});
    }
    SECTION("chain of eight") {
        std::vector<moo::ObjectiveVector> objs;
        for (int k = 1; k <= 8; ++k) objs.push_back({double(k), double(k)});
        auto pop = make_pop(objs);
        CHECK(ranking::sweep_front_sort(pop).fronts.size() == 8);
    }
}

TEST_CASE("sort_on_objective assigns tie-aware positions") {
    SECTION("shared position for equal values") {
        auto pop = make_pop({{1, 0}, {2, 0}, {2, 0}, {3, 0}});
        const auto index = ranking::sort_on_objective(pop, 0);
        CHECK(index.position_of == std::vector<std::uint32_t>{1, 2, 2, 3});
        CHECK(index.sorted_ids == std::vector<Id>{0, 1, 2, 3});
    }
    SECTION("all equal values share position 1") {
        auto pop = make_pop({{5, 0}, {5, 0}, {5, 0}});
        CHECK(ranking::sort_on_objective(pop, 0).position_of ==
              std::vector<std::uint32_t>{1, 1, 1});
    }
    SECTION("distinct values count up from 1") {
        auto pop = make_pop({{9, 0}, {1, 0}, {4, 0}});
        const auto index = ranking::sort_on_objective(pop, 0);
        CHECK(index.position_of == std::vector<std::uint32_t>{3, 1, 2});
        CHECK(index.sorted_ids == std::vector<Id>{1, 2, 0});
    }
    SECTION("objective index is validated") {
        auto pop = make_pop({{1, 2}});
        CHECK_THROWS_AS(ranking::sort_on_objective(pop, 2), moo::ContractViolation);
    }
}

TEST_CASE("position-sum ranks match hand-computed sums") {
    SECTION("mixed four-point population") {
        auto pop = make_pop({{1, 2}, {2, 1}, {2, 2}, {3, 3}});
        const auto ranks = ranking::position_sum_rank(pop);
        CHECK(ranks.rank_of == std::vector<std::uint32_t>{3, 3, 4, 6});
        CHECK(pop[1].rank == 3);
    }
    SECTION("rank sum diverges from front index") {
        // all of a, b, c sit on oracle front 1, yet c outranks a and b
        auto pop = make_pop({{1, 5}, {5, 1}, {2, 2}, {3, 3}});
        const auto ranks = ranking::position_sum_rank(pop);
        CHECK(ranks.rank_of == std::vector<std::uint32_t>{5, 5, 4, 6});
        const auto fronts = ranking::oracle_front_sort(pop).fronts;
        CHECK(fronts[0] == std::vector<Id>{0, 1, 2});
    }
    SECTION("singleton rank equals objective count") {
        auto pop = make_pop({{7, 3, 9}});
        CHECK(ranking::position_sum_rank(pop).rank_of == std::vector<std::uint32_t>{3});
    }
    SECTION("agrees with the brute-force position oracle") {
        std::mt19937_64 rng(99);
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = 1 + rng() % 40;
            const std::size_t m = 2 + rng() % 3;
            auto pop = moo::bench::random_population(n, m, rng(), t % 2 == 1);
            const auto ranks = ranking::position_sum_rank(pop);
            for (const auto& ind : pop) {
                std::uint32_t expected = 0;
                for (std::size_t k = 0; k < m; ++k) expected += brute_position(pop, k, ind.id);
                REQUIRE(ranks.rank_of[ind.id] == expected);
            }
        }
    }
}

TEST_CASE("partition backends agree with the oracle on random instances") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 31;
        const std::size_t m = 2 + rng() % 3;
        auto pop = moo::bench::random_population(n, m, rng(), t % 2 == 1);
        const auto oracle = ranking::oracle_front_sort(pop);
        REQUIRE(ranking::fast_non_dominated_sort(pop) == oracle);
        REQUIRE(ranking::sweep_front_sort(pop) == oracle);
    }
}

TEST_CASE("partitions and ranks ignore member order") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 4 + rng() % 28;
        auto pop = moo::bench::random_population(n, 3, rng(), t % 2 == 1);
        auto shuffled = pop;
        std::shuffle(shuffled.members.begin(), shuffled.members.end(), rng);

        REQUIRE(ranking::fast_non_dominated_sort(pop) ==
                ranking::fast_non_dominated_sort(shuffled));
        REQUIRE(ranking::sweep_front_sort(pop) == ranking::sweep_front_sort(shuffled));
        REQUIRE(ranking::oracle_front_sort(pop) == ranking::oracle_front_sort(shuffled));
        REQUIRE(ranking::position_sum_rank(pop) == ranking::position_sum_rank(shuffled));
    }
}

TEST_CASE("duplicate objective vectors rank identically everywhere") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 6 + rng() % 20;
        auto pop = moo::bench::random_population(n, 3, rng(), true);
        // force extra duplicates
        pop[1].objectives = pop[0].objectives;
        pop[2].objectives = pop[0].objectives;

        const auto fronts = ranking::fast_non_dominated_sort(pop);
        const auto ranks = ranking::position_sum_rank(pop);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (pop[i].objectives != pop[j].objectives) continue;
                const Id a = pop[i].id;
                const Id b = pop[j].id;
                REQUIRE(ranks.rank_of[a] == ranks.rank_of[b]);
                for (const auto& front : fronts.fronts) {
                    const bool has_a = std::count(front.begin(), front.end(), a) > 0;
                    const bool has_b = std::count(front.begin(), front.end(), b) > 0;
                    REQUIRE(has_a == has_b);
                }
            }
        }
    }
}

TEST_CASE("position sums respect dominance and stay within bounds") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng() % 40;
        const std::size_t m = 2 + rng() % 3;
        auto pop = moo::bench::random_population(n, m, rng(), t % 2 == 1);
        const auto ranks = ranking::position_sum_rank(pop);
        for (const auto& ind : pop) {
            REQUIRE(ranks.rank_of[ind.id] >= m);
            REQUIRE(ranks.rank_of[ind.id] <= m * n);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (moo::dominates(pop[i].objectives, pop[j].objectives) == moo::Dominance::Left)
                    REQUIRE(ranks.rank_of[pop[i].id] < ranks.rank_of[pop[j].id]);
            }
        }
    }
}

TEST_CASE("memory instrumentation exposes the space trade-off") {
    SECTION("chain input forces quadratic dominated-set totals") {
        std::vector<moo::ObjectiveVector> objs;
        const std::size_t n = 100;
        for (std::size_t k = 1; k <= n; ++k) objs.push_back({double(k), double(k)});
        auto pop = make_pop(objs);
        ranking::SortStats stats;
        ranking::fast_non_dominated_sort(pop, &stats);
        CHECK(stats.dominated_entries == n * (n - 1) / 2);
    }
    SECTION("position-sum index entries total M*N") {
        auto pop = moo::bench::random_population(64, 4, 5);
        ranking::SortStats stats;
        ranking::position_sum_rank(pop, &stats);
        CHECK(stats.index_entries == 4 * 64);
    }
}

TEST_CASE("position-sum rank groups order by ascending sum") {
    auto pop = make_pop({{1, 5}, {5, 1}, {2, 2}, {3, 3}});
    const auto groups = ranking::rank_groups(pop, ranking::Ranker::PositionSum);
    CHECK(groups == Fronts{{2}, {0, 1}, {3}});
}

TEST_CASE("ranking validates its preconditions") {
    SECTION("unevaluated member") {
        Population pop;
        pop.members.resize(2);
        pop[0].id = 0;
        pop[1].id = 1;
        pop[0].objectives = {1, 2};
        CHECK_THROWS_AS(ranking::fast_non_dominated_sort(pop), moo::ContractViolation);
    }
    SECTION("empty population") {
        Population pop;
        CHECK_THROWS_AS(ranking::oracle_front_sort(pop), moo::ContractViolation);
    }
    SECTION("non-dense ids") {
        auto pop = make_pop({{1, 2}, {2, 1}});
        pop[1].id = 5;
        CHECK_THROWS_AS(ranking::sweep_front_sort(pop), moo::ContractViolation);
    }
    SECTION("duplicate ids") {
        auto pop = make_pop({{1, 2}, {2, 1}});
        pop[1].id = 0;
        CHECK_THROWS_AS(ranking::position_sum_rank(pop), moo::ContractViolation);
    }
}
