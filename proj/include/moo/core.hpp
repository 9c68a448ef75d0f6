#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace moo {

/// Thrown when a caller breaks a documented precondition.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Thrown for invalid configuration values before any work starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a file cannot be opened or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Id = std::uint32_t;

/// Objective values of one solution, all minimized.
using ObjectiveVector = std::vector<double>;

/// Fixed-length bit genome, one byte per bit (values 0/1).
using Genome = std::vector<std::uint8_t>;

enum class Dominance {
    Left,   // first argument dominates
    Right,  // second argument dominates
    Equal,  // identical vectors; neither dominates
    None    // incomparable trade-off
};

inline Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw ContractViolation("dominates: objective count mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    bool a_better = false;
    bool b_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            a_better = true;
        else if (b[i] < a[i])
            b_better = true;
    }
    if (a_better && b_better) return Dominance::None;
    if (a_better) return Dominance::Left;
    if (b_better) return Dominance::Right;
    return Dominance::Equal;
}

struct Individual {
    Id id = 0;
    Genome genome;
    ObjectiveVector objectives;
    std::optional<std::uint32_t> rank;  // front index or position sum, set by ranking
    std::optional<double> crowding;     // set by crowding assignment

    bool evaluated() const { return !objectives.empty(); }
};

struct Population {
    std::vector<Individual> members;

    Population() = default;
    explicit Population(std::vector<Individual> m) : members(std::move(m)) {}

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
    Individual& operator[](std::size_t i) { return members[i]; }
    const Individual& operator[](std::size_t i) const { return members[i]; }

    auto begin() { return members.begin(); }
    auto end() { return members.end(); }
    auto begin() const { return members.begin(); }
    auto end() const { return members.end(); }
};

/// Bookkeeping of the classic front-peeling sort: the set a solution
/// dominates and the count of solutions dominating it.
struct DominationRecord {
    std::vector<Id> dominated_set;
    std::uint32_t domination_count = 0;
};

/// Ordered Pareto fronts F_1, F_2, ... partitioning a population.
/// Each front holds ids sorted ascending (canonical form).
struct FrontPartition {
    std::vector<std::vector<Id>> fronts;

    bool operator==(const FrontPartition&) const = default;
};

/// Scalar rank per individual, indexed by id. For front-based sorts the
/// value is the 1-based front index; for the position-sum scheme it is
/// the sum of per-objective positions (lower is better in both cases).
struct RankAssignment {
    std::vector<std::uint32_t> rank_of;

    bool operator==(const RankAssignment&) const = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and salt words.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw ContractViolation(msg);
}

}  // namespace detail

}  // namespace moo
