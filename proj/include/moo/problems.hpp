#pragma once

#include "moo/core.hpp"

#include <cstddef>

namespace moo::problems {

/// Leading-Ones/Trailing-Zeros bitstring toy problem. Both counts are
/// maximized, so they are negated here to fit the all-minimizing convention.
/// The true Pareto front is the L+1 genomes of the form 1^i 0^(L-i).
struct Lotz {
    std::size_t length = 16;

    std::size_t genome_length() const { return length; }
    std::size_t objective_count() const { return 2; }

    ObjectiveVector evaluate(const Genome& g) const {
        std::size_t leading_ones = 0;
        while (leading_ones < g.size() && g[leading_ones]) ++leading_ones;
        std::size_t trailing_zeros = 0;
        while (trailing_zeros < g.size() && !g[g.size() - 1 - trailing_zeros]) ++trailing_zeros;
        return {-static_cast<double>(leading_ones), -static_cast<double>(trailing_zeros)};
    }
};

}  // namespace moo::problems
