#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "faigp/expr.hpp"

namespace faigp {

// Relative odds of mutating the (C, O, F, P) element in a point mutation.
struct MutationWeights {
    double Coefficient { 15.0 };
    double Operands { 15.0 };
    double Operator { 82.5 };
    double Exponent { 2.5 };
};

// Probabilities of the variation operators producing one offspring.
struct OperatorMix {
    double Crossover { 0.65 };
    double Point { 0.20 };
    double Subtree { 0.08 };
    double Hoist { 0.05 };
    double Replication { 0.02 };
};

struct EngineConfig {
    std::size_t PopulationSize { 400 };
    std::optional<std::size_t> Parents; // mating pool size, PopulationSize / 2 when unset
    std::size_t Generations { 100 };
    double LossTarget { 0.01 };
    ExponentRange Exponents {};
    MutationWeights Mutation {};
    OperatorMix Mix {};
    std::size_t TournamentSize { 3 };
    std::size_t Elitism { 1 };
    std::uint64_t Seed { 0 };
    std::size_t MaxDepth { 6 };
    std::size_t Workers { 1 };

    // Random program growth.
    double CoeffLo { -2.0 };
    double CoeffHi { 2.0 };
    double VariableProb { 0.5 };
    double ConstantProb { 0.3 };
    std::size_t MaxRootNodes { 4 };

    // Placed (canonicalized) at the front of the initial population.
    std::vector<Program> InitialPrograms;

    [[nodiscard]] auto ParentCount() const -> std::size_t { return Parents.value_or(PopulationSize / 2); }

    // Throws std::invalid_argument describing the first broken constraint.
    void Validate() const;
};

} // namespace faigp
