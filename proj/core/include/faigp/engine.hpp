#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "faigp/config.hpp"
#include "faigp/dataset.hpp"
#include "faigp/expr.hpp"
#include "faigp/fitter.hpp"
#include "faigp/metrics.hpp"
#include "faigp/prior.hpp"

namespace faigp {

struct RunReport {
    Program BestProgram;
    std::string BestSerialized;
    double BestLoss { 0.0 };
    double R2 { 0.0 };       // on the training data; NaN when y is constant
    double Spearman { 0.0 };
    std::size_t Length { 0 };         // exponent-weighted
    std::size_t FlatLength { 0 };
    std::vector<double> LossTrajectory;    // best raw loss of each generation
    std::vector<double> FitnessTrajectory; // best total fitness of each generation
    std::size_t GenerationsUsed { 0 };
    double WallTimeSeconds { 0.0 };
    std::uint64_t Seed { 0 };
};

// Called once per generation after scoring, with the generation's programs
// (post-fit) and their total fitness values.
using GenerationObserver = std::function<void(std::size_t generation, std::span<Program const> programs,
    std::span<double const> fitness)>;

// Runs the generational search on `data`. Deterministic for a given
// EngineConfig::Seed regardless of EngineConfig::Workers.
// Throws std::invalid_argument on an invalid configuration or dataset.
auto Evolve(Dataset const& data, OperatorPrior const& prior, EngineConfig const& cfg, LossKind loss,
    RegularizerConfig const& reg, FitConfig const& fit, GenerationObserver const& observer = {}) -> RunReport;

// Fans `count` independent tasks out over `workers` threads (inline when
// workers <= 1). Task i always runs fn(i) exactly once.
void ParallelFor(std::size_t count, std::size_t workers, std::function<void(std::size_t)> const& fn);

} // namespace faigp
