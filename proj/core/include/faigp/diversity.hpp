#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "faigp/expr.hpp"

namespace faigp {

using OperatorRow = std::array<double, kLibrarySize>;

// Per-expression operator frequencies p_ij (rows) and their generation mean p_i.
struct FrequencyTable {
    std::vector<OperatorRow> PerExpression;
    OperatorRow Mean {};

    // Builds a table from arbitrary rows (each must sum to 1); the mean is
    // recomputed.
    static auto FromRows(std::vector<OperatorRow> rows) -> FrequencyTable;

    [[nodiscard]] auto Size() const noexcept -> std::size_t { return PerExpression.size(); }
};

struct DiversityReport {
    std::vector<double> H;           // Shannon entropy of each expression's operator profile (bits)
    std::array<double, kLibrarySize> Specificity {}; // S_i
    std::vector<double> Delta;       // average operator specificity of each expression
    std::vector<double> HR;          // cross entropy against the generation mean
    std::vector<double> D;           // HR - H, KL divergence from the mean profile
    std::optional<std::vector<std::int64_t>> DDot;
};

// Raw library-operator counts of one program, at every nesting level;
// structural sum/prod nodes and exponent-0 nodes are not counted.
auto OperatorCounts(Program const& p) -> std::array<std::size_t, kLibrarySize>;

// Counts per expression, add-one smoothed (when `smoothing`) and
// row-normalized. A row with no counts and no smoothing is uniform.
// Throws std::invalid_argument on an empty generation.
auto OperatorFrequencies(std::span<Program const> generation, bool smoothing = true) -> FrequencyTable;

auto ShannonDiversity(FrequencyTable const& table) -> DiversityReport;

// U1 ∩̇ U2: |O1 ∩ O2| when the operators agree, else 0. Sub-program
// arguments intersect as node sets.
auto DotIntersection(Node const& a, Node const& b) -> std::int64_t;
// Sum of DotIntersection over the top-level node pairs of two programs,
// constant terms excluded.
auto DotIntersection(Program const& a, Program const& b) -> std::int64_t;

// Ḋ_j = Σ_k E_j ∩̇ E_k, k running over the whole generation including j.
auto PairwiseDiversity(std::span<Program const> generation) -> std::vector<std::int64_t>;

} // namespace faigp
