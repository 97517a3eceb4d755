#pragma once

#include <cstddef>
#include <vector>

#include "faigp/config.hpp"
#include "faigp/expr.hpp"
#include "faigp/fitter.hpp"
#include "faigp/prior.hpp"
#include "faigp/random.hpp"

namespace faigp {

// Everything a variation operator may draw from.
struct VariationContext {
    EngineConfig const& Config;
    OperatorPrior const& Prior;
    FitConfig const& Fit;
    std::size_t Arity; // number of input variables available
};

// Every node of `p` at every nesting level, depth first in storage order.
auto CollectNodes(Program& p) -> std::vector<Node*>;
auto CollectNodes(Program const& p) -> std::vector<Node const*>;

// A random exponent from the configured interval without 0, 1 with
// probability 0.1 when 1 is inside the interval.
auto RandomExponent(ExponentRange range, Rng& rng) -> int;

// Grows a canonical random program: library operators from the prior,
// depth <= MaxDepth, coefficients uniform on [CoeffLo, CoeffHi].
auto GenerateRandomProgram(VariationContext const& ctx, Rng& rng) -> Program;

auto PointMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program;

// Replaces a random node (or a node's argument) of `p1` with a
// type-equivalent segment of `p2`. Operand sets and sub-programs are
// exchangeable as arguments of library operators. Falls back to a copy of
// `p1` when 16 attempts all exceed MaxDepth.
auto Crossover(Program const& p1, Program const& p2, VariationContext const& ctx, Rng& rng) -> Program;

// Crossover with a freshly generated donor.
auto SubtreeMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program;

// Replaces a node that carries a sub-program with one of its descendants.
// Programs without nesting are returned unchanged.
auto HoistMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program;

// Grammar validity: non-empty node sets, non-empty operand sets, sum/prod
// always over sub-programs, exponents in range (or 0), finite coefficients,
// depth within `maxDepth`.
auto IsValidProgram(Program const& p, ExponentRange range, std::size_t maxDepth) -> bool;

} // namespace faigp
