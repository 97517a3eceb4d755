#pragma once

#include <vector>

#include "faigp/expr.hpp"

namespace faigp {

enum class UnionMode {
    Additive,      // ∪̇ : siblings under a sum parent or at the root
    Multiplicative // ∪̇× : siblings under a prod parent
};

struct MergeResult {
    std::vector<Node> Nodes;
    // Set when the (F,O) components matched but P1 + P2 leaves the exponent
    // range; the nodes are then returned separately.
    bool RangeViolation { false };
};

// Additive: equal (F,O,P) merge into one node with summed coefficients.
// Multiplicative: equal (F,O) merge into one node with multiplied
// coefficients and summed exponents; otherwise the coefficient product is
// carried by `a` and `b` keeps coefficient 1.
auto MergeUnion(Node const& a, Node const& b, UnionMode mode, ExponentRange range = {}) -> MergeResult;

// Operand sets combine by plain set union under either mode.
auto MergeUnion(OperandSet const& a, OperandSet const& b) -> OperandSet;

// Returns the equivalence-class representative of `p`: merged siblings,
// flattened exponent-1 sums under sums and prods under prods, zero
// coefficients removed, variable-free nodes folded into constant terms.
// Merges whose exponent would leave `range` are not performed.
auto Canonicalize(Program p, ExponentRange range = {}) -> Program;

auto IsCanonical(Program const& p, ExponentRange range = {}) -> bool;

} // namespace faigp
