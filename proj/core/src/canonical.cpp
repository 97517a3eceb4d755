#include "faigp/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace faigp {

namespace {
    constexpr int kMaxPasses = 32;

    auto SameOperatorAndArg(Node const& a, Node const& b) -> bool
    {
        if (a.Op != b.Op || a.Arg.index() != b.Arg.index()) {
            return false;
        }
        return a.HasSubprogram() ? a.Subprogram() == b.Subprogram() : a.Operands() == b.Operands();
    }

    auto SortCanonical(std::vector<Node>& nodes) -> void
    {
        std::sort(nodes.begin(), nodes.end(), [](Node const& a, Node const& b) { return Compare(a, b) < 0; });
    }

    auto ConstantOrNothing(double value) -> std::optional<Node>
    {
        if (value == 0.0) {
            return std::nullopt;
        }
        return Node::Constant(value);
    }

    class Canonicalizer {
    public:
        explicit Canonicalizer(ExponentRange range)
            : range_(range)
        {
        }

        auto Additive(std::vector<Node> const& nodes) const -> std::vector<Node>
        {
            std::vector<Node> flat;
            flat.reserve(nodes.size());
            for (auto const& n : nodes) {
                auto c = CanonNode(n);
                if (!c) {
                    continue;
                }
                if (c->Op == OperatorKind::Sum && c->Exponent == 1) {
                    for (auto child : c->Subprogram().Nodes) {
                        child.Coeff *= c->Coeff;
                        if (child.Coeff != 0.0) {
                            flat.push_back(std::move(child));
                        }
                    }
                } else {
                    flat.push_back(std::move(*c));
                }
            }

            std::sort(flat.begin(), flat.end(), [](Node const& a, Node const& b) { return CompareShape(a, b) < 0; });
            std::vector<Node> merged;
            merged.reserve(flat.size());
            for (auto& n : flat) {
                if (!merged.empty() && CompareShape(merged.back(), n) == 0) {
                    merged.back().Coeff += n.Coeff;
                } else {
                    merged.push_back(std::move(n));
                }
            }
            std::erase_if(merged, [](Node const& n) { return n.Coeff == 0.0; });
            SortCanonical(merged);
            return merged;
        }

        // Children of a product (all with coefficient 1) plus the constant factor.
        auto Multiplicative(std::vector<Node> const& nodes) const -> std::pair<std::vector<Node>, double>
        {
            double factor = 1.0;
            std::vector<Node> flat;
            flat.reserve(nodes.size());
            auto absorb = [&](Node n) {
                factor *= n.Coeff;
                n.Coeff = 1.0;
                flat.push_back(std::move(n));
            };
            for (auto const& n : nodes) {
                auto c = CanonNode(n);
                if (!c) {
                    factor = 0.0;
                    continue;
                }
                if (c->IsConstantTerm()) {
                    factor *= c->Coeff;
                } else if (c->Op == OperatorKind::Prod && c->Exponent == 1) {
                    factor *= c->Coeff;
                    for (auto& child : c->Subprogram().Nodes) {
                        absorb(std::move(child));
                    }
                } else {
                    absorb(std::move(*c));
                }
            }

            std::sort(flat.begin(), flat.end(), [](Node const& a, Node const& b) { return CompareShape(a, b) < 0; });
            std::vector<Node> merged;
            merged.reserve(flat.size());
            std::optional<Node> acc;
            for (auto& n : flat) {
                if (!acc) {
                    acc = std::move(n);
                    continue;
                }
                if (SameOperatorAndArg(*acc, n)) {
                    auto const sum = acc->Exponent + n.Exponent;
                    if (sum == 0) {
                        acc.reset();
                        continue;
                    }
                    if (range_.Contains(sum)) {
                        acc->Exponent = sum;
                        continue;
                    }
                }
                merged.push_back(std::move(*acc));
                acc = std::move(n);
            }
            if (acc) {
                merged.push_back(std::move(*acc));
            }
            SortCanonical(merged);
            return { std::move(merged), factor };
        }

        // nullopt when the node is identically zero.
        auto CanonNode(Node n) const -> std::optional<Node>
        {
            if (n.Coeff == 0.0) {
                return std::nullopt;
            }
            if (n.Exponent == 0) {
                return Node::Constant(n.Coeff);
            }
            if (!n.HasSubprogram()) {
                if (IsStructural(n.Op)) {
                    n.Op = OperatorKind::Affine;
                }
                return FoldIfConstant(std::move(n));
            }

            if (n.Op == OperatorKind::Prod) {
                auto [children, factor] = Multiplicative(n.Subprogram().Nodes);
                if (factor == 0.0 || children.empty()) {
                    // C * factor^P with nothing left to multiply.
                    n.Op = OperatorKind::Affine;
                    n.Arg = OperandSet::Constant(factor);
                    return FoldIfConstant(std::move(n));
                }
                auto const scaled = n.Coeff * IntPow(factor, n.Exponent);
                if (std::isfinite(scaled) && scaled != 0.0) {
                    n.Coeff = scaled;
                } else {
                    children.front().Coeff = factor;
                }
                n.Subprogram().Nodes = std::move(children);
            } else {
                auto children = Additive(n.Subprogram().Nodes);
                if (children.empty()) {
                    n.Op = n.Op == OperatorKind::Sum ? OperatorKind::Affine : n.Op;
                    n.Arg = OperandSet::Constant(0.0);
                    return FoldIfConstant(std::move(n));
                }
                if (n.Op == OperatorKind::Affine) {
                    n.Op = OperatorKind::Sum;
                }
                if (n.Op != OperatorKind::Sum && children.size() == 1) {
                    auto& only = children.front();
                    if (only.Coeff == 1.0 && only.Op == OperatorKind::Affine && only.Exponent == 1
                        && !only.HasSubprogram()) {
                        n.Arg = std::move(only.Operands());
                        return FoldIfConstant(std::move(n));
                    }
                }
                n.Subprogram().Nodes = std::move(children);
            }

            if (IsStructural(n.Op) && n.Subprogram().Size() == 1) {
                if (auto lifted = LiftSingleChild(n)) {
                    return lifted;
                }
            }
            if (!HasVariables(n.Subprogram())) {
                return FoldIfConstant(std::move(n));
            }
            return n;
        }

    private:
        // (C, sum|prod, {(k, F, E, p)}, P)  ->  (C * k^P, F, E, p * P)
        auto LiftSingleChild(Node const& n) const -> std::optional<Node>
        {
            auto const& child = n.Subprogram().Nodes.front();
            if (child.IsConstantTerm()) {
                return std::nullopt;
            }
            auto const p = child.Exponent * n.Exponent;
            if (!range_.Contains(p)) {
                return std::nullopt;
            }
            auto const coeff = n.Coeff * IntPow(child.Coeff, n.Exponent);
            if (!std::isfinite(coeff) || coeff == 0.0) {
                return std::nullopt;
            }
            Node lifted = child;
            lifted.Coeff = coeff;
            lifted.Exponent = p;
            return lifted;
        }

        static auto FoldIfConstant(Node n) -> std::optional<Node>
        {
            bool const variableFree = n.HasSubprogram() ? !HasVariables(n.Subprogram()) : !n.Operands().HasVariables();
            if (!variableFree) {
                return n;
            }
            Program wrapper;
            wrapper.Nodes.push_back(n);
            auto const value = Evaluate(wrapper, std::span<double const> {});
            if (!std::isfinite(value)) {
                return n;
            }
            return ConstantOrNothing(value);
        }

        ExponentRange range_;
    };

    auto CanonicalizeOnce(Program const& p, ExponentRange range) -> Program
    {
        Canonicalizer canon(range);
        Program out;
        out.Nodes = canon.Additive(p.Nodes);
        if (out.Nodes.empty()) {
            out.Nodes.push_back(Node::Constant(0.0));
        }
        return out;
    }
} // namespace

auto MergeUnion(Node const& a, Node const& b, UnionMode mode, ExponentRange range) -> MergeResult
{
    MergeResult result;
    if (mode == UnionMode::Additive) {
        if (CompareShape(a, b) == 0) {
            Node merged = a;
            merged.Coeff = a.Coeff + b.Coeff;
            result.Nodes.push_back(std::move(merged));
        } else {
            result.Nodes = { a, b };
        }
        return result;
    }

    if (SameOperatorAndArg(a, b)) {
        auto const sum = a.Exponent + b.Exponent;
        if (range.Contains(sum)) {
            Node merged = a;
            merged.Coeff = a.Coeff * b.Coeff;
            merged.Exponent = sum;
            result.Nodes.push_back(std::move(merged));
            return result;
        }
        result.RangeViolation = true;
    }
    Node first = a;
    Node second = b;
    first.Coeff = a.Coeff * b.Coeff;
    second.Coeff = 1.0;
    result.Nodes = { std::move(first), std::move(second) };
    return result;
}

auto MergeUnion(OperandSet const& a, OperandSet const& b) -> OperandSet { return a.Union(b); }

auto Canonicalize(Program p, ExponentRange range) -> Program
{
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        auto next = CanonicalizeOnce(p, range);
        if (next == p) {
            return next;
        }
        p = std::move(next);
    }
    return p;
}

auto IsCanonical(Program const& p, ExponentRange range) -> bool { return Canonicalize(p, range) == p; }

} // namespace faigp
