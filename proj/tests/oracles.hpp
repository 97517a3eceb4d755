#pragma once

// Reference implementations used as test oracles. They re-derive the
// semantics from the definitions and share no code paths with the library
// beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "faigp/expr.hpp"

namespace faigp::oracle {

inline auto ApplyOp(OperatorKind op, long double v) -> long double
{
    switch (op) {
    case OperatorKind::SqrtAbs:
        return std::sqrt(std::fabs(v));
    case OperatorKind::Cos:
        return std::cos(v);
    case OperatorKind::Sin:
        return std::sin(v);
    case OperatorKind::LogAbs:
        return v == 0.0L ? 0.0L : std::log(std::fabs(v));
    default:
        return v;
    }
}

inline auto EvalProgram(Program const& p, std::span<double const> x) -> long double;

inline auto EvalNode(Node const& n, std::span<double const> x) -> long double
{
    long double inner = 0.0L;
    if (!n.HasSubprogram()) {
        for (auto v : n.Operands().Variables()) {
            inner += x[v];
        }
        for (auto c : n.Operands().Constants()) {
            inner += c;
        }
    } else if (n.Op == OperatorKind::Prod) {
        inner = 1.0L;
        for (auto const& c : n.Subprogram().Nodes) {
            inner *= EvalNode(c, x);
        }
    } else {
        inner = EvalProgram(n.Subprogram(), x);
    }
    auto const base = ApplyOp(n.Op, inner);
    if (n.Exponent == 0) {
        return n.Coeff;
    }
    return n.Coeff * std::pow(base, static_cast<long double>(n.Exponent));
}

inline auto EvalProgram(Program const& p, std::span<double const> x) -> long double
{
    long double s = 0.0L;
    for (auto const& n : p.Nodes) {
        s += EvalNode(n, x);
    }
    return s;
}

// Sum of absolute term magnitudes, the scale against which cancellation
// error is measured.
inline auto Magnitude(Program const& p, std::span<double const> x) -> long double
{
    long double s = 0.0L;
    for (auto const& n : p.Nodes) {
        s += std::fabs(EvalNode(n, x));
    }
    return s;
}

// Largest magnitude reached by any intermediate value (operand sums,
// operator outputs, powers, node values) at any depth. Rounding error in
// double evaluation is bounded by a small multiple of eps times this.
inline auto Scale(Program const& p, std::span<double const> x) -> long double;
inline auto Scale(Node const& n, std::span<double const> x) -> long double
{
    long double worst = 0.0L;
    long double inner = 0.0L;
    if (!n.HasSubprogram()) {
        for (auto v : n.Operands().Variables()) {
            inner += x[v];
            worst = std::max(worst, std::fabs(static_cast<long double>(x[v])));
        }
        for (auto c : n.Operands().Constants()) {
            inner += c;
            worst = std::max(worst, std::fabs(static_cast<long double>(c)));
        }
    } else if (n.Op == OperatorKind::Prod) {
        inner = 1.0L;
        for (auto const& c : n.Subprogram().Nodes) {
            inner *= EvalNode(c, x);
            worst = std::max({ worst, Scale(c, x), std::fabs(inner) });
        }
    } else {
        inner = EvalProgram(n.Subprogram(), x);
        worst = std::max(worst, Scale(n.Subprogram(), x));
    }
    auto const base = ApplyOp(n.Op, inner);
    worst = std::max({ worst, std::fabs(inner), std::fabs(base), std::fabs(EvalNode(n, x)) });
    if (n.Exponent != 0) {
        worst = std::max(worst, std::fabs(std::pow(base, static_cast<long double>(n.Exponent))));
    }
    return worst;
}
inline auto Scale(Program const& p, std::span<double const> x) -> long double
{
    long double worst = 0.0L;
    long double s = 0.0L;
    for (auto const& n : p.Nodes) {
        s += EvalNode(n, x);
        worst = std::max({ worst, Scale(n, x), std::fabs(s) });
    }
    return worst;
}

// Length formulas written out literally.
inline auto FlatLength(Program const& p) -> std::size_t;
inline auto FlatLength(Node const& n) -> std::size_t
{
    std::size_t operand = 0;
    if (n.HasSubprogram()) {
        operand = FlatLength(n.Subprogram());
    } else {
        operand = n.Operands().Variables().size() + n.Operands().Constants().size();
    }
    return 3 + operand;
}
inline auto FlatLength(Program const& p) -> std::size_t
{
    std::size_t s = 0;
    for (auto const& n : p.Nodes) {
        s += FlatLength(n);
    }
    return s;
}

inline auto WeightedLength(Program const& p) -> std::size_t;
inline auto WeightedLength(Node const& n) -> std::size_t
{
    std::size_t inner = 0;
    if (n.HasSubprogram()) {
        inner = WeightedLength(n.Subprogram());
    } else {
        inner = n.Operands().Variables().size() + n.Operands().Constants().size();
    }
    auto const power = static_cast<std::size_t>(n.Exponent < 0 ? -n.Exponent : n.Exponent);
    return 1 + (1 + inner) * power;
}
inline auto WeightedLength(Program const& p) -> std::size_t
{
    std::size_t s = 0;
    for (auto const& n : p.Nodes) {
        s += WeightedLength(n);
    }
    return s;
}

// Arbitrary (generally non-canonical) programs: duplicates, exponent-0
// nodes, nested sums and products, repeated constants.
class RandomPrograms {
public:
    explicit RandomPrograms(std::uint64_t seed, std::size_t arity = 2, ExponentRange range = {})
        : rng_(seed)
        , arity_(arity)
        , range_(range)
    {
    }

    auto Operands() -> OperandSet
    {
        OperandSet s;
        auto const k = Int(1, 3);
        for (int i = 0; i < k; ++i) {
            if (Int(0, 3) == 0) {
                s.InsertConstant(static_cast<double>(Int(-2, 2)) * 0.5);
            } else {
                s.InsertVariable(static_cast<std::size_t>(Int(0, static_cast<int>(arity_) - 1)));
            }
        }
        if (s.Empty()) {
            s.InsertVariable(0);
        }
        return s;
    }

    auto MakeNode(std::size_t depth) -> Node
    {
        auto const coeff = std::uniform_real_distribution<double>(-2.0, 2.0)(rng_);
        auto const exponent = Int(range_.Min, range_.Max);
        auto const nest = depth > 1 && Int(0, 3) == 0;
        if (nest) {
            auto const kind = Int(0, 2);
            auto const op = kind == 0 ? OperatorKind::Sum : kind == 1 ? OperatorKind::Prod : Library();
            return { coeff, op, Make(depth - 1, 1, 3), exponent };
        }
        return { coeff, Library(), Operands(), exponent };
    }

    auto Make(std::size_t depth, int minNodes = 1, int maxNodes = 4) -> Program
    {
        Program p;
        auto const count = Int(minNodes, maxNodes);
        for (int i = 0; i < count; ++i) {
            if (!p.Nodes.empty() && Int(0, 4) == 0) {
                auto copy = p.Nodes[static_cast<std::size_t>(Int(0, static_cast<int>(p.Nodes.size()) - 1))];
                copy.Coeff = std::uniform_real_distribution<double>(-2.0, 2.0)(rng_);
                p.Nodes.push_back(std::move(copy)); // same shape, merge candidate
            } else {
                p.Nodes.push_back(MakeNode(depth));
            }
        }
        return p;
    }

    auto Int(int lo, int hi) -> int { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    auto Real(double lo, double hi) -> double { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    auto Engine() -> std::mt19937_64& { return rng_; }

private:
    auto Library() -> OperatorKind { return kLibrary[static_cast<std::size_t>(Int(0, 4))]; }

    std::mt19937_64 rng_;
    std::size_t arity_;
    ExponentRange range_;
};

} // namespace faigp::oracle
