#include "faigp/expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace faigp {

namespace {
    constexpr std::array<std::string_view, 7> kNames { "sqrt", "cos", "sin", "log", "affine", "sum", "prod" };

    auto OrderKey(double v) noexcept -> std::uint64_t
    {
        auto bits = std::bit_cast<std::uint64_t>(v);
        constexpr std::uint64_t sign = std::uint64_t { 1 } << 63U;
        return (bits & sign) != 0 ? ~bits : bits | sign;
    }

    template <typename T, typename Cmp>
    auto CompareRange(std::span<T const> a, std::span<T const> b, Cmp cmp) noexcept -> std::strong_ordering
    {
        auto const n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = cmp(a[i], b[i]); c != 0) {
                return c;
            }
        }
        return a.size() <=> b.size();
    }

    auto CompareArg(Node const& a, Node const& b) noexcept -> std::strong_ordering
    {
        if (auto c = a.Arg.index() <=> b.Arg.index(); c != 0) {
            return c;
        }
        if (!a.HasSubprogram()) {
            return Compare(a.Operands(), b.Operands());
        }
        return Compare(a.Subprogram(), b.Subprogram());
    }

    auto EvaluateNode(Node const& n, std::span<double const> point) noexcept -> double;

    auto EvaluateProgram(Program const& p, std::span<double const> point) noexcept -> double
    {
        double sum = 0.0;
        for (auto const& n : p.Nodes) {
            sum += EvaluateNode(n, point);
        }
        return sum;
    }

    auto EvaluateNode(Node const& n, std::span<double const> point) noexcept -> double
    {
        double inner = 0.0;
        if (!n.HasSubprogram()) {
            inner = n.Operands().Aggregate(point);
        } else if (n.Op == OperatorKind::Prod) {
            inner = 1.0;
            for (auto const& c : n.Subprogram().Nodes) {
                inner *= EvaluateNode(c, point);
            }
        } else {
            inner = EvaluateProgram(n.Subprogram(), point);
        }
        return n.Coeff * IntPow(Apply(n.Op, inner), n.Exponent);
    }

    // Column-wise evaluation: every node fills a buffer of `rows` values.
    auto EvaluateNodeBatch(Node const& n, DataView data, std::span<double> out) -> void;

    auto EvaluateProgramBatch(Program const& p, DataView data, std::span<double> out) -> void
    {
        std::fill(out.begin(), out.end(), 0.0);
        std::vector<double> tmp(data.Rows);
        for (auto const& n : p.Nodes) {
            EvaluateNodeBatch(n, data, tmp);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] += tmp[i];
            }
        }
    }

    auto EvaluateNodeBatch(Node const& n, DataView data, std::span<double> out) -> void
    {
        if (!n.HasSubprogram()) {
            auto const& ops = n.Operands();
            double c = 0.0;
            for (auto v : ops.Constants()) {
                c += v;
            }
            std::fill(out.begin(), out.end(), c);
            for (auto var : ops.Variables()) {
                auto col = data.Column(var);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    out[i] += col[i];
                }
            }
        } else if (n.Op == OperatorKind::Prod) {
            std::fill(out.begin(), out.end(), 1.0);
            std::vector<double> tmp(data.Rows);
            for (auto const& c : n.Subprogram().Nodes) {
                EvaluateNodeBatch(c, data, tmp);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    out[i] *= tmp[i];
                }
            }
        } else {
            EvaluateProgramBatch(n.Subprogram(), data, out);
        }
        auto const op = n.Op;
        auto const p = n.Exponent;
        auto const k = n.Coeff;
        if (p == 1) {
            for (auto& v : out) {
                v = k * Apply(op, v);
            }
        } else {
            for (auto& v : out) {
                v = k * IntPow(Apply(op, v), p);
            }
        }
    }

    auto CheckArity(Program const& p, std::size_t available) -> void
    {
        auto const need = RequiredArity(p);
        if (need > available) {
            throw std::invalid_argument("program references x" + std::to_string(need) + " but the input has arity "
                + std::to_string(available));
        }
    }

    auto RequiredArityNode(Node const& n) -> std::size_t;

    auto RequiredArityProgram(Program const& p) -> std::size_t
    {
        std::size_t r = 0;
        for (auto const& n : p.Nodes) {
            r = std::max(r, RequiredArityNode(n));
        }
        return r;
    }

    auto RequiredArityNode(Node const& n) -> std::size_t
    {
        if (n.HasSubprogram()) {
            return RequiredArityProgram(n.Subprogram());
        }
        auto vars = n.Operands().Variables();
        return vars.empty() ? 0 : vars.back() + 1;
    }
} // namespace

auto Name(OperatorKind op) noexcept -> std::string_view { return kNames[static_cast<std::size_t>(op)]; }

auto OperatorFromName(std::string_view name) noexcept -> std::optional<OperatorKind>
{
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            return static_cast<OperatorKind>(i);
        }
    }
    return std::nullopt;
}

auto Apply(OperatorKind op, double value) noexcept -> double
{
    switch (op) {
    case OperatorKind::SqrtAbs:
        return std::sqrt(std::abs(value));
    case OperatorKind::Cos:
        return std::cos(value);
    case OperatorKind::Sin:
        return std::sin(value);
    case OperatorKind::LogAbs:
        return value == 0.0 ? 0.0 : std::log(std::abs(value));
    default:
        return value;
    }
}

auto IntPow(double base, int exponent) noexcept -> double
{
    if (exponent == 1) {
        return base;
    }
    auto e = exponent < 0 ? -static_cast<long long>(exponent) : static_cast<long long>(exponent);
    double result = 1.0;
    double b = base;
    while (e > 0) {
        if ((e & 1) != 0) {
            result *= b;
        }
        b *= b;
        e >>= 1;
    }
    return exponent < 0 ? 1.0 / result : result;
}

auto TotalOrder(double a, double b) noexcept -> std::strong_ordering { return OrderKey(a) <=> OrderKey(b); }

auto BitEqual(double a, double b) noexcept -> bool
{
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// OperandSet

auto OperandSet::Variable(std::size_t index) -> OperandSet
{
    OperandSet s;
    s.variables_.push_back(index);
    return s;
}

auto OperandSet::Constant(double value) -> OperandSet
{
    OperandSet s;
    s.InsertConstant(value);
    return s;
}

auto OperandSet::InsertVariable(std::size_t index) -> bool
{
    auto it = std::lower_bound(variables_.begin(), variables_.end(), index);
    if (it != variables_.end() && *it == index) {
        return false;
    }
    variables_.insert(it, index);
    return true;
}

auto OperandSet::InsertConstant(double value) -> bool
{
    if (std::isnan(value)) {
        throw std::invalid_argument("operand constants must not be NaN");
    }
    auto it = std::lower_bound(constants_.begin(), constants_.end(), value,
        [](double a, double b) { return TotalOrder(a, b) < 0; });
    if (it != constants_.end() && BitEqual(*it, value)) {
        return false;
    }
    constants_.insert(it, value);
    return true;
}

auto OperandSet::EraseVariable(std::size_t index) -> bool
{
    auto it = std::lower_bound(variables_.begin(), variables_.end(), index);
    if (it == variables_.end() || *it != index) {
        return false;
    }
    variables_.erase(it);
    return true;
}

auto OperandSet::EraseConstant(double value) -> bool
{
    auto it = std::find_if(constants_.begin(), constants_.end(), [&](double c) { return BitEqual(c, value); });
    if (it == constants_.end()) {
        return false;
    }
    constants_.erase(it);
    return true;
}

auto OperandSet::Aggregate(std::span<double const> point) const noexcept -> double
{
    double sum = 0.0;
    for (auto v : variables_) {
        sum += point[v];
    }
    for (auto c : constants_) {
        sum += c;
    }
    return sum;
}

auto OperandSet::IntersectionSize(OperandSet const& other) const noexcept -> std::size_t
{
    std::size_t count = 0;
    for (auto v : variables_) {
        count += static_cast<std::size_t>(std::binary_search(other.variables_.begin(), other.variables_.end(), v));
    }
    for (auto c : constants_) {
        count += static_cast<std::size_t>(
            std::any_of(other.constants_.begin(), other.constants_.end(), [&](double o) { return BitEqual(o, c); }));
    }
    return count;
}

auto OperandSet::Union(OperandSet const& other) const -> OperandSet
{
    OperandSet result = *this;
    for (auto v : other.variables_) {
        result.InsertVariable(v);
    }
    for (auto c : other.constants_) {
        result.InsertConstant(c);
    }
    return result;
}

auto Compare(OperandSet const& a, OperandSet const& b) noexcept -> std::strong_ordering
{
    auto c = CompareRange<std::size_t>(a.variables_, b.variables_,
        [](std::size_t x, std::size_t y) { return x <=> y; });
    if (c != 0) {
        return c;
    }
    return CompareRange<double>(a.constants_, b.constants_, TotalOrder);
}

// Node / Program

Node::Node(double coeff, OperatorKind op, OperandSet operands, int exponent)
    : Coeff(coeff)
    , Op(op)
    , Arg(std::move(operands))
    , Exponent(exponent)
{
}

Node::Node(double coeff, OperatorKind op, Program sub, int exponent)
    : Coeff(coeff)
    , Op(op)
    , Arg(std::move(sub))
    , Exponent(exponent)
{
}

auto Node::Constant(double value) -> Node { return { value, OperatorKind::Affine, OperandSet::Constant(1.0), 0 }; }

auto CompareShape(Node const& a, Node const& b) noexcept -> std::strong_ordering
{
    if (auto c = a.Op <=> b.Op; c != 0) {
        return c;
    }
    if (auto c = CompareArg(a, b); c != 0) {
        return c;
    }
    return a.Exponent <=> b.Exponent;
}

auto Compare(Node const& a, Node const& b) noexcept -> std::strong_ordering
{
    if (auto c = CompareShape(a, b); c != 0) {
        return c;
    }
    return TotalOrder(a.Coeff, b.Coeff);
}

auto Compare(Program const& a, Program const& b) noexcept -> std::strong_ordering
{
    return CompareRange<Node>(a.Nodes, b.Nodes, [](Node const& x, Node const& y) { return Compare(x, y); });
}

auto SortNodes(Program& p) -> void
{
    for (auto& n : p.Nodes) {
        if (n.HasSubprogram()) {
            SortNodes(n.Subprogram());
        }
    }
    std::sort(p.Nodes.begin(), p.Nodes.end(), [](Node const& a, Node const& b) { return Compare(a, b) < 0; });
}

auto SetEqual(Program const& a, Program const& b) -> bool
{
    Program x = a;
    Program y = b;
    SortNodes(x);
    SortNodes(y);
    return x == y;
}

auto Evaluate(Program const& p, std::span<double const> point) -> double
{
    CheckArity(p, point.size());
    return EvaluateProgram(p, point);
}

auto Evaluate(Program const& p, DataView data) -> std::vector<double>
{
    std::vector<double> out(data.Rows);
    EvaluateInto(p, data, out);
    return out;
}

auto EvaluateInto(Program const& p, DataView data, std::span<double> out) -> void
{
    CheckArity(p, data.Arity);
    if (out.size() != data.Rows) {
        throw std::invalid_argument("output buffer size does not match the number of rows");
    }
    EvaluateProgramBatch(p, data, out);
}

auto Length(Node const& n, LengthMode mode) -> std::size_t
{
    if (mode == LengthMode::Flat) {
        return 3 + (n.HasSubprogram() ? Length(n.Subprogram(), mode) : n.Operands().Size());
    }
    auto const inner = n.HasSubprogram() ? Length(n.Subprogram(), mode) : n.Operands().Size();
    auto const p = static_cast<std::size_t>(std::abs(n.Exponent));
    return 1 + (1 + inner) * p;
}

auto Length(Program const& p, LengthMode mode) -> std::size_t
{
    std::size_t total = 0;
    for (auto const& n : p.Nodes) {
        total += Length(n, mode);
    }
    return total;
}

auto Depth(Program const& p) -> std::size_t
{
    std::size_t d = 0;
    for (auto const& n : p.Nodes) {
        d = std::max(d, n.HasSubprogram() ? 1 + Depth(n.Subprogram()) : std::size_t { 1 });
    }
    return d;
}

auto NodeCount(Program const& p) -> std::size_t
{
    std::size_t count = 0;
    for (auto const& n : p.Nodes) {
        count += 1 + (n.HasSubprogram() ? NodeCount(n.Subprogram()) : 0);
    }
    return count;
}

auto RequiredArity(Program const& p) -> std::size_t { return RequiredArityProgram(p); }

auto HasVariables(Program const& p) -> bool { return RequiredArity(p) > 0; }

} // namespace faigp
