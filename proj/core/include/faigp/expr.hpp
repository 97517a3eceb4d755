#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace faigp {

// Unary library operators come first; `Sum` and `Prod` are the multinary
// structural terminals and only ever take a sub-program as argument.
enum class OperatorKind : std::uint8_t {
    SqrtAbs,
    Cos,
    Sin,
    LogAbs,
    Affine,
    Sum,
    Prod,
};

inline constexpr std::size_t kLibrarySize = 5;

inline constexpr std::array<OperatorKind, kLibrarySize> kLibrary {
    OperatorKind::SqrtAbs, OperatorKind::Cos, OperatorKind::Sin, OperatorKind::LogAbs, OperatorKind::Affine
};

constexpr auto IsLibrary(OperatorKind op) noexcept -> bool
{
    return op != OperatorKind::Sum && op != OperatorKind::Prod;
}

constexpr auto IsStructural(OperatorKind op) noexcept -> bool { return !IsLibrary(op); }

// Position of a library operator inside kLibrary (undefined for Sum/Prod).
constexpr auto LibraryIndex(OperatorKind op) noexcept -> std::size_t { return static_cast<std::size_t>(op); }

// "sqrt", "cos", "sin", "log", "affine", "sum", "prod"
auto Name(OperatorKind op) noexcept -> std::string_view;
auto OperatorFromName(std::string_view name) noexcept -> std::optional<OperatorKind>;

// sqrt(|v|), cos, sin, ln|v| with ln 0 := 0, identity for affine/sum/prod.
auto Apply(OperatorKind op, double value) noexcept -> double;

// Integer power by repeated squaring; a zero base with a negative exponent
// yields +/-inf, which is the non-finite sentinel evaluation propagates.
auto IntPow(double base, int exponent) noexcept -> double;

// Total order over doubles (including NaN and signed zero), consistent with
// bit equality. Used wherever sets of reals need a deterministic ordering.
auto TotalOrder(double a, double b) noexcept -> std::strong_ordering;
auto BitEqual(double a, double b) noexcept -> bool;

struct ExponentRange {
    int Min { -2 };
    int Max { 2 };

    [[nodiscard]] constexpr auto Contains(int p) const noexcept -> bool { return p >= Min && p <= Max; }
    auto operator==(ExponentRange const&) const -> bool = default;
};

// A finite set of variables (0-based indices, printed as x1..xd) and real
// constants. Membership of constants uses bit equality.
class OperandSet {
public:
    OperandSet() = default;

    static auto Variable(std::size_t index) -> OperandSet;
    static auto Constant(double value) -> OperandSet;

    // Return true when the element was not already present.
    auto InsertVariable(std::size_t index) -> bool;
    auto InsertConstant(double value) -> bool;
    auto EraseVariable(std::size_t index) -> bool;
    auto EraseConstant(double value) -> bool;

    [[nodiscard]] auto Variables() const noexcept -> std::span<std::size_t const> { return variables_; }
    [[nodiscard]] auto Constants() const noexcept -> std::span<double const> { return constants_; }
    [[nodiscard]] auto Size() const noexcept -> std::size_t { return variables_.size() + constants_.size(); }
    [[nodiscard]] auto Empty() const noexcept -> bool { return Size() == 0; }
    [[nodiscard]] auto HasVariables() const noexcept -> bool { return !variables_.empty(); }

    // Sum of the members' values at `point`.
    [[nodiscard]] auto Aggregate(std::span<double const> point) const noexcept -> double;

    // |A ∩ B|
    [[nodiscard]] auto IntersectionSize(OperandSet const& other) const noexcept -> std::size_t;
    [[nodiscard]] auto Union(OperandSet const& other) const -> OperandSet;

    friend auto Compare(OperandSet const& a, OperandSet const& b) noexcept -> std::strong_ordering;
    friend auto operator==(OperandSet const& a, OperandSet const& b) noexcept -> bool
    {
        return Compare(a, b) == std::strong_ordering::equal;
    }

private:
    std::vector<std::size_t> variables_; // sorted, unique
    std::vector<double> constants_;      // sorted by TotalOrder, unique
};

struct Node;

// A set of 4-tuple nodes. Canonical programs keep `Nodes` sorted by the node
// ordering; arbitrary programs may hold them in any order.
struct Program {
    std::vector<Node> Nodes;

    [[nodiscard]] auto Size() const noexcept -> std::size_t { return Nodes.size(); }
    [[nodiscard]] auto Empty() const noexcept -> bool { return Nodes.empty(); }
};

// (coefficient, operator, operand-or-subprogram, exponent)
struct Node {
    double Coeff { 1.0 };
    OperatorKind Op { OperatorKind::Affine };
    std::variant<OperandSet, Program> Arg;
    int Exponent { 1 };

    Node() = default;
    Node(double coeff, OperatorKind op, OperandSet operands, int exponent);
    Node(double coeff, OperatorKind op, Program sub, int exponent);

    // The constant term C, written as (C, affine, {1}, 0).
    static auto Constant(double value) -> Node;

    [[nodiscard]] auto HasSubprogram() const noexcept -> bool { return std::holds_alternative<Program>(Arg); }
    [[nodiscard]] auto Operands() const -> OperandSet const& { return std::get<OperandSet>(Arg); }
    [[nodiscard]] auto Operands() -> OperandSet& { return std::get<OperandSet>(Arg); }
    [[nodiscard]] auto Subprogram() const -> Program const& { return std::get<Program>(Arg); }
    [[nodiscard]] auto Subprogram() -> Program& { return std::get<Program>(Arg); }
    [[nodiscard]] auto IsConstantTerm() const noexcept -> bool { return Exponent == 0; }
};

// Structural ordering: operator tag, then argument (operand sets before
// sub-programs, each lexicographic), then exponent, then coefficient.
auto Compare(Node const& a, Node const& b) noexcept -> std::strong_ordering;
auto Compare(Program const& a, Program const& b) noexcept -> std::strong_ordering;
// Ordering that ignores coefficients; two nodes with equal keys are ∪̇ candidates.
auto CompareShape(Node const& a, Node const& b) noexcept -> std::strong_ordering;

inline auto operator==(Node const& a, Node const& b) noexcept -> bool { return Compare(a, b) == std::strong_ordering::equal; }
inline auto operator==(Program const& a, Program const& b) noexcept -> bool { return Compare(a, b) == std::strong_ordering::equal; }

// Equality of node sets at every nesting level, independent of storage order.
auto SetEqual(Program const& a, Program const& b) -> bool;
// Recursively sorts every node set.
auto SortNodes(Program& p) -> void;

// Column-major view over sample inputs: Values[var * Rows + row].
struct DataView {
    std::span<double const> Values;
    std::size_t Rows { 0 };
    std::size_t Arity { 0 };

    [[nodiscard]] auto Column(std::size_t var) const -> std::span<double const> { return Values.subspan(var * Rows, Rows); }
};

// Value of `p` at a single point. Throws std::invalid_argument if the point
// has fewer coordinates than the program references.
auto Evaluate(Program const& p, std::span<double const> point) -> double;

// Values of `p` at every row of `data` (same arity contract as above).
auto Evaluate(Program const& p, DataView data) -> std::vector<double>;
auto EvaluateInto(Program const& p, DataView data, std::span<double> out) -> void;

enum class LengthMode {
    Flat,            // 3 + |O| per node
    ExponentWeighted // 1 + (1 + len(E)) * |P|, recursive
};

auto Length(Program const& p, LengthMode mode) -> std::size_t;
auto Length(Node const& n, LengthMode mode) -> std::size_t;

// Nesting depth: 1 for a program of operand-set nodes only.
auto Depth(Program const& p) -> std::size_t;
// Number of nodes at every nesting level.
auto NodeCount(Program const& p) -> std::size_t;
// One past the largest variable index referenced (0 when variable-free).
auto RequiredArity(Program const& p) -> std::size_t;
auto HasVariables(Program const& p) -> bool;

} // namespace faigp
