#include "faigp/syntax.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "faigp/canonical.hpp"

namespace faigp {

ParseError::ParseError(Kind kind, std::size_t offset, std::string const& message)
    : std::runtime_error(fmt::format("{} at byte {}", message, offset))
    , kind_(kind)
    , offset_(offset)
{
}

auto FormatNumber(double value) -> std::string { return fmt::format("{}", value); }

namespace {
    constexpr std::string_view kProdOpen = "\xCE\xA0["; // "Π["

    auto IsIdentChar(char c) -> bool
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    }

    auto IsDigit(char c) -> bool { return c >= '0' && c <= '9'; }

    class Cursor {
    public:
        explicit Cursor(std::string_view text)
            : text_(text)
        {
        }

        void SkipSpace()
        {
            while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
                ++pos_;
            }
        }

        auto AtEnd() -> bool
        {
            SkipSpace();
            return pos_ >= text_.size();
        }

        auto Peek() -> char
        {
            SkipSpace();
            return pos_ < text_.size() ? text_[pos_] : '\0';
        }

        auto Accept(std::string_view token) -> bool
        {
            SkipSpace();
            if (text_.substr(pos_).starts_with(token)) {
                pos_ += token.size();
                return true;
            }
            return false;
        }

        void Expect(std::string_view token)
        {
            if (!Accept(token)) {
                Fail(fmt::format("expected '{}'", token));
            }
        }

        [[noreturn]] void Fail(std::string const& message) const
        {
            throw ParseError(ParseError::Kind::Syntax, pos_, message);
        }

        [[noreturn]] void FailRange(int exponent, ExponentRange range, std::size_t at) const
        {
            throw ParseError(ParseError::Kind::ExponentRange, at,
                fmt::format("exponent {} outside [{}, {}]", exponent, range.Min, range.Max));
        }

        auto TryNumber() -> std::optional<double>
        {
            SkipSpace();
            auto rest = text_.substr(pos_);
            std::size_t len = 0;
            if (len < rest.size() && (rest[len] == '-' || rest[len] == '+')) {
                ++len;
            }
            for (std::string_view special : { "inf", "nan" }) {
                if (rest.substr(len).starts_with(special)
                    && (len + special.size() == rest.size() || !IsIdentChar(rest[len + special.size()]))) {
                    double v = special == "inf" ? HUGE_VAL : std::nan("");
                    pos_ += len + special.size();
                    return rest[0] == '-' ? -v : v;
                }
            }
            auto digitsStart = len;
            while (len < rest.size() && (IsDigit(rest[len]) || rest[len] == '.')) {
                ++len;
            }
            if (len == digitsStart) {
                return std::nullopt;
            }
            if (len < rest.size() && (rest[len] == 'e' || rest[len] == 'E')) {
                auto save = len;
                ++len;
                if (len < rest.size() && (rest[len] == '-' || rest[len] == '+')) {
                    ++len;
                }
                if (len < rest.size() && IsDigit(rest[len])) {
                    while (len < rest.size() && IsDigit(rest[len])) {
                        ++len;
                    }
                } else {
                    len = save;
                }
            }
            auto first = rest.data() + (rest[0] == '+' ? 1 : 0);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(first, rest.data() + len, value);
            if (ec != std::errc {} || ptr != rest.data() + len) {
                Fail("malformed number");
            }
            pos_ += len;
            return value;
        }

        auto Number() -> double
        {
            auto v = TryNumber();
            if (!v) {
                Fail("expected a number");
            }
            return *v;
        }

        auto Integer() -> int
        {
            SkipSpace();
            auto at = pos_;
            auto rest = text_.substr(pos_);
            int value = 0;
            auto first = rest.data() + (!rest.empty() && rest[0] == '+' ? 1 : 0);
            auto [ptr, ec] = std::from_chars(first, rest.data() + rest.size(), value);
            if (ec != std::errc {} || ptr == first) {
                pos_ = at;
                Fail("expected an integer exponent");
            }
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e')) {
                pos_ = at;
                Fail("exponents must be integers");
            }
            return value;
        }

        auto Identifier() -> std::string_view
        {
            SkipSpace();
            auto start = pos_;
            while (pos_ < text_.size() && IsIdentChar(text_[pos_])) {
                ++pos_;
            }
            return text_.substr(start, pos_ - start);
        }

        auto Pos() const -> std::size_t { return pos_; }
        void Seek(std::size_t pos) { pos_ = pos; }

    private:
        std::string_view text_;
        std::size_t pos_ { 0 };
    };

    auto VariableIndex(std::string_view ident) -> std::optional<std::size_t>
    {
        if (ident == "x") {
            return 0;
        }
        if (ident == "y") {
            return 1;
        }
        if (ident == "z") {
            return 2;
        }
        if (ident.size() >= 2 && ident[0] == 'x') {
            std::size_t index = 0;
            auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
            if (ec == std::errc {} && ptr == ident.data() + ident.size() && index >= 1) {
                return index - 1;
            }
        }
        return std::nullopt;
    }

    // Full node form, read structurally.
    class StrictParser {
    public:
        StrictParser(std::string_view text, ExponentRange range)
            : cur_(text)
            , range_(range)
        {
        }

        auto Run() -> Program
        {
            auto p = ParseProgram();
            if (!cur_.AtEnd()) {
                cur_.Fail("unexpected trailing input");
            }
            return p;
        }

        auto Furthest() const -> std::size_t { return cur_.Pos(); }

    private:
        auto ParseProgram() -> Program
        {
            Program p;
            p.Nodes.push_back(ParseNode());
            while (cur_.Accept("+")) {
                p.Nodes.push_back(ParseNode());
            }
            return p;
        }

        auto ParseNode() -> Node
        {
            Node n;
            n.Coeff = cur_.Number();
            cur_.Expect("*");
            if (cur_.Accept(kProdOpen) || cur_.Accept("prod[")) {
                n.Op = OperatorKind::Prod;
                Program children;
                children.Nodes.push_back(ParseNode());
                while (cur_.Accept(",")) {
                    children.Nodes.push_back(ParseNode());
                }
                cur_.Expect("]");
                n.Arg = std::move(children);
            } else {
                auto at = cur_.Pos();
                auto name = cur_.Identifier();
                auto op = OperatorFromName(name);
                if (!op || *op == OperatorKind::Prod) {
                    cur_.Seek(at);
                    cur_.Fail(fmt::format("unknown operator '{}'", name));
                }
                n.Op = *op;
                cur_.Expect("(");
                if (cur_.Peek() == '{') {
                    if (n.Op == OperatorKind::Sum) {
                        cur_.Fail("sum requires a sub-program argument");
                    }
                    n.Arg = ParseOperands();
                } else {
                    n.Arg = ParseProgram();
                }
                cur_.Expect(")");
            }
            cur_.Expect("^");
            auto at = cur_.Pos();
            n.Exponent = cur_.Integer();
            if (!range_.Contains(n.Exponent) && n.Exponent != 0) {
                cur_.FailRange(n.Exponent, range_, at);
            }
            return n;
        }

        auto ParseOperands() -> OperandSet
        {
            cur_.Expect("{");
            OperandSet set;
            do {
                auto at = cur_.Pos();
                if (auto v = cur_.TryNumber()) {
                    if (std::isnan(*v)) {
                        cur_.Seek(at);
                        cur_.Fail("operand constants must not be NaN");
                    }
                    set.InsertConstant(*v);
                    continue;
                }
                auto ident = cur_.Identifier();
                auto index = VariableIndex(ident);
                if (!index) {
                    cur_.Seek(at);
                    cur_.Fail("expected a variable or a number");
                }
                set.InsertVariable(*index);
            } while (cur_.Accept(","));
            cur_.Expect("}");
            return set;
        }

        Cursor cur_;
        ExponentRange range_;
    };

    // Infix sugar built through the algebra.
    class SugarParser {
    public:
        SugarParser(std::string_view text, ExponentRange range)
            : cur_(text)
            , range_(range)
        {
        }

        auto Run() -> Program
        {
            auto p = ParseExpr();
            if (!cur_.AtEnd()) {
                cur_.Fail("unexpected trailing input");
            }
            return Canonicalize(std::move(p), range_);
        }

        auto Furthest() const -> std::size_t { return cur_.Pos(); }

    private:
        static auto Wrap(Program p) -> Node
        {
            if (p.Size() == 1) {
                return std::move(p.Nodes.front());
            }
            return { 1.0, OperatorKind::Sum, std::move(p), 1 };
        }

        static void Scale(Program& p, double k)
        {
            for (auto& n : p.Nodes) {
                n.Coeff *= k;
            }
        }

        auto ParseExpr() -> Program
        {
            Program result;
            bool first = true;
            while (true) {
                double sign = 1.0;
                if (cur_.Accept("-")) {
                    sign = -1.0;
                } else if (!cur_.Accept("+") && !first) {
                    break;
                }
                auto term = ParseTerm();
                Scale(term, sign);
                for (auto& n : term.Nodes) {
                    result.Nodes.push_back(std::move(n));
                }
                first = false;
            }
            return result;
        }

        auto ParseTerm() -> Program
        {
            auto lhs = ParsePower();
            while (true) {
                if (cur_.Accept("*")) {
                    auto rhs = ParsePower();
                    lhs = Multiply(std::move(lhs), std::move(rhs));
                } else if (cur_.Peek() == '/') {
                    auto at = cur_.Pos();
                    cur_.Accept("/");
                    auto rhs = ParsePower();
                    if (!range_.Contains(-1)) {
                        cur_.FailRange(-1, range_, at);
                    }
                    Program inv;
                    inv.Nodes.emplace_back(1.0, OperatorKind::Sum, std::move(rhs), -1);
                    lhs = Multiply(std::move(lhs), std::move(inv));
                } else {
                    return lhs;
                }
            }
        }

        static auto Multiply(Program a, Program b) -> Program
        {
            Program children;
            children.Nodes.push_back(Wrap(std::move(a)));
            children.Nodes.push_back(Wrap(std::move(b)));
            Program out;
            out.Nodes.emplace_back(1.0, OperatorKind::Prod, std::move(children), 1);
            return out;
        }

        auto ParsePower() -> Program
        {
            if (cur_.Accept("-")) {
                auto p = ParsePower();
                Scale(p, -1.0);
                return p;
            }
            auto base = ParsePrimary();
            if (!cur_.Accept("^")) {
                return base;
            }
            bool paren = cur_.Accept("(");
            auto at = cur_.Pos();
            auto k = cur_.Integer();
            if (paren) {
                cur_.Expect(")");
            }
            if (!range_.Contains(k) && k != 0) {
                cur_.FailRange(k, range_, at);
            }
            if (base.Size() == 1 && base.Nodes.front().Coeff == 1.0 && base.Nodes.front().Exponent == 1) {
                base.Nodes.front().Exponent = k;
                return base;
            }
            Program out;
            out.Nodes.emplace_back(1.0, OperatorKind::Sum, std::move(base), k);
            return out;
        }

        auto ParsePrimary() -> Program
        {
            Program out;
            if (auto v = cur_.TryNumber()) {
                out.Nodes.push_back(Node::Constant(*v));
                return out;
            }
            if (cur_.Accept("(")) {
                auto inner = ParseExpr();
                cur_.Expect(")");
                return inner;
            }
            auto at = cur_.Pos();
            auto ident = cur_.Identifier();
            if (ident.empty()) {
                cur_.Fail("expected an expression");
            }
            if (auto index = VariableIndex(ident)) {
                out.Nodes.emplace_back(1.0, OperatorKind::Affine, OperandSet::Variable(*index), 1);
                return out;
            }
            if (ident == "pi") {
                out.Nodes.push_back(Node::Constant(std::numbers::pi));
                return out;
            }
            auto op = OperatorFromName(ident);
            if (!op || IsStructural(*op)) {
                cur_.Seek(at);
                cur_.Fail(fmt::format("unknown function '{}'", ident));
            }
            cur_.Expect("(");
            auto arg = ParseExpr();
            cur_.Expect(")");
            if (arg.Size() == 1) {
                auto& only = arg.Nodes.front();
                if (only.Coeff == 1.0 && only.Op == OperatorKind::Affine && only.Exponent == 1 && !only.HasSubprogram()) {
                    out.Nodes.emplace_back(1.0, *op, std::move(only.Operands()), 1);
                    return out;
                }
            }
            out.Nodes.emplace_back(1.0, *op, std::move(arg), 1);
            return out;
        }

        Cursor cur_;
        ExponentRange range_;
    };

    void SerializeTo(std::string& out, Program const& p);

    void SerializeTo(std::string& out, OperandSet const& s)
    {
        out += '{';
        bool first = true;
        for (auto v : s.Variables()) {
            if (!first) {
                out += ',';
            }
            out += fmt::format("x{}", v + 1);
            first = false;
        }
        for (auto c : s.Constants()) {
            if (!first) {
                out += ',';
            }
            out += FormatNumber(c);
            first = false;
        }
        out += '}';
    }

    void SerializeTo(std::string& out, Node const& n)
    {
        out += FormatNumber(n.Coeff);
        out += '*';
        if (n.Op == OperatorKind::Prod && n.HasSubprogram()) {
            out += kProdOpen;
            bool first = true;
            for (auto const& c : n.Subprogram().Nodes) {
                if (!first) {
                    out += ", ";
                }
                SerializeTo(out, c);
                first = false;
            }
            out += ']';
        } else {
            out += Name(n.Op);
            out += '(';
            if (n.HasSubprogram()) {
                SerializeTo(out, n.Subprogram());
            } else {
                SerializeTo(out, n.Operands());
            }
            out += ')';
        }
        out += '^';
        out += std::to_string(n.Exponent);
    }

    void SerializeTo(std::string& out, Program const& p)
    {
        bool first = true;
        for (auto const& n : p.Nodes) {
            if (!first) {
                out += " + ";
            }
            SerializeTo(out, n);
            first = false;
        }
    }
} // namespace

auto Parse(std::string_view text, ExponentRange range) -> Program
{
    StrictParser strict(text, range);
    try {
        return strict.Run();
    } catch (ParseError const& strictError) {
        if (strictError.GetKind() == ParseError::Kind::ExponentRange) {
            throw;
        }
        SugarParser sugar(text, range);
        try {
            return sugar.Run();
        } catch (ParseError const& sugarError) {
            if (sugarError.GetKind() == ParseError::Kind::ExponentRange) {
                throw;
            }
            throw sugarError.Offset() >= strictError.Offset() ? sugarError : strictError;
        }
    }
}

auto Serialize(Program const& p) -> std::string
{
    Program sorted = p;
    SortNodes(sorted);
    std::string out;
    SerializeTo(out, sorted);
    return out;
}

auto Serialize(Node const& n) -> std::string
{
    Program wrapper;
    wrapper.Nodes.push_back(n);
    return Serialize(wrapper);
}

} // namespace faigp
