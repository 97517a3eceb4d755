#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "faigp/expr.hpp"

namespace faigp {

class ParseError : public std::runtime_error {
public:
    enum class Kind {
        Syntax,
        ExponentRange,
    };

    ParseError(Kind kind, std::size_t offset, std::string const& message);

    [[nodiscard]] auto GetKind() const noexcept -> Kind { return kind_; }
    // Byte offset into the parsed text.
    [[nodiscard]] auto Offset() const noexcept -> std::size_t { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

// Accepts either the full node form
//
//   2*sin({x1,0.5})^1 + -1*sum(1*cos({x2})^1 + 3*affine({1})^0)^2 + 1*Π[1*affine({x1})^2, 1*sin({x1})^1]^1
//
// which is read structurally (no canonicalization), or infix sugar such as
// "x^3 + x^2 + x", "0.3*x*sin(6.28*x)", "sqrt(x)", "log(x + 1)" which is
// built through the algebra and returned canonical. Variables are x1..xN,
// with x, y, z as aliases for x1, x2, x3; "prod[" is accepted for "Π[".
auto Parse(std::string_view text, ExponentRange range = {}) -> Program;

// Full node form with every node set in canonical order, so programs that
// are equal as sets serialize identically.
auto Serialize(Program const& p) -> std::string;
auto Serialize(Node const& n) -> std::string;

// Shortest representation that reads back bit-identically.
auto FormatNumber(double value) -> std::string;

} // namespace faigp
