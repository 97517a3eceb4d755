#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "faigp/expr.hpp"
#include "faigp/random.hpp"

namespace faigp {

class PriorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Probability distribution over the library operators, indexed like kLibrary.
class OperatorPrior {
public:
    static constexpr double kTolerance = 1e-6;

    // Uniform prior.
    OperatorPrior();
    // Throws PriorError unless every entry is >= 0 and they sum to 1 ± 1e-6.
    explicit OperatorPrior(std::array<double, kLibrarySize> probs);

    static auto Uniform() -> OperatorPrior { return {}; }
    static auto Degenerate(OperatorKind op) -> OperatorPrior;

    // JSON object keyed by "sqrt", "cos", "sin", "log", "affine"; absent keys
    // are 0. Unknown keys, non-numeric values or a broken simplex throw
    // PriorError.
    static auto FromJson(std::string_view text) -> OperatorPrior;
    static auto Load(std::filesystem::path const& path) -> OperatorPrior;
    [[nodiscard]] auto ToJson() const -> std::string;

    [[nodiscard]] auto Probability(OperatorKind op) const -> double { return probs_[LibraryIndex(op)]; }
    [[nodiscard]] auto Probabilities() const noexcept -> std::array<double, kLibrarySize> const& { return probs_; }

    auto Sample(Rng& rng) const -> OperatorKind;

private:
    std::array<double, kLibrarySize> probs_;
};

} // namespace faigp
