#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "faigp/expr.hpp"

namespace faigp {

enum class LossKind {
    Mae,
    Mse,
    Rmse,
    Pearson,
    Spearman,
    Chi2,
};

auto Name(LossKind kind) noexcept -> std::string_view;
auto LossFromName(std::string_view name) noexcept -> std::optional<LossKind>;

// Non-finite predictions are replaced by this value before any loss is computed.
inline constexpr double kNonFiniteSentinel = 1e12;
inline constexpr double kChi2Epsilon = 1e-8;

// mae/mse/rmse as usual; pearson/spearman as 1 - |rho| (1 when either side
// has zero variance); chi2 = Σ (y - ŷ)² / (|ŷ| + ε).
// Throws std::invalid_argument on mismatched lengths or fewer than 2 points.
auto ComputeLoss(LossKind kind, std::span<double const> y, std::span<double const> yhat) -> double;

auto PearsonCorrelation(std::span<double const> a, std::span<double const> b) -> double;
// Pearson correlation of average ranks.
auto SpearmanCorrelation(std::span<double const> a, std::span<double const> b) -> double;

// 1 - SS_res / SS_tot. Throws std::domain_error when y is constant.
auto RSquared(std::span<double const> y, std::span<double const> yhat) -> double;

struct RegularizerConfig {
    double DiversityWeight { 0.1 };
    double LengthWeight { 0.01 };
    faigp::LengthMode Mode { faigp::LengthMode::ExponentWeighted };
    std::optional<std::size_t> LengthLimit; // threshold λ on the exponent-weighted length
    double Penalty { 1e6 };                 // M
};

// loss + w_len * len(p) - w_div * D_j + M * [len_weighted(p) > λ]; lower is better.
auto TotalFitness(Program const& p, double loss, double diversity, RegularizerConfig const& cfg) -> double;
// Same, from precomputed lengths.
auto TotalFitness(double loss, double diversity, std::size_t length, std::size_t weightedLength,
    RegularizerConfig const& cfg) -> double;

} // namespace faigp
