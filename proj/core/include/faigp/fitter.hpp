#pragma once

#include <cstddef>
#include <vector>

#include "faigp/expr.hpp"
#include "faigp/random.hpp"

namespace faigp {

struct FitConfig {
    double PerturbProb { 0.15 };
    double FitProb { 0.15 };
    // Residual evaluations allowed per fit; 0 switches least-squares fitting off.
    std::size_t MaxCalls { 3 };
    double PerturbLo { -1.0 };
    double PerturbHi { 1.0 };
};

// Pointers to every free node coefficient of `p`, depth first in storage
// order. Factors of a product are skipped.
auto CoefficientSlots(Program& p) -> std::vector<double*>;

// Adds a draw from [PerturbLo, PerturbHi] to each coefficient independently
// selected with PerturbProb, then re-canonicalizes.
auto PerturbCoefficients(Program p, FitConfig const& cfg, Rng& rng, ExponentRange range = {}) -> Program;

struct FitResult {
    Program Fitted;
    double InitialSse { 0.0 };
    double FinalSse { 0.0 };
    std::size_t Calls { 0 };    // residual evaluations at trial points
    std::size_t Selected { 0 }; // coefficients that took part
    bool Degenerate { false };  // residuals were non-finite at the start
};

// Levenberg-Marquardt on the coefficients selected with FitProb, with central
// finite-difference Jacobians. Never returns a program with a larger squared
// residual sum than `p`; structure is untouched.
auto LmFit(Program const& p, DataView data, std::span<double const> y, FitConfig const& cfg, Rng& rng) -> FitResult;

// Same, fitting an explicit set of coefficient positions (indices into
// CoefficientSlots order).
auto LmFitSelected(Program const& p, DataView data, std::span<double const> y, std::vector<std::size_t> const& selected,
    std::size_t maxCalls) -> FitResult;

} // namespace faigp
