#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faigp/dataset.hpp"
#include "faigp/expr.hpp"

namespace faigp {

enum class SamplerKind { Uniform, Even };

// U(a, b, n): n uniform draws; E(a, b, n): the n + 1 end points of n equal
// segments of [a, b]. Two-variable benchmarks take the full grid of two such
// samples.
struct Sampler {
    SamplerKind Kind { SamplerKind::Uniform };
    double Lo { -1.0 };
    double Hi { 1.0 };
    std::size_t Count { 20 };

    [[nodiscard]] auto Points() const noexcept -> std::size_t { return Kind == SamplerKind::Even ? Count + 1 : Count; }
    [[nodiscard]] auto ToString() const -> std::string;
};

struct BenchmarkSpec {
    std::string Name;
    std::string Formula;                 // human-readable target
    std::function<double(std::span<double const>)> Target;
    // Infix form of the target when it lies inside the operator library.
    std::optional<std::string> LibraryForm;
    Sampler Domain;
    std::size_t Arity { 1 };

    // LibraryForm parsed with a wide exponent range; nullopt for closures.
    [[nodiscard]] auto GroundTruth() const -> std::optional<Program>;
};

// Exponent interval wide enough to hold every ground truth exactly.
inline constexpr ExponentRange kGroundTruthRange { -9, 9 };

auto BenchmarkSuite() -> std::span<BenchmarkSpec const>;
// Case-insensitive lookup.
auto FindBenchmark(std::string_view name) -> BenchmarkSpec const*;
auto BenchmarkNames() -> std::vector<std::string>;

auto SampleAxis(Sampler const& s, std::uint64_t seed) -> std::vector<double>;
auto GenerateDataset(BenchmarkSpec const& spec, std::uint64_t seed) -> Dataset;
// Same generator with every Count multiplied by `factor`.
auto GenerateDataset(BenchmarkSpec const& spec, std::uint64_t seed, std::size_t factor) -> Dataset;

// y_i + ε_i with ε_i ~ N(0, λ·σ²), σ² the sample variance of `data`'s y.
auto AddNoise(Dataset const& data, double lambda, std::uint64_t seed) -> Dataset;

struct RecoveryScore {
    double R2 { 0.0 };
    double Spearman { 0.0 };
    bool Exact { false };
};

auto ScoreRecovery(Program const& candidate, BenchmarkSpec const& spec, std::uint64_t seed) -> RecoveryScore;

} // namespace faigp
