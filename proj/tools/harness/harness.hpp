#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "faigp/config.hpp"
#include "faigp/engine.hpp"
#include "faigp/fitter.hpp"
#include "faigp/metrics.hpp"

namespace faigp::harness {

// Bad user input (CSV, prior, benchmark name, flag values). Maps to exit 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    EngineConfig Engine {};
    LossKind Loss { LossKind::Chi2 };
    RegularizerConfig Regularizer {};
    FitConfig Fit {};
    std::optional<std::string> PriorPath;
    std::optional<std::string> Benchmark;
    std::optional<std::string> DataPath;
    double NoiseLambda { 0.0 };
    std::size_t Repetitions { 1 };
    std::optional<std::string> OutPath;

    // Throws InputError.
    void Validate() const;
};

struct RunRecord {
    std::uint64_t Seed { 0 };
    RunReport Report;
    // R² of the best program against noise-free benchmark targets.
    std::optional<double> R2Clean;
    std::optional<bool> Exact;
};

struct Summary {
    double Mean { 0.0 };
    double Sd { 0.0 }; // sample standard deviation, 0 for a single value
};

auto Summarize(std::vector<double> const& values) -> Summary;

struct Aggregate {
    Summary R2;
    Summary Length;
    Summary WallTime;
    double BestR2 { 0.0 };
};

struct RunResult {
    std::vector<RunRecord> Runs;
    Aggregate Totals;
};

// Runs `Repetitions` searches with seeds Seed, Seed + 1, ...; the dataset
// (and its noise) is generated once from the base seed.
auto Run(RunConfig const& cfg) -> RunResult;

enum class SweepAxis { Population, Generations, LengthLimit };

auto AxisName(SweepAxis axis) -> std::string;
auto AxisFromName(std::string const& name) -> std::optional<SweepAxis>;
auto WithAxisValue(RunConfig cfg, SweepAxis axis, std::size_t value) -> RunConfig;

struct SweepPoint {
    std::size_t Value { 0 };
    RunResult Result;
};

auto Sweep(RunConfig const& base, SweepAxis axis, std::vector<std::size_t> const& values) -> std::vector<SweepPoint>;

auto ToJson(RunConfig const& cfg) -> nlohmann::ordered_json;
auto ToJson(RunRecord const& record) -> nlohmann::ordered_json;
auto ToJson(Aggregate const& totals) -> nlohmann::ordered_json;
auto RunReportJson(RunConfig const& cfg, RunResult const& result) -> nlohmann::ordered_json;
auto SweepReportJson(RunConfig const& cfg, SweepAxis axis, std::vector<SweepPoint> const& points) -> nlohmann::ordered_json;

// Inverse of ToJson(RunRecord); throws InputError on a malformed record.
auto RecordFromJson(nlohmann::json const& j) -> RunRecord;

void PrintRunTable(std::ostream& out, RunResult const& result);
void PrintSweepTable(std::ostream& out, SweepAxis axis, std::vector<SweepPoint> const& points);

} // namespace faigp::harness
