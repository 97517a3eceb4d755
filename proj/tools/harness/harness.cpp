#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "faigp/benchmarks.hpp"
#include "faigp/dataset.hpp"
#include "faigp/prior.hpp"
#include "faigp/syntax.hpp"

namespace faigp::harness {

namespace {
    constexpr ExponentRange kReadBackRange { -1000, 1000 };

    auto Join(std::vector<std::string> const& items) -> std::string
    {
        std::string out;
        for (auto const& s : items) {
            if (!out.empty()) {
                out += ", ";
            }
            out += s;
        }
        return out;
    }

    auto LoadPrior(RunConfig const& cfg) -> OperatorPrior
    {
        if (!cfg.PriorPath) {
            return OperatorPrior::Uniform();
        }
        try {
            return OperatorPrior::Load(*cfg.PriorPath);
        } catch (PriorError const& e) {
            throw InputError(fmt::format("invalid prior '{}': {}", *cfg.PriorPath, e.what()));
        }
    }

    struct Problem {
        Dataset Training;
        std::optional<Dataset> Clean;
        BenchmarkSpec const* Spec { nullptr };
    };

    auto LoadProblem(RunConfig const& cfg) -> Problem
    {
        auto const dataSeed = cfg.Engine.Seed;
        Problem problem;
        if (cfg.Benchmark) {
            problem.Spec = FindBenchmark(*cfg.Benchmark);
            if (problem.Spec == nullptr) {
                throw InputError(fmt::format("unknown benchmark '{}'; valid names: {}", *cfg.Benchmark, Join(BenchmarkNames())));
            }
            problem.Training = GenerateDataset(*problem.Spec, dataSeed);
            problem.Clean = problem.Training;
        } else {
            try {
                problem.Training = ReadCsv(std::filesystem::path(*cfg.DataPath));
            } catch (DatasetError const& e) {
                throw InputError(fmt::format("bad data file '{}': {}", *cfg.DataPath, e.what()));
            }
        }
        if (cfg.NoiseLambda > 0.0) {
            problem.Training = AddNoise(problem.Training, cfg.NoiseLambda, dataSeed);
        }
        return problem;
    }

    auto RSquaredOrNan(std::vector<double> const& y, std::vector<double> const& yhat) -> double
    {
        try {
            return RSquared(y, yhat);
        } catch (std::domain_error const&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }

    auto AggregateOf(std::vector<RunRecord> const& runs) -> Aggregate
    {
        std::vector<double> r2;
        std::vector<double> length;
        std::vector<double> wall;
        for (auto const& r : runs) {
            r2.push_back(r.R2Clean.value_or(r.Report.R2));
            length.push_back(static_cast<double>(r.Report.Length));
            wall.push_back(r.Report.WallTimeSeconds);
        }
        Aggregate a;
        a.R2 = Summarize(r2);
        a.Length = Summarize(length);
        a.WallTime = Summarize(wall);
        a.BestR2 = r2.empty() ? 0.0 : *std::max_element(r2.begin(), r2.end(), [](double x, double y) {
            return (std::isnan(x) ? -HUGE_VAL : x) < (std::isnan(y) ? -HUGE_VAL : y);
        });
        return a;
    }

    auto JsonNumber(double v) -> nlohmann::ordered_json
    {
        return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    }

    auto NumberOr(nlohmann::json const& j, char const* key, double fallback) -> double
    {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
            return fallback;
        }
        return it->get<double>();
    }
} // namespace

void RunConfig::Validate() const
{
    if (Benchmark.has_value() == DataPath.has_value()) {
        throw InputError("exactly one of --benchmark or --data is required");
    }
    if (Repetitions < 1) {
        throw InputError("--reps must be at least 1");
    }
    if (!(NoiseLambda >= 0.0)) {
        throw InputError("--noise-lambda must be non-negative");
    }
    if (Regularizer.LengthLimit && *Regularizer.LengthLimit < 4) {
        throw InputError("--length-limit must be at least 4");
    }
    if (Regularizer.DiversityWeight < 0.0 || Regularizer.LengthWeight < 0.0) {
        throw InputError("regularizer weights must be non-negative");
    }
    try {
        Engine.Validate();
    } catch (std::invalid_argument const& e) {
        throw InputError(e.what());
    }
}

auto Summarize(std::vector<double> const& values) -> Summary
{
    std::vector<double> v;
    std::copy_if(values.begin(), values.end(), std::back_inserter(v), [](double x) { return std::isfinite(x); });
    Summary s;
    if (v.empty()) {
        s.Mean = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.Mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (auto x : v) {
            ss += (x - s.Mean) * (x - s.Mean);
        }
        s.Sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

auto Run(RunConfig const& cfg) -> RunResult
{
    cfg.Validate();
    auto const prior = LoadPrior(cfg);
    auto const problem = LoadProblem(cfg);

    RunResult result;
    for (std::size_t k = 0; k < cfg.Repetitions; ++k) {
        auto engine = cfg.Engine;
        engine.Seed = cfg.Engine.Seed + k;
        RunRecord record;
        record.Seed = engine.Seed;
        record.Report = Evolve(problem.Training, prior, engine, cfg.Loss, cfg.Regularizer, cfg.Fit);
        if (problem.Clean) {
            auto const yhat = Evaluate(record.Report.BestProgram, problem.Clean->View());
            record.R2Clean = RSquaredOrNan(problem.Clean->Y(), yhat);
        }
        if (problem.Spec != nullptr) {
            record.Exact = ScoreRecovery(record.Report.BestProgram, *problem.Spec, cfg.Engine.Seed).Exact;
        }
        result.Runs.push_back(std::move(record));
    }
    result.Totals = AggregateOf(result.Runs);
    return result;
}

auto AxisName(SweepAxis axis) -> std::string
{
    switch (axis) {
    case SweepAxis::Population:
        return "population";
    case SweepAxis::Generations:
        return "generations";
    case SweepAxis::LengthLimit:
        return "length_limit";
    }
    return "";
}

auto AxisFromName(std::string const& name) -> std::optional<SweepAxis>
{
    for (auto axis : { SweepAxis::Population, SweepAxis::Generations, SweepAxis::LengthLimit }) {
        if (AxisName(axis) == name) {
            return axis;
        }
    }
    return std::nullopt;
}

auto WithAxisValue(RunConfig cfg, SweepAxis axis, std::size_t value) -> RunConfig
{
    if (value == 0) {
        throw InputError("sweep values must be positive integers");
    }
    switch (axis) {
    case SweepAxis::Population:
        cfg.Engine.PopulationSize = value;
        break;
    case SweepAxis::Generations:
        cfg.Engine.Generations = value;
        break;
    case SweepAxis::LengthLimit:
        cfg.Regularizer.LengthLimit = value;
        break;
    }
    return cfg;
}

auto Sweep(RunConfig const& base, SweepAxis axis, std::vector<std::size_t> const& values) -> std::vector<SweepPoint>
{
    if (values.empty()) {
        throw InputError("a sweep needs at least one value");
    }
    std::vector<RunConfig> configs;
    for (auto v : values) {
        configs.push_back(WithAxisValue(base, axis, v));
        configs.back().Validate();
    }
    std::vector<SweepPoint> points;
    for (std::size_t i = 0; i < values.size(); ++i) {
        points.push_back({ values[i], Run(configs[i]) });
    }
    return points;
}

auto ToJson(RunConfig const& cfg) -> nlohmann::ordered_json
{
    auto const& e = cfg.Engine;
    nlohmann::ordered_json j;
    if (cfg.Benchmark) {
        j["benchmark"] = *cfg.Benchmark;
    }
    if (cfg.DataPath) {
        j["data"] = *cfg.DataPath;
    }
    j["loss"] = std::string(Name(cfg.Loss));
    j["population"] = e.PopulationSize;
    j["parents"] = e.ParentCount();
    j["generations"] = e.Generations;
    j["loss_target"] = e.LossTarget;
    j["exp_min"] = e.Exponents.Min;
    j["exp_max"] = e.Exponents.Max;
    j["tournament_size"] = e.TournamentSize;
    j["elitism"] = e.Elitism;
    j["max_depth"] = e.MaxDepth;
    j["diversity_weight"] = cfg.Regularizer.DiversityWeight;
    j["length_weight"] = cfg.Regularizer.LengthWeight;
    j["length_mode"] = cfg.Regularizer.Mode == LengthMode::Flat ? "flat" : "weighted";
    j["length_limit"] = cfg.Regularizer.LengthLimit ? nlohmann::ordered_json(*cfg.Regularizer.LengthLimit) : nlohmann::ordered_json(nullptr);
    j["fit_max_calls"] = cfg.Fit.MaxCalls;
    j["fit_prob"] = cfg.Fit.FitProb;
    j["perturb_prob"] = cfg.Fit.PerturbProb;
    j["prior"] = cfg.PriorPath ? nlohmann::ordered_json(*cfg.PriorPath) : nlohmann::ordered_json(nullptr);
    j["noise_lambda"] = cfg.NoiseLambda;
    j["reps"] = cfg.Repetitions;
    j["seed"] = e.Seed;
    j["workers"] = e.Workers;
    return j;
}

auto ToJson(RunRecord const& record) -> nlohmann::ordered_json
{
    auto const& r = record.Report;
    nlohmann::ordered_json j;
    j["seed"] = record.Seed;
    j["best_expression"] = r.BestSerialized;
    j["best_loss"] = JsonNumber(r.BestLoss);
    j["r2"] = JsonNumber(r.R2);
    j["r2_clean"] = record.R2Clean ? JsonNumber(*record.R2Clean) : nlohmann::ordered_json(nullptr);
    j["spearman"] = JsonNumber(r.Spearman);
    j["exact"] = record.Exact ? nlohmann::ordered_json(*record.Exact) : nlohmann::ordered_json(nullptr);
    j["length"] = r.Length;
    j["flat_length"] = r.FlatLength;
    j["generations_used"] = r.GenerationsUsed;
    j["wall_time_s"] = r.WallTimeSeconds;
    auto trajectory = nlohmann::ordered_json::array();
    for (auto v : r.LossTrajectory) {
        trajectory.push_back(JsonNumber(v));
    }
    j["loss_trajectory"] = std::move(trajectory);
    auto fitness = nlohmann::ordered_json::array();
    for (auto v : r.FitnessTrajectory) {
        fitness.push_back(JsonNumber(v));
    }
    j["fitness_trajectory"] = std::move(fitness);
    return j;
}

auto ToJson(Aggregate const& totals) -> nlohmann::ordered_json
{
    auto summary = [](Summary const& s) {
        nlohmann::ordered_json j;
        j["mean"] = JsonNumber(s.Mean);
        j["sd"] = JsonNumber(s.Sd);
        return j;
    };
    nlohmann::ordered_json j;
    j["r2"] = summary(totals.R2);
    j["length"] = summary(totals.Length);
    j["wall_time_s"] = summary(totals.WallTime);
    j["best_r2"] = JsonNumber(totals.BestR2);
    return j;
}

auto RunReportJson(RunConfig const& cfg, RunResult const& result) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["schema"] = "faigp-report/1";
    j["config"] = ToJson(cfg);
    auto runs = nlohmann::ordered_json::array();
    for (auto const& r : result.Runs) {
        runs.push_back(ToJson(r));
    }
    j["runs"] = std::move(runs);
    j["aggregate"] = ToJson(result.Totals);
    return j;
}

auto SweepReportJson(RunConfig const& cfg, SweepAxis axis, std::vector<SweepPoint> const& points) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["schema"] = "faigp-sweep/1";
    j["config"] = ToJson(cfg);
    j["axis"] = AxisName(axis);
    auto arr = nlohmann::ordered_json::array();
    for (auto const& p : points) {
        nlohmann::ordered_json point;
        point["value"] = p.Value;
        point["aggregate"] = ToJson(p.Result.Totals);
        auto runs = nlohmann::ordered_json::array();
        for (auto const& r : p.Result.Runs) {
            runs.push_back(ToJson(r));
        }
        point["runs"] = std::move(runs);
        arr.push_back(std::move(point));
    }
    j["points"] = std::move(arr);
    return j;
}

auto RecordFromJson(nlohmann::json const& j) -> RunRecord
{
    try {
        RunRecord record;
        record.Seed = j.at("seed").get<std::uint64_t>();
        auto& r = record.Report;
        r.Seed = record.Seed;
        r.BestSerialized = j.at("best_expression").get<std::string>();
        r.BestProgram = Parse(r.BestSerialized, kReadBackRange);
        auto const nan = std::numeric_limits<double>::quiet_NaN();
        r.BestLoss = NumberOr(j, "best_loss", nan);
        r.R2 = NumberOr(j, "r2", nan);
        r.Spearman = NumberOr(j, "spearman", nan);
        if (!j.at("r2_clean").is_null()) {
            record.R2Clean = j.at("r2_clean").get<double>();
        }
        if (!j.at("exact").is_null()) {
            record.Exact = j.at("exact").get<bool>();
        }
        r.Length = j.at("length").get<std::size_t>();
        r.FlatLength = j.at("flat_length").get<std::size_t>();
        r.GenerationsUsed = j.at("generations_used").get<std::size_t>();
        r.WallTimeSeconds = j.at("wall_time_s").get<double>();
        for (auto const& v : j.at("loss_trajectory")) {
            r.LossTrajectory.push_back(v.is_null() ? nan : v.get<double>());
        }
        for (auto const& v : j.at("fitness_trajectory")) {
            r.FitnessTrajectory.push_back(v.is_null() ? nan : v.get<double>());
        }
        return record;
    } catch (nlohmann::json::exception const& e) {
        throw InputError(fmt::format("malformed run record: {}", e.what()));
    } catch (ParseError const& e) {
        throw InputError(fmt::format("malformed expression in run record: {}", e.what()));
    }
}

void PrintRunTable(std::ostream& out, RunResult const& result)
{
    fmt::print(out, "{:>6}  {:>12}  {:>9}  {:>9}  {:>6}  {:>5}  {:>9}  {}\n", "seed", "loss", "R2", "spearman", "length", "gens",
        "time[s]", "expression");
    for (auto const& rec : result.Runs) {
        auto const& r = rec.Report;
        fmt::print(out, "{:>6}  {:>12.6g}  {:>9.5f}  {:>9.5f}  {:>6}  {:>5}  {:>9.3f}  {}\n", rec.Seed, r.BestLoss,
            rec.R2Clean.value_or(r.R2), r.Spearman, r.Length, r.GenerationsUsed, r.WallTimeSeconds, r.BestSerialized);
    }
    auto const& t = result.Totals;
    fmt::print(out, "R2 mean {:.5f} (sd {:.5f}), best {:.5f}; length mean {:.2f} (sd {:.2f}); time mean {:.3f}s (sd {:.3f})\n",
        t.R2.Mean, t.R2.Sd, t.BestR2, t.Length.Mean, t.Length.Sd, t.WallTime.Mean, t.WallTime.Sd);
}

void PrintSweepTable(std::ostream& out, SweepAxis axis, std::vector<SweepPoint> const& points)
{
    fmt::print(out, "{:>12}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}\n", AxisName(axis), "R2 mean", "R2 sd", "best R2",
        "len mean", "len sd", "time mean", "time sd");
    for (auto const& p : points) {
        auto const& t = p.Result.Totals;
        fmt::print(out, "{:>12}  {:>9.5f}  {:>9.5f}  {:>9.5f}  {:>9.2f}  {:>9.2f}  {:>9.3f}  {:>9.3f}\n", p.Value, t.R2.Mean, t.R2.Sd,
            t.BestR2, t.Length.Mean, t.Length.Sd, t.WallTime.Mean, t.WallTime.Sd);
    }
}

} // namespace faigp::harness
