#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "faigp/benchmarks.hpp"
#include "harness/harness.hpp"

namespace {
using faigp::harness::InputError;
using faigp::harness::RunConfig;

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

void AddRunOptions(CLI::App& app, RunConfig& cfg, std::string& loss, std::string& lengthMode, std::size_t& lengthLimit)
{
    auto& e = cfg.Engine;
    auto* benchmark = app.add_option("--benchmark", cfg.Benchmark, "built-in benchmark name (see `faigp benchmarks`)");
    auto* data = app.add_option("--data", cfg.DataPath, "CSV file with header x1,...,xk,y");
    benchmark->excludes(data);
    app.add_option("--loss", loss, "loss function")
        ->check(CLI::IsMember({ "mae", "mse", "rmse", "pearson", "spearman", "chi2" }))
        ->capture_default_str();
    app.add_option("--pop", e.PopulationSize, "population size")->capture_default_str();
    app.add_option("--gens", e.Generations, "generation cap")->capture_default_str();
    app.add_option("--loss-target", e.LossTarget, "stop once the best loss reaches this value")->capture_default_str();
    app.add_option("--exp-min", e.Exponents.Min, "smallest exponent")->capture_default_str();
    app.add_option("--exp-max", e.Exponents.Max, "largest exponent")->capture_default_str();
    app.add_option("--diversity-weight", cfg.Regularizer.DiversityWeight, "weight of the diversity term")->capture_default_str();
    app.add_option("--length-weight", cfg.Regularizer.LengthWeight, "weight of the length term")->capture_default_str();
    app.add_option("--length-mode", lengthMode, "length measure")
        ->check(CLI::IsMember({ "flat", "weighted" }))
        ->capture_default_str();
    app.add_option("--length-limit", lengthLimit, "hard length limit (0 = none)");
    app.add_option("--fit-max-calls", cfg.Fit.MaxCalls, "LM evaluation budget per offspring, 0 disables fitting")
        ->check(CLI::IsMember({ 0, 3, 5 }))
        ->capture_default_str();
    app.add_option("--prior", cfg.PriorPath, "operator prior JSON file (uniform when absent)");
    app.add_option("--noise-lambda", cfg.NoiseLambda, "relative target noise level")->capture_default_str();
    app.add_option("--reps", cfg.Repetitions, "independent runs; run k uses seed + k")->capture_default_str();
    app.add_option("--seed", e.Seed, "base seed")->envname("FAIGP_SEED")->capture_default_str();
    app.add_option("--out", cfg.OutPath, "JSON report path");
    app.add_option("--workers", e.Workers, "worker threads per run")->capture_default_str();
}

void Finalize(RunConfig& cfg, std::string const& loss, std::string const& lengthMode, std::size_t lengthLimit)
{
    cfg.Loss = *faigp::LossFromName(loss);
    cfg.Regularizer.Mode = lengthMode == "flat" ? faigp::LengthMode::Flat : faigp::LengthMode::ExponentWeighted;
    if (lengthLimit > 0) {
        cfg.Regularizer.LengthLimit = lengthLimit;
    }
}

void WriteReport(std::optional<std::string> const& path, nlohmann::ordered_json const& report)
{
    if (!path) {
        return;
    }
    std::ofstream out(*path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write report to '{}'", *path));
    }
    out << report.dump(2) << '\n';
}
} // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app { "faigp: symbolic regression with set-based programs" };
    app.fallthrough();

    RunConfig cfg;
    std::string loss { "chi2" };
    std::string lengthMode { "weighted" };
    std::size_t lengthLimit { 0 };
    AddRunOptions(app, cfg, loss, lengthMode, lengthLimit);

    auto* run = app.add_subcommand("run", "run repeated searches (default)");
    auto* sweep = app.add_subcommand("sweep", "repeat a run over values of one axis");
    std::string axisName;
    std::vector<std::size_t> values;
    sweep->add_option("--axis", axisName, "population, generations or length_limit")->required();
    sweep->add_option("--values", values, "comma separated positive integers")->required()->delimiter(',');
    auto* list = app.add_subcommand("benchmarks", "list built-in benchmarks");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (list->parsed()) {
            for (auto const& spec : faigp::BenchmarkSuite()) {
                fmt::print("{:<14} {:<40} {}\n", spec.Name, spec.Formula, spec.Domain.ToString());
            }
            return EXIT_SUCCESS;
        }
        Finalize(cfg, loss, lengthMode, lengthLimit);
        if (sweep->parsed()) {
            auto const axis = faigp::harness::AxisFromName(axisName);
            if (!axis) {
                throw InputError(fmt::format("unknown sweep axis '{}'; valid axes: population, generations, length_limit", axisName));
            }
            auto const points = faigp::harness::Sweep(cfg, *axis, values);
            faigp::harness::PrintSweepTable(std::cout, *axis, points);
            WriteReport(cfg.OutPath, faigp::harness::SweepReportJson(cfg, *axis, points));
            return EXIT_SUCCESS;
        }
        (void)run;
        auto const result = faigp::harness::Run(cfg);
        faigp::harness::PrintRunTable(std::cout, result);
        WriteReport(cfg.OutPath, faigp::harness::RunReportJson(cfg, result));
        return EXIT_SUCCESS;
    } catch (InputError const& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitInput;
    } catch (std::exception const& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitFailure;
    }
}
