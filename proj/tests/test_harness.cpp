#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "faigp/benchmarks.hpp"
#include "faigp/syntax.hpp"
#include "harness/harness.hpp"

using namespace faigp;
using namespace faigp::harness;

namespace {
namespace fs = std::filesystem;

auto Scratch() -> fs::path
{
    fs::path const dir(FAIGP_TEST_SCRATCH);
    fs::create_directories(dir);
    return dir;
}

struct Outcome {
    int Status { -1 };
    std::string Stdout;
    std::string Stderr;
};

auto Slurp(fs::path const& path) -> std::string
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto Cli(std::string const& args, std::string const& env = {}) -> Outcome
{
    auto const out = Scratch() / "cli.out";
    auto const err = Scratch() / "cli.err";
    auto const command = env + " " + std::string(FAIGP_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    auto const raw = std::system(command.c_str());
    Outcome o;
    o.Status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    o.Stdout = Slurp(out);
    o.Stderr = Slurp(err);
    return o;
}

auto Quick() -> std::string { return " --pop 40 --gens 5 "; }

auto QuickConfig(std::string const& benchmark) -> RunConfig
{
    RunConfig cfg;
    cfg.Benchmark = benchmark;
    cfg.Engine.PopulationSize = 40;
    cfg.Engine.Generations = 5;
    return cfg;
}
} // namespace

TEST_CASE("malformed csv row five exits with status 2")
{
    auto const path = Scratch() / "bad.csv";
    {
        std::ofstream out(path);
        out << "x1,y\n0.1,1\n0.2,2\n0.3,3\n0.4,4\n0.5,oops\n0.6,6\n";
    }
    auto const o = Cli("--data " + path.string() + Quick());
    CHECK(o.Status == 2);
    CHECK(o.Stderr.find("row 5") != std::string::npos);
}

TEST_CASE("unknown benchmark exits with status 2 and lists valid names")
{
    auto const o = Cli("--benchmark Nguyen-99" + Quick());
    CHECK(o.Status == 2);
    CHECK(o.Stderr.find("Nguyen-1") != std::string::npos);
    CHECK(o.Stderr.find("Keijzer-2*") != std::string::npos);
}

TEST_CASE("invalid prior exits with status 2")
{
    auto const path = Scratch() / "bad_prior.json";
    {
        std::ofstream out(path);
        out << R"({"sin": 0.9, "cos": 0.9})";
    }
    auto const o = Cli("--benchmark Nguyen-1 --prior " + path.string() + Quick());
    CHECK(o.Status == 2);
    CHECK(o.Stderr.find("prior") != std::string::npos);
}

TEST_CASE("flag validation exits with status 2")
{
    CHECK(Cli("--benchmark Nguyen-1 --fit-max-calls 4" + Quick()).Status == 2);
    CHECK(Cli("--benchmark Nguyen-1 --loss huber" + Quick()).Status == 2);
    CHECK(Cli(Quick()).Status == 2);
    CHECK(Cli("--benchmark Nguyen-1 --data x.csv" + Quick()).Status == 2);
    CHECK(Cli("--benchmark Nguyen-1 --reps 0" + Quick()).Status == 2);
    CHECK(Cli("--benchmark Nguyen-1 --length-limit 2" + Quick()).Status == 2);
    CHECK(Cli("--benchmark Nguyen-1 --exp-min 3 --exp-max 1" + Quick()).Status == 2);
}

TEST_CASE("csv data source runs")
{
    auto const path = Scratch() / "good.csv";
    {
        std::ofstream out(path);
        out << "x1,y\n";
        for (int i = 0; i < 20; ++i) {
            auto const x = -1.0 + 0.1 * i;
            out << x << "," << 2.0 * x * x << "\n";
        }
    }
    auto const report = Scratch() / "good.json";
    auto const o = Cli("--data " + path.string() + Quick() + "--out " + report.string());
    REQUIRE(o.Status == 0);
    auto const j = nlohmann::json::parse(Slurp(report));
    CHECK(j.at("config").at("data") == path.string());
    CHECK(j.at("runs").at(0).at("r2_clean").is_null());
}

TEST_CASE("reports carry consecutive seeds and re-parse")
{
    auto const report = Scratch() / "run.json";
    auto const o = Cli("--benchmark Keijzer-2* --reps 3 --seed 40 --out " + report.string() + Quick());
    REQUIRE(o.Status == 0);
    CHECK(o.Stdout.find("R2 mean") != std::string::npos);
    auto const j = nlohmann::json::parse(Slurp(report));
    CHECK(j.at("schema") == "faigp-report/1");
    REQUIRE(j.at("runs").size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        auto const record = RecordFromJson(j.at("runs").at(k));
        CHECK(record.Seed == 40 + k);
        CHECK(record.Report.LossTrajectory.size() == record.Report.GenerationsUsed);
        CHECK(Serialize(record.Report.BestProgram) == record.Report.BestSerialized);
        CHECK(record.R2Clean.has_value());
        CHECK(record.Exact.has_value());
    }
    for (auto const* key : { "r2", "length", "wall_time_s" }) {
        CHECK(j.at("aggregate").at(key).contains("mean"));
        CHECK(j.at("aggregate").at(key).contains("sd"));
    }

    // Replaying the second record from its seed alone reproduces it.
    auto const second = RecordFromJson(j.at("runs").at(1));
    auto cfg = QuickConfig("Keijzer-2*");
    cfg.Engine.Seed = second.Seed;
    // The dataset is drawn from the base seed of the original invocation.
    auto const replay = Evolve(GenerateDataset(*FindBenchmark("Keijzer-2*"), 40), OperatorPrior {}, cfg.Engine, cfg.Loss,
        cfg.Regularizer, cfg.Fit);
    CHECK(replay.BestSerialized == second.Report.BestSerialized);
    CHECK(replay.LossTrajectory == second.Report.LossTrajectory);
}

TEST_CASE("seed falls back to the environment")
{
    auto const report = Scratch() / "env.json";
    auto const o = Cli("--benchmark Nguyen-1 --out " + report.string() + Quick(), "FAIGP_SEED=1234");
    REQUIRE(o.Status == 0);
    auto const j = nlohmann::json::parse(Slurp(report));
    CHECK(j.at("runs").at(0).at("seed") == 1234);
}

TEST_CASE("library run uses seeds s..s+k-1")
{
    auto cfg = QuickConfig("Nguyen-1");
    cfg.Engine.Seed = 9;
    cfg.Repetitions = 4;
    auto const result = Run(cfg);
    REQUIRE(result.Runs.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(result.Runs[k].Seed == 9 + k);
        CHECK(result.Runs[k].Report.Seed == 9 + k);
    }
    auto const roundTrip = RecordFromJson(nlohmann::json::parse(ToJson(result.Runs[2]).dump()));
    CHECK(roundTrip.Report.BestSerialized == result.Runs[2].Report.BestSerialized);
    CHECK(roundTrip.Report.LossTrajectory == result.Runs[2].Report.LossTrajectory);
}

TEST_CASE("a one-point sweep is a run")
{
    auto cfg = QuickConfig("Nguyen-1");
    cfg.Engine.Seed = 3;
    auto const single = Run(cfg);
    auto const sweep = Sweep(cfg, SweepAxis::Population, { 40 });
    REQUIRE(sweep.size() == 1);
    CHECK(sweep[0].Result.Runs[0].Report.BestSerialized == single.Runs[0].Report.BestSerialized);
    CHECK(sweep[0].Result.Runs[0].Report.LossTrajectory == single.Runs[0].Report.LossTrajectory);
}

TEST_CASE("sweep points report spread per value")
{
    auto cfg = QuickConfig("Keijzer-2*");
    cfg.Repetitions = 4;
    auto const points = Sweep(cfg, SweepAxis::Population, { 20, 40 });
    REQUIRE(points.size() == 2);
    for (auto const& p : points) {
        CHECK(p.Result.Runs.size() == 4);
        CHECK(std::isfinite(p.Result.Totals.R2.Sd));
        CHECK(p.Result.Totals.WallTime.Sd > 0.0);
    }
    auto const j = SweepReportJson(cfg, SweepAxis::Population, points);
    CHECK(j.at("schema") == "faigp-sweep/1");
    CHECK(j.at("points").size() == 2);
    CHECK(j.at("points").at(1).at("value") == 40);
    CHECK_THROWS_AS(Sweep(cfg, SweepAxis::Generations, { 0 }), InputError);
}

TEST_CASE("run time grows with the generation budget")
{
    auto cfg = QuickConfig("Keijzer-2*");
    cfg.Engine.PopulationSize = 60;
    cfg.Engine.LossTarget = 0.0;
    cfg.Repetitions = 2;
    auto const points = Sweep(cfg, SweepAxis::Generations, { 3, 15, 45 });
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].Result.Totals.WallTime.Mean > points[i - 1].Result.Totals.WallTime.Mean);
    }
}

TEST_CASE("cli sweep subcommand")
{
    auto const report = Scratch() / "sweep.json";
    auto const o = Cli("sweep --axis length_limit --values 20,40 --benchmark Nguyen-1 --out " + report.string() + Quick());
    REQUIRE(o.Status == 0);
    auto const j = nlohmann::json::parse(Slurp(report));
    CHECK(j.at("axis") == "length_limit");
    CHECK(Cli("sweep --axis colour --values 1 --benchmark Nguyen-1" + Quick()).Status == 2);
}

TEST_CASE("axis names")
{
    for (auto axis : { SweepAxis::Population, SweepAxis::Generations, SweepAxis::LengthLimit }) {
        CHECK(AxisFromName(AxisName(axis)) == axis);
    }
    CHECK_FALSE(AxisFromName("depth").has_value());
}

TEST_CASE("summaries")
{
    auto const s = Summarize({ 1.0, 2.0, 3.0, 4.0 });
    CHECK(s.Mean == doctest::Approx(2.5));
    CHECK(s.Sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(Summarize({ 7.0 }).Sd == 0.0);
}
