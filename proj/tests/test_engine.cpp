#include <doctest.h>

#include <cmath>
#include <vector>

#include "faigp/benchmarks.hpp"
#include "faigp/engine.hpp"
#include "faigp/syntax.hpp"

using namespace faigp;

namespace {
auto SmallConfig(std::uint64_t seed) -> EngineConfig
{
    EngineConfig cfg;
    cfg.PopulationSize = 60;
    cfg.Generations = 8;
    cfg.Seed = seed;
    return cfg;
}

auto Nguyen1() -> Dataset { return GenerateDataset(*FindBenchmark("Nguyen-1"), 3); }

void LibraryOperators(Program const& p, std::vector<OperatorKind>& out)
{
    for (auto const& n : p.Nodes) {
        if (IsLibrary(n.Op) && !n.IsConstantTerm()) {
            out.push_back(n.Op);
        }
        if (n.HasSubprogram()) {
            LibraryOperators(n.Subprogram(), out);
        }
    }
}
} // namespace

TEST_CASE("an exact target in the initial population ends the search at generation zero")
{
    auto const data = Nguyen1();
    auto cfg = SmallConfig(1);
    cfg.Generations = 50;
    cfg.InitialPrograms.push_back(Parse("x^3 + x^2 + x", { -3, 3 }));
    cfg.Exponents = { -3, 3 };
    auto const report = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    CHECK(report.GenerationsUsed == 1);
    CHECK(report.BestLoss <= cfg.LossTarget);
    CHECK(report.R2 == doctest::Approx(1.0));
    CHECK(report.LossTrajectory.size() == 1);
}

TEST_CASE("programs referencing missing variables are rejected before generation zero")
{
    auto const data = Nguyen1();
    auto cfg = SmallConfig(1);
    cfg.InitialPrograms.push_back(Parse("x1 + x2"));
    CHECK_THROWS_AS(Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {}),
        std::invalid_argument);
}

TEST_CASE("invalid configurations are rejected")
{
    auto const data = Nguyen1();
    auto cfg = SmallConfig(1);
    cfg.Generations = 0;
    CHECK_THROWS_AS(Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {}),
        std::invalid_argument);
    cfg = SmallConfig(1);
    cfg.Parents = 1000;
    CHECK_THROWS_AS(Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {}),
        std::invalid_argument);
}

TEST_CASE("run reports replay exactly from their seed")
{
    auto const data = GenerateDataset(*FindBenchmark("Keijzer-2*"), 5);
    auto const cfg = SmallConfig(17);
    auto const a = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    auto const b = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    CHECK(a.BestSerialized == b.BestSerialized);
    CHECK(a.LossTrajectory == b.LossTrajectory);
    CHECK(a.FitnessTrajectory == b.FitnessTrajectory);
    CHECK(a.GenerationsUsed == b.GenerationsUsed);
    CHECK(a.Seed == 17);

    auto other = cfg;
    other.Seed = 18;
    auto const c = Evolve(data, OperatorPrior {}, other, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    CHECK(c.LossTrajectory != a.LossTrajectory);
}

TEST_CASE("parallel evaluation matches the single-worker run")
{
    auto const data = GenerateDataset(*FindBenchmark("Keijzer-2*"), 5);
    auto cfg = SmallConfig(23);
    auto const serial = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    cfg.Workers = 3;
    std::vector<std::vector<double>> seen;
    auto const parallel = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {});
    CHECK(serial.BestSerialized == parallel.BestSerialized);
    CHECK(serial.LossTrajectory == parallel.LossTrajectory);
    CHECK(serial.FitnessTrajectory == parallel.FitnessTrajectory);
}

TEST_CASE("parallel for runs every task exactly once")
{
    std::vector<int> hits(1000, 0);
    ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (auto h : hits) {
        CHECK(h == 1);
    }
    CHECK_THROWS(ParallelFor(10, 3, [](std::size_t i) {
        if (i == 7) {
            throw std::runtime_error("boom");
        }
    }));
}

TEST_CASE("elitism keeps the best fitness from getting worse")
{
    auto const data = GenerateDataset(*FindBenchmark("Keijzer-2*"), 7);
    RegularizerConfig reg;
    reg.DiversityWeight = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto cfg = SmallConfig(seed);
        cfg.Generations = 20;
        cfg.LossTarget = 0.0;
        auto const report = Evolve(data, OperatorPrior {}, cfg, LossKind::Chi2, reg, FitConfig {});
        REQUIRE(report.FitnessTrajectory.size() == report.GenerationsUsed);
        for (std::size_t g = 1; g < report.FitnessTrajectory.size(); ++g) {
            CHECK(report.FitnessTrajectory[g] <= report.FitnessTrajectory[g - 1]);
        }
    }
}

TEST_CASE("report invariants")
{
    auto const data = Nguyen1();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto const cfg = SmallConfig(seed);
        auto const report = Evolve(data, OperatorPrior {}, cfg, LossKind::Mse, RegularizerConfig {}, FitConfig {});
        CHECK(report.GenerationsUsed <= cfg.Generations);
        CHECK(report.LossTrajectory.size() == report.GenerationsUsed);
        CHECK(report.R2 <= 1.0);
        CHECK(report.Spearman <= 1.0);
        CHECK(report.BestLoss == doctest::Approx(*std::min_element(report.LossTrajectory.begin(), report.LossTrajectory.end())));
        CHECK(Serialize(report.BestProgram) == report.BestSerialized);
        CHECK(report.Length == Length(report.BestProgram, LengthMode::ExponentWeighted));
        CHECK(report.WallTimeSeconds >= 0.0);
    }
}

TEST_CASE("a degenerate prior confines every generation to its operator")
{
    auto const data = GenerateDataset(*FindBenchmark("Nguyen-5"), 2);
    auto cfg = SmallConfig(31);
    cfg.Generations = 10;
    cfg.LossTarget = 0.0;
    std::size_t checked = 0;
    auto const observer = [&](std::size_t, std::span<Program const> programs, std::span<double const> fitness) {
        REQUIRE(programs.size() == fitness.size());
        for (auto const& p : programs) {
            std::vector<OperatorKind> ops;
            LibraryOperators(p, ops);
            for (auto op : ops) {
                REQUIRE(op == OperatorKind::Sin);
            }
            ++checked;
        }
    };
    Evolve(data, OperatorPrior::Degenerate(OperatorKind::Sin), cfg, LossKind::Chi2, RegularizerConfig {}, FitConfig {}, observer);
    CHECK(checked == cfg.PopulationSize * cfg.Generations);
}

TEST_CASE("constant targets and non-finite targets")
{
    std::vector<double> x { 0.0, 1.0, 2.0, 3.0 };
    Dataset const flat(x, { 2.0, 2.0, 2.0, 2.0 }, 1);
    auto const report = Evolve(flat, OperatorPrior {}, SmallConfig(1), LossKind::Mae, RegularizerConfig {}, FitConfig {});
    CHECK(std::isnan(report.R2));
    Dataset const broken(x, { 1.0, NAN, 2.0, 3.0 }, 1);
    CHECK_THROWS_AS(Evolve(broken, OperatorPrior {}, SmallConfig(1), LossKind::Mae, RegularizerConfig {}, FitConfig {}),
        std::invalid_argument);
}
