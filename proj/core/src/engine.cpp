#include "faigp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "faigp/canonical.hpp"
#include "faigp/diversity.hpp"
#include "faigp/operators.hpp"
#include "faigp/random.hpp"
#include "faigp/syntax.hpp"

namespace faigp {

void ParallelFor(std::size_t count, std::size_t workers, std::function<void(std::size_t)> const& fn)
{
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next { 0 };
    std::exception_ptr error;
    std::mutex errorMutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (auto i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(errorMutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

namespace {
    enum class Stream : std::uint64_t {
        Initial = 1,
        Fit,
        Selection,
        Variation,
    };

    auto StreamFor(std::uint64_t seed, Stream stream, std::size_t generation, std::size_t slot = 0) -> Rng
    {
        return Rng(DeriveSeed({ seed, static_cast<std::uint64_t>(stream), generation, slot }));
    }

    struct Individual {
        Program Expr;
        bool Scored { false };
        double Loss { 0.0 };
        std::size_t Length { 0 };
        std::size_t WeightedLength { 0 };
        double Fitness { 0.0 };
    };

    constexpr double kLossCeiling = 1e300;

    class Search {
    public:
        Search(Dataset const& data, OperatorPrior const& prior, EngineConfig const& cfg, LossKind loss,
            RegularizerConfig const& reg, FitConfig const& fit)
            : data_(data)
            , cfg_(cfg)
            , loss_(loss)
            , reg_(reg)
            , fit_(fit)
            , ctx_ { cfg, prior, fit, data.Arity() }
        {
        }

        void Initialize()
        {
            population_.assign(cfg_.PopulationSize, {});
            auto const seeded = cfg_.InitialPrograms.size();
            for (std::size_t i = 0; i < seeded; ++i) {
                population_[i].Expr = Canonicalize(cfg_.InitialPrograms[i], cfg_.Exponents);
            }
            ParallelFor(population_.size() - seeded, cfg_.Workers, [&](std::size_t k) {
                auto const i = seeded + k;
                auto rng = StreamFor(cfg_.Seed, Stream::Initial, 0, i);
                population_[i].Expr = GenerateRandomProgram(ctx_, rng);
            });
        }

        // Fits and scores every unscored individual, then refreshes the
        // diversity-dependent fitness of the whole generation.
        void Score(std::size_t generation)
        {
            ParallelFor(population_.size(), cfg_.Workers, [&](std::size_t i) {
                auto& ind = population_[i];
                if (ind.Scored) {
                    return;
                }
                if (fit_.MaxCalls > 0) {
                    auto rng = StreamFor(cfg_.Seed, Stream::Fit, generation, i);
                    auto result = LmFit(ind.Expr, data_.View(), data_.Y(), fit_, rng);
                    ind.Expr = Canonicalize(std::move(result.Fitted), cfg_.Exponents);
                }
                auto const yhat = Evaluate(ind.Expr, data_.View());
                auto const l = ComputeLoss(loss_, data_.Y(), yhat);
                ind.Loss = std::isfinite(l) ? std::min(l, kLossCeiling) : kLossCeiling;
                ind.WeightedLength = faigp::Length(ind.Expr, LengthMode::ExponentWeighted);
                ind.Length = reg_.Mode == LengthMode::ExponentWeighted ? ind.WeightedLength
                                                                       : faigp::Length(ind.Expr, LengthMode::Flat);
                ind.Scored = true;
            });

            std::vector<double> divergence(population_.size(), 0.0);
            if (reg_.DiversityWeight != 0.0) {
                auto const report = ShannonDiversity(OperatorFrequencies(Programs()));
                divergence = report.D;
            }
            for (std::size_t i = 0; i < population_.size(); ++i) {
                auto& ind = population_[i];
                ind.Fitness = TotalFitness(ind.Loss, divergence[i], ind.Length, ind.WeightedLength, reg_);
            }
        }

        auto Programs() const -> std::vector<Program>
        {
            std::vector<Program> out;
            out.reserve(population_.size());
            for (auto const& ind : population_) {
                out.push_back(ind.Expr);
            }
            return out;
        }

        auto Fitness() const -> std::vector<double>
        {
            std::vector<double> out;
            out.reserve(population_.size());
            for (auto const& ind : population_) {
                out.push_back(ind.Fitness);
            }
            return out;
        }

        auto BestByFitness() const -> std::size_t
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < population_.size(); ++i) {
                if (population_[i].Fitness < population_[best].Fitness) {
                    best = i;
                }
            }
            return best;
        }

        auto BestByLoss() const -> std::size_t
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < population_.size(); ++i) {
                auto const& a = population_[i];
                auto const& b = population_[best];
                if (a.Loss < b.Loss || (a.Loss == b.Loss && a.Fitness < b.Fitness)) {
                    best = i;
                }
            }
            return best;
        }

        auto Member(std::size_t i) const -> Individual const& { return population_[i]; }

        void Breed(std::size_t generation)
        {
            auto const n = population_.size();
            auto selectRng = StreamFor(cfg_.Seed, Stream::Selection, generation);
            std::vector<std::size_t> pool(cfg_.ParentCount());
            for (auto& slot : pool) {
                slot = Tournament(selectRng);
            }

            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                [&](auto a, auto b) { return population_[a].Fitness < population_[b].Fitness; });

            std::vector<Individual> next(n);
            auto const elites = std::min(cfg_.Elitism, n);
            for (std::size_t e = 0; e < elites; ++e) {
                next[e] = population_[order[e]];
            }

            auto const& mix = cfg_.Mix;
            std::discrete_distribution<int> const pickOperator({ mix.Crossover, mix.Point, mix.Subtree, mix.Hoist, mix.Replication });
            ParallelFor(n - elites, cfg_.Workers, [&](std::size_t k) {
                auto const slot = elites + k;
                auto rng = StreamFor(cfg_.Seed, Stream::Variation, generation + 1, slot);
                auto op = pickOperator;
                auto parent = [&]() -> Program const& { return population_[pool[UniformInt<std::size_t>(rng, 0, pool.size() - 1)]].Expr; };
                Program child;
                switch (op(rng)) {
                case 0: {
                    auto const& a = parent();
                    auto const& b = parent();
                    child = Crossover(a, b, ctx_, rng);
                    break;
                }
                case 1:
                    child = PerturbCoefficients(PointMutation(parent(), ctx_, rng), fit_, rng, cfg_.Exponents);
                    break;
                case 2:
                    child = SubtreeMutation(parent(), ctx_, rng);
                    break;
                case 3:
                    child = HoistMutation(parent(), ctx_, rng);
                    break;
                default:
                    child = parent();
                    break;
                }
                next[slot].Expr = std::move(child);
            });
            population_ = std::move(next);
        }

    private:
        auto Tournament(Rng& rng) const -> std::size_t
        {
            auto best = UniformInt<std::size_t>(rng, 0, population_.size() - 1);
            for (std::size_t t = 1; t < cfg_.TournamentSize; ++t) {
                auto const c = UniformInt<std::size_t>(rng, 0, population_.size() - 1);
                if (population_[c].Fitness < population_[best].Fitness
                    || (population_[c].Fitness == population_[best].Fitness && c < best)) {
                    best = c;
                }
            }
            return best;
        }

        Dataset const& data_;
        EngineConfig const& cfg_;
        LossKind loss_;
        RegularizerConfig const& reg_;
        FitConfig const& fit_;
        VariationContext ctx_;
        std::vector<Individual> population_;
    };
} // namespace

auto Evolve(Dataset const& data, OperatorPrior const& prior, EngineConfig const& cfg, LossKind loss,
    RegularizerConfig const& reg, FitConfig const& fit, GenerationObserver const& observer) -> RunReport
{
    auto const start = std::chrono::steady_clock::now();
    cfg.Validate();
    if (data.Arity() == 0) {
        throw std::invalid_argument("dataset has no input variables");
    }
    if (cfg.Generations == 0) {
        throw std::invalid_argument("at least one generation is required");
    }
    for (auto v : data.Y()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("dataset targets must be finite");
        }
    }
    for (auto const& p : cfg.InitialPrograms) {
        if (p.Empty() || RequiredArity(p) > data.Arity()) {
            throw std::invalid_argument(fmt::format("initial program '{}' does not fit a dataset with {} input(s)",
                p.Empty() ? std::string("<empty>") : Serialize(p), data.Arity()));
        }
    }

    RunReport report;
    report.Seed = cfg.Seed;

    Search search(data, prior, cfg, loss, reg, fit);
    search.Initialize();

    Individual best;
    bool haveBest = false;
    for (std::size_t gen = 0; gen < cfg.Generations; ++gen) {
        search.Score(gen);
        auto const bestLoss = search.Member(search.BestByLoss());
        auto const bestFit = search.Member(search.BestByFitness());
        report.LossTrajectory.push_back(bestLoss.Loss);
        report.FitnessTrajectory.push_back(bestFit.Fitness);
        report.GenerationsUsed = gen + 1;
        if (!haveBest || bestLoss.Loss < best.Loss) {
            best = bestLoss;
            haveBest = true;
        }
        if (observer) {
            auto const programs = search.Programs();
            auto const fitness = search.Fitness();
            observer(gen, programs, fitness);
        }
        if (best.Loss <= cfg.LossTarget || gen + 1 == cfg.Generations) {
            break;
        }
        search.Breed(gen);
    }

    report.BestProgram = best.Expr;
    report.BestSerialized = Serialize(best.Expr);
    report.BestLoss = best.Loss;
    report.Length = best.WeightedLength;
    report.FlatLength = Length(best.Expr, LengthMode::Flat);
    auto const yhat = Evaluate(best.Expr, data.View());
    try {
        report.R2 = RSquared(data.Y(), yhat);
    } catch (std::domain_error const&) {
        report.R2 = std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<double> finite(yhat);
    for (auto& v : finite) {
        v = std::isfinite(v) ? v : kNonFiniteSentinel;
    }
    report.Spearman = SpearmanCorrelation(data.Y(), finite);
    if (!std::isfinite(report.Spearman)) {
        report.Spearman = 0.0;
    }
    report.WallTimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace faigp
