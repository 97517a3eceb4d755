#include "faigp/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "faigp/canonical.hpp"
#include "faigp/metrics.hpp"
#include "faigp/random.hpp"
#include "faigp/syntax.hpp"

namespace faigp {

auto Sampler::ToString() const -> std::string
{
    return fmt::format("{}({}, {}, {})", Kind == SamplerKind::Even ? 'E' : 'U', Lo, Hi, Count);
}

auto BenchmarkSpec::GroundTruth() const -> std::optional<Program>
{
    if (!LibraryForm) {
        return std::nullopt;
    }
    return Parse(*LibraryForm, kGroundTruthRange);
}

namespace {
    using Point = std::span<double const>;

    auto U(double lo, double hi, std::size_t n) -> Sampler { return { SamplerKind::Uniform, lo, hi, n }; }
    auto E(double lo, double hi, std::size_t n) -> Sampler { return { SamplerKind::Even, lo, hi, n }; }

    template <typename F>
    auto Make(std::string name, std::string formula, F&& f, std::optional<std::string> libraryForm, Sampler domain,
        std::size_t arity = 1) -> BenchmarkSpec
    {
        return { std::move(name), std::move(formula), std::forward<F>(f), std::move(libraryForm), domain, arity };
    }

    auto BuildSuite() -> std::vector<BenchmarkSpec>
    {
        constexpr double pi = std::numbers::pi;
        auto poly = [](int degree) {
            return [degree](Point p) {
                double s = 0.0;
                for (int k = 1; k <= degree; ++k) {
                    s += std::pow(p[0], k);
                }
                return s;
            };
        };

        std::vector<BenchmarkSpec> s;
        s.push_back(Make("Nguyen-1", "x^3 + x^2 + x", poly(3), "x^3 + x^2 + x", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-2", "x^4 + x^3 + x^2 + x", poly(4), "x^4 + x^3 + x^2 + x", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-3", "x^5 + x^4 + x^3 + x^2 + x", poly(5), "x^5 + x^4 + x^3 + x^2 + x", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-4", "x^6 + x^5 + x^4 + x^3 + x^2 + x", poly(6), "x^6 + x^5 + x^4 + x^3 + x^2 + x", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-5", "sin(x^2)cos(x) - 1",
            [](Point p) { return std::sin(p[0] * p[0]) * std::cos(p[0]) - 1.0; }, "sin(x^2)*cos(x) - 1", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-6", "sin(x) + sin(x + x^2)",
            [](Point p) { return std::sin(p[0]) + std::sin(p[0] + p[0] * p[0]); }, "sin(x) + sin(x + x^2)", U(-1, 1, 20)));
        s.push_back(Make("Nguyen-7", "log(x + 1) + log(x^2 + 1)",
            [](Point p) { return std::log(p[0] + 1.0) + std::log(p[0] * p[0] + 1.0); }, "log(x + 1) + log(x^2 + 1)", U(0, 2, 20)));
        s.push_back(Make("Nguyen-8", "sqrt(x)", [](Point p) { return std::sqrt(p[0]); }, "sqrt(x)", U(0, 4, 20)));
        s.push_back(Make("Nguyen-9", "sin(x) + sin(y^2)",
            [](Point p) { return std::sin(p[0]) + std::sin(p[1] * p[1]); }, "sin(x) + sin(y^2)", U(0, 1, 20), 2));
        s.push_back(Make("Nguyen-10", "2 sin(x) cos(y)",
            [](Point p) { return 2.0 * std::sin(p[0]) * std::cos(p[1]); }, "2*sin(x)*cos(y)", U(0, 1, 20), 2));
        s.push_back(Make("Nguyen-11", "x^y", [](Point p) { return std::pow(p[0], p[1]); }, std::nullopt, U(0, 1, 20), 2));
        auto nguyen12 = [](Point p) {
            auto x = p[0];
            auto y = p[1];
            return x * x * x * x - x * x * x + 0.5 * y * y - y;
        };
        s.push_back(Make("Nguyen-12", "x^4 - x^3 + y^2/2 - y", nguyen12, "x^4 - x^3 + 0.5*y^2 - y", U(0, 1, 20), 2));
        s.push_back(Make("Nguyen-12*", "x^4 - x^3 + y^2/2 - y", nguyen12, "x^4 - x^3 + 0.5*y^2 - y", U(0, 10, 20), 2));

        auto r1 = [](Point p) {
            auto x = p[0];
            return std::pow(x + 1.0, 3) / (x * x - x + 1.0);
        };
        auto r2 = [](Point p) {
            auto x = p[0];
            return (std::pow(x, 5) - 3.0 * std::pow(x, 3) + 1.0) / (x * x + 1.0);
        };
        auto r3 = [](Point p) {
            auto x = p[0];
            return (std::pow(x, 6) + std::pow(x, 5)) / (std::pow(x, 4) + std::pow(x, 3) + x * x + x + 1.0);
        };
        std::string const r1Form = "(x + 1)^3 / (x^2 - x + 1)";
        std::string const r2Form = "(x^5 - 3*x^3 + 1) / (x^2 + 1)";
        std::string const r3Form = "(x^6 + x^5) / (x^4 + x^3 + x^2 + x + 1)";
        s.push_back(Make("R-1", "(x+1)^3 / (x^2 - x + 1)", r1, r1Form, E(-1, 1, 20)));
        s.push_back(Make("R-2", "(x^5 - 3x^3 + 1) / (x^2 + 1)", r2, r2Form, E(-1, 1, 20)));
        s.push_back(Make("R-3", "(x^6 + x^5) / (x^4 + x^3 + x^2 + x + 1)", r3, r3Form, E(-1, 1, 20)));
        s.push_back(Make("R-1*", "(x+1)^3 / (x^2 - x + 1)", r1, r1Form, E(-10, 10, 20)));
        s.push_back(Make("R-2*", "(x^5 - 3x^3 + 1) / (x^2 + 1)", r2, r2Form, E(-10, 10, 20)));
        s.push_back(Make("R-3*", "(x^6 + x^5) / (x^4 + x^3 + x^2 + x + 1)", r3, r3Form, E(-10, 10, 20)));

        s.push_back(Make("Livermore-1", "1/3 + x + sin(x^2)",
            [](Point p) { return 1.0 / 3.0 + p[0] + std::sin(p[0] * p[0]); }, "0.3333333333333333 + x + sin(x^2)",
            U(-10, 10, 1000)));
        s.push_back(Make("Livermore-2", "sin(x^2)cos(x) - 2",
            [](Point p) { return std::sin(p[0] * p[0]) * std::cos(p[0]) - 2.0; }, "sin(x^2)*cos(x) - 2", U(-1, 1, 20)));
        s.push_back(Make("Livermore-3", "sin(x^3)cos(x^2) - 1",
            [](Point p) { return std::sin(std::pow(p[0], 3)) * std::cos(p[0] * p[0]) - 1.0; }, "sin(x^3)*cos(x^2) - 1",
            U(-1, 1, 20)));
        s.push_back(Make("Livermore-4", "log(x + 1) + log(x^2 + 1) + log(x)",
            [](Point p) { return std::log(p[0] + 1.0) + std::log(p[0] * p[0] + 1.0) + std::log(p[0]); },
            "log(x + 1) + log(x^2 + 1) + log(x)", U(0, 2, 20)));
        s.push_back(Make("Livermore-5", "x^4 - x^3 + x^2 - y",
            [](Point p) { return std::pow(p[0], 4) - std::pow(p[0], 3) + p[0] * p[0] - p[1]; }, "x^4 - x^3 + x^2 - y",
            U(0, 1, 20), 2));
        s.push_back(Make("Livermore-6", "4x^4 + 3x^3 + 2x^2 + x",
            [](Point p) { return 4 * std::pow(p[0], 4) + 3 * std::pow(p[0], 3) + 2 * p[0] * p[0] + p[0]; },
            "4*x^4 + 3*x^3 + 2*x^2 + x", U(-1, 1, 20)));
        s.push_back(Make("Livermore-7", "sinh(x)", [](Point p) { return std::sinh(p[0]); }, std::nullopt, U(-1, 1, 20)));
        s.push_back(Make("Livermore-8", "cosh(x)", [](Point p) { return std::cosh(p[0]); }, std::nullopt, U(-1, 1, 20)));
        s.push_back(Make("Livermore-9", "x^9 + x^8 + ... + x", poly(9), "x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x",
            U(-1, 1, 20)));
        s.push_back(Make("Livermore-10", "6 sin(x) cos(y)",
            [](Point p) { return 6.0 * std::sin(p[0]) * std::cos(p[1]); }, "6*sin(x)*cos(y)", U(0, 1, 20), 2));
        s.push_back(Make("Livermore-11", "x^2 y^2 / (x + y)",
            [](Point p) { return p[0] * p[0] * p[1] * p[1] / (p[0] + p[1]); }, "x^2*y^2/(x + y)", U(-1, 1, 50), 2));
        s.push_back(Make("Livermore-12", "x^5 / y^3",
            [](Point p) { return std::pow(p[0], 5) / std::pow(p[1], 3); }, "x^5/y^3", U(-1, 1, 50), 2));
        s.push_back(Make("Livermore-13", "x^(1/3)", [](Point p) { return std::cbrt(p[0]); }, std::nullopt, U(0, 4, 20)));
        s.push_back(Make("Livermore-14", "x^3 + x^2 + x + sin(x) + sin(x^2)",
            [cubic = poly(3)](Point p) { return cubic(p) + std::sin(p[0]) + std::sin(p[0] * p[0]); },
            "x^3 + x^2 + x + sin(x) + sin(x^2)", U(-1, 1, 20)));
        s.push_back(Make("Livermore-15", "x^(1/5)", [](Point p) { return std::pow(p[0], 0.2); }, std::nullopt, U(0, 4, 20)));
        s.push_back(Make("Livermore-16", "x^(2/5)", [](Point p) { return std::pow(p[0], 0.4); }, std::nullopt, U(0, 4, 20)));
        s.push_back(Make("Livermore-17", "4 sin(x) cos(y)",
            [](Point p) { return 4.0 * std::sin(p[0]) * std::cos(p[1]); }, "4*sin(x)*cos(y)", U(0, 1, 20), 2));
        s.push_back(Make("Livermore-18", "sin(x^2)cos(x) - 5",
            [](Point p) { return std::sin(p[0] * p[0]) * std::cos(p[0]) - 5.0; }, "sin(x^2)*cos(x) - 5", U(-1, 1, 20)));
        s.push_back(Make("Livermore-19", "x^5 + x^4 + x^2 + x",
            [](Point p) { return std::pow(p[0], 5) + std::pow(p[0], 4) + p[0] * p[0] + p[0]; }, "x^5 + x^4 + x^2 + x",
            U(-1, 1, 20)));
        s.push_back(Make("Livermore-20", "exp(-x^2)", [](Point p) { return std::exp(-p[0] * p[0]); }, std::nullopt, U(-1, 1, 20)));
        s.push_back(Make("Livermore-21", "x^8 + x^7 + ... + x", poly(8), "x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x",
            U(-1, 1, 20)));
        s.push_back(Make("Livermore-22", "exp(-0.5 x^2)", [](Point p) { return std::exp(-0.5 * p[0] * p[0]); }, std::nullopt,
            U(-1, 1, 20)));

        auto keijzer = [pi](Point p) { return 0.3 * p[0] * std::sin(2.0 * pi * p[0]); };
        s.push_back(Make("Keijzer-2", "0.3 x sin(2 pi x)", keijzer, "0.3*x*sin(2*pi*x)", U(-2, 2, 300)));
        s.push_back(Make("Keijzer-2*", "0.3 x sin(2 pi x)", keijzer, "0.3*x*sin(2*pi*x)", U(-2, 2, 20)));
        return s;
    }

    auto Lower(std::string_view s) -> std::string
    {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
        return out;
    }

    auto Scaled(Sampler s, std::size_t factor) -> Sampler
    {
        s.Count *= factor;
        return s;
    }

    constexpr std::uint64_t kDataStream = 0xDA7A;
    constexpr std::uint64_t kNoiseStream = 0x701CE;
    constexpr int kMaxResample = 1000;

    auto SampleMean(std::span<double const> v) -> double
    {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    }
} // namespace

auto BenchmarkSuite() -> std::span<BenchmarkSpec const>
{
    static std::vector<BenchmarkSpec> const suite = BuildSuite();
    return suite;
}

auto FindBenchmark(std::string_view name) -> BenchmarkSpec const*
{
    auto const key = Lower(name);
    for (auto const& spec : BenchmarkSuite()) {
        if (Lower(spec.Name) == key) {
            return &spec;
        }
    }
    return nullptr;
}

auto BenchmarkNames() -> std::vector<std::string>
{
    std::vector<std::string> names;
    for (auto const& spec : BenchmarkSuite()) {
        names.push_back(spec.Name);
    }
    return names;
}

auto SampleAxis(Sampler const& s, std::uint64_t seed) -> std::vector<double>
{
    std::vector<double> v(s.Points());
    if (s.Kind == SamplerKind::Even) {
        for (std::size_t i = 0; i <= s.Count; ++i) {
            v[i] = i == s.Count ? s.Hi : s.Lo + (s.Hi - s.Lo) * static_cast<double>(i) / static_cast<double>(s.Count);
        }
        return v;
    }
    Rng rng(seed);
    for (auto& x : v) {
        x = Uniform(rng, s.Lo, s.Hi);
    }
    return v;
}

auto GenerateDataset(BenchmarkSpec const& spec, std::uint64_t seed, std::size_t factor) -> Dataset
{
    auto const domain = Scaled(spec.Domain, factor);
    std::vector<std::vector<double>> axes;
    for (std::size_t v = 0; v < spec.Arity; ++v) {
        axes.push_back(SampleAxis(domain, DeriveSeed({ seed, kDataStream, v })));
    }
    Rng resampler(DeriveSeed({ seed, kDataStream, 0xFFFF }));

    auto const perAxis = domain.Points();
    std::size_t rows = 1;
    for (std::size_t v = 0; v < spec.Arity; ++v) {
        rows *= perAxis;
    }
    std::vector<double> x(spec.Arity * rows);
    std::vector<double> y(rows);
    std::vector<double> point(spec.Arity);

    auto fill = [&] {
        for (std::size_t r = 0; r < rows; ++r) {
            auto rest = r;
            for (std::size_t v = spec.Arity; v-- > 0;) {
                point[v] = axes[v][rest % perAxis];
                rest /= perAxis;
            }
            for (std::size_t v = 0; v < spec.Arity; ++v) {
                x[v * rows + r] = point[v];
            }
            y[r] = spec.Target(point);
        }
    };
    fill();
    // Uniform draws that land on a singularity are redrawn; fixed grids keep a sentinel.
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        auto bad = std::find_if(y.begin(), y.end(), [](double v) { return !std::isfinite(v); });
        if (bad == y.end()) {
            break;
        }
        if (domain.Kind == SamplerKind::Even) {
            for (auto& v : y) {
                if (!std::isfinite(v)) {
                    v = kNonFiniteSentinel;
                }
            }
            break;
        }
        auto rest = static_cast<std::size_t>(bad - y.begin());
        for (std::size_t v = spec.Arity; v-- > 0;) {
            axes[v][rest % perAxis] = Uniform(resampler, domain.Lo, domain.Hi);
            rest /= perAxis;
        }
        fill();
    }

    Provenance prov;
    prov.Source = spec.Name;
    prov.Seed = seed;
    return { std::move(x), std::move(y), spec.Arity, std::move(prov) };
}

auto GenerateDataset(BenchmarkSpec const& spec, std::uint64_t seed) -> Dataset
{
    return GenerateDataset(spec, seed, 1);
}

auto AddNoise(Dataset const& data, double lambda, std::uint64_t seed) -> Dataset
{
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("noise lambda must be non-negative");
    }
    if (lambda == 0.0) {
        return data;
    }
    auto const& clean = data.Y();
    auto const mean = SampleMean(clean);
    double ss = 0.0;
    for (auto v : clean) {
        ss += (v - mean) * (v - mean);
    }
    auto const variance = lambda * ss / static_cast<double>(clean.size() - 1);
    Rng rng(DeriveSeed({ seed, kNoiseStream }));
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    std::vector<double> y(clean.begin(), clean.end());
    for (auto& v : y) {
        v += noise(rng);
    }
    auto prov = data.Source();
    prov.NoiseLambda = lambda;
    prov.NoiseVariance = variance;
    return data.WithTargets(std::move(y)).WithProvenance(std::move(prov));
}

auto ScoreRecovery(Program const& candidate, BenchmarkSpec const& spec, std::uint64_t seed) -> RecoveryScore
{
    if (RequiredArity(candidate) > spec.Arity) {
        throw std::invalid_argument(fmt::format("candidate uses {} variables, {} has {}", RequiredArity(candidate), spec.Name, spec.Arity));
    }
    auto const data = GenerateDataset(spec, seed);
    auto const yhat = Evaluate(candidate, data.View());

    RecoveryScore score;
    auto const nonFinite = std::count_if(yhat.begin(), yhat.end(), [](double v) { return !std::isfinite(v); });
    score.R2 = RSquared(data.Y(), yhat);
    std::vector<double> sanitized(yhat);
    for (auto& v : sanitized) {
        v = std::isfinite(v) ? v : kNonFiniteSentinel;
    }
    score.Spearman = SpearmanCorrelation(data.Y(), sanitized);
    if (!std::isfinite(score.Spearman)) {
        score.Spearman = 0.0;
    }
    if (2 * static_cast<std::size_t>(nonFinite) > yhat.size()) {
        return score;
    }

    if (auto truth = spec.GroundTruth()) {
        if (Serialize(Canonicalize(candidate, kGroundTruthRange)) == Serialize(Canonicalize(*truth, kGroundTruthRange))) {
            score.Exact = true;
            return score;
        }
    }
    auto const probe = GenerateDataset(spec, seed, 10);
    auto const probeHat = Evaluate(candidate, probe.View());
    double worst = 0.0;
    for (std::size_t i = 0; i < probeHat.size(); ++i) {
        auto const d = std::abs(probeHat[i] - probe.Y()[i]);
        worst = std::isfinite(d) ? std::max(worst, d) : HUGE_VAL;
    }
    score.Exact = worst < 1e-9;
    return score;
}

} // namespace faigp
