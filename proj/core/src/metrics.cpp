#include "faigp/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace faigp {

namespace {
    constexpr std::array<std::string_view, 6> kLossNames { "mae", "mse", "rmse", "pearson", "spearman", "chi2" };

    void CheckShapes(std::span<double const> a, std::span<double const> b)
    {
        if (a.size() != b.size()) {
            throw std::invalid_argument("observed and predicted vectors differ in length");
        }
        if (a.size() < 2) {
            throw std::invalid_argument("at least two points are required");
        }
    }

    auto Sanitized(std::span<double const> v) -> std::vector<double>
    {
        std::vector<double> out(v.begin(), v.end());
        for (auto& x : out) {
            if (!std::isfinite(x)) {
                x = kNonFiniteSentinel;
            }
        }
        return out;
    }

    auto Ranks(std::span<double const> v) -> std::vector<double>
    {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        std::vector<double> ranks(v.size());
        std::size_t i = 0;
        while (i < idx.size()) {
            auto j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
                ++j;
            }
            auto const avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (auto k = i; k <= j; ++k) {
                ranks[idx[k]] = avg;
            }
            i = j + 1;
        }
        return ranks;
    }

    // NaN when either side has zero variance.
    auto Correlation(std::span<double const> a, std::span<double const> b) -> double
    {
        auto const n = static_cast<double>(a.size());
        auto const ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
        auto const mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
        double sab = 0.0;
        double saa = 0.0;
        double sbb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto const da = a[i] - ma;
            auto const db = b[i] - mb;
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        if (saa <= 0.0 || sbb <= 0.0) {
            return std::nan("");
        }
        return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    }

    auto CorrelationLoss(double rho) -> double { return std::isfinite(rho) ? 1.0 - std::abs(rho) : 1.0; }
} // namespace

auto Name(LossKind kind) noexcept -> std::string_view { return kLossNames[static_cast<std::size_t>(kind)]; }

auto LossFromName(std::string_view name) noexcept -> std::optional<LossKind>
{
    for (std::size_t i = 0; i < kLossNames.size(); ++i) {
        if (kLossNames[i] == name) {
            return static_cast<LossKind>(i);
        }
    }
    return std::nullopt;
}

auto PearsonCorrelation(std::span<double const> a, std::span<double const> b) -> double
{
    CheckShapes(a, b);
    return Correlation(a, b);
}

auto SpearmanCorrelation(std::span<double const> a, std::span<double const> b) -> double
{
    CheckShapes(a, b);
    auto ra = Ranks(a);
    auto rb = Ranks(b);
    return Correlation(ra, rb);
}

auto ComputeLoss(LossKind kind, std::span<double const> y, std::span<double const> yhat) -> double
{
    CheckShapes(y, yhat);
    auto const pred = Sanitized(yhat);
    auto const n = static_cast<double>(y.size());

    switch (kind) {
    case LossKind::Mae: {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            s += std::abs(y[i] - pred[i]);
        }
        return s / n;
    }
    case LossKind::Mse:
    case LossKind::Rmse: {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto const r = y[i] - pred[i];
            s += r * r;
        }
        return kind == LossKind::Mse ? s / n : std::sqrt(s / n);
    }
    case LossKind::Pearson:
        return CorrelationLoss(Correlation(y, pred));
    case LossKind::Spearman: {
        auto ry = Ranks(y);
        auto rp = Ranks(pred);
        return CorrelationLoss(Correlation(ry, rp));
    }
    case LossKind::Chi2: {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto const r = y[i] - pred[i];
            s += r * r / (std::abs(pred[i]) + kChi2Epsilon);
        }
        return s;
    }
    }
    throw std::invalid_argument("unknown loss kind");
}

auto RSquared(std::span<double const> y, std::span<double const> yhat) -> double
{
    CheckShapes(y, yhat);
    auto const pred = Sanitized(yhat);
    auto const mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ssRes = 0.0;
    double ssTot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ssRes += (y[i] - pred[i]) * (y[i] - pred[i]);
        ssTot += (y[i] - mean) * (y[i] - mean);
    }
    if (ssTot <= 0.0) {
        throw std::domain_error("R² is undefined for a constant target");
    }
    return 1.0 - ssRes / ssTot;
}

auto TotalFitness(double loss, double diversity, std::size_t length, std::size_t weightedLength,
    RegularizerConfig const& cfg) -> double
{
    auto fitness = loss + cfg.LengthWeight * static_cast<double>(length) - cfg.DiversityWeight * diversity;
    if (cfg.LengthLimit && weightedLength > *cfg.LengthLimit) {
        fitness += cfg.Penalty;
    }
    return fitness;
}

auto TotalFitness(Program const& p, double loss, double diversity, RegularizerConfig const& cfg) -> double
{
    auto const weighted = Length(p, LengthMode::ExponentWeighted);
    auto const length = cfg.Mode == LengthMode::ExponentWeighted ? weighted : Length(p, LengthMode::Flat);
    return TotalFitness(loss, diversity, length, weighted, cfg);
}

} // namespace faigp
