#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "faigp/metrics.hpp"
#include "faigp/syntax.hpp"

using namespace faigp;

namespace {
constexpr std::array kAllLosses { LossKind::Mae, LossKind::Mse, LossKind::Rmse, LossKind::Pearson, LossKind::Spearman,
    LossKind::Chi2 };

auto Sample(std::mt19937_64& rng, std::size_t n) -> std::vector<double>
{
    std::normal_distribution<double> d(0.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = d(rng);
    }
    return v;
}
} // namespace

TEST_CASE("names round-trip")
{
    for (auto kind : kAllLosses) {
        CHECK(LossFromName(Name(kind)) == kind);
    }
    CHECK_FALSE(LossFromName("huber").has_value());
}

TEST_CASE("perfect fit costs nothing under every loss")
{
    std::vector<double> const y { 1.0, -2.0, 3.5, 0.25, 7.0 };
    for (auto kind : kAllLosses) {
        CAPTURE(Name(kind));
        CHECK(ComputeLoss(kind, y, y) == doctest::Approx(0.0));
    }
}

TEST_CASE("correlation losses")
{
    std::vector<double> const y { 1.0, 2.0, 3.0 };
    std::vector<double> const doubled { 2.0, 4.0, 6.0 };
    CHECK(ComputeLoss(LossKind::Pearson, y, doubled) == doctest::Approx(0.0));
    std::vector<double> const cubed { 1.0, 8.0, 27.0 };
    CHECK(ComputeLoss(LossKind::Spearman, y, cubed) == doctest::Approx(0.0));
    std::vector<double> const flipped { -1.0, -2.0, -3.0 };
    CHECK(ComputeLoss(LossKind::Pearson, y, flipped) == doctest::Approx(0.0));
    std::vector<double> const flat { 4.0, 4.0, 4.0 };
    CHECK(ComputeLoss(LossKind::Pearson, flat, y) == 1.0);
    CHECK(ComputeLoss(LossKind::Spearman, flat, y) == 1.0);
}

TEST_CASE("losses against direct formulas")
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        auto const y = Sample(rng, 30);
        auto const yhat = Sample(rng, 30);
        double abs = 0.0;
        double sq = 0.0;
        double chi = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto const r = y[i] - yhat[i];
            abs += std::fabs(r);
            sq += r * r;
            chi += r * r / (std::fabs(yhat[i]) + 1e-8);
        }
        auto const n = static_cast<double>(y.size());
        CHECK(ComputeLoss(LossKind::Mae, y, yhat) == doctest::Approx(abs / n));
        CHECK(ComputeLoss(LossKind::Mse, y, yhat) == doctest::Approx(sq / n));
        CHECK(ComputeLoss(LossKind::Rmse, y, yhat) == doctest::Approx(std::sqrt(sq / n)));
        CHECK(ComputeLoss(LossKind::Chi2, y, yhat) == doctest::Approx(chi));
        for (auto kind : kAllLosses) {
            CHECK(ComputeLoss(kind, y, yhat) >= 0.0);
        }
    }
}

TEST_CASE("spearman uses average ranks for ties")
{
    std::vector<double> const a { 1.0, 2.0, 2.0, 3.0 };
    std::vector<double> const b { 10.0, 20.0, 30.0, 40.0 };
    // ranks of a: 1, 2.5, 2.5, 4
    auto const ra = std::vector<double> { 1.0, 2.5, 2.5, 4.0 };
    auto const rb = std::vector<double> { 1.0, 2.0, 3.0, 4.0 };
    CHECK(SpearmanCorrelation(a, b) == doctest::Approx(PearsonCorrelation(ra, rb)));
}

TEST_CASE("non-finite predictions are replaced by the sentinel")
{
    std::vector<double> const y { 1.0, 2.0, 3.0 };
    std::vector<double> const yhat { 1.0, std::numeric_limits<double>::quiet_NaN(), 3.0 };
    std::vector<double> const sentinel { 1.0, kNonFiniteSentinel, 3.0 };
    for (auto kind : kAllLosses) {
        auto const l = ComputeLoss(kind, y, yhat);
        CHECK(std::isfinite(l));
        CHECK(l == doctest::Approx(ComputeLoss(kind, y, sentinel)));
    }
}

TEST_CASE("invalid loss inputs")
{
    std::vector<double> const one { 1.0 };
    std::vector<double> const two { 1.0, 2.0 };
    std::vector<double> const three { 1.0, 2.0, 3.0 };
    CHECK_THROWS_AS(ComputeLoss(LossKind::Mse, one, one), std::invalid_argument);
    CHECK_THROWS_AS(ComputeLoss(LossKind::Mse, two, three), std::invalid_argument);
}

TEST_CASE("coefficient of determination")
{
    std::vector<double> const y { 1.0, 4.0, 2.0, 8.0, 5.0 };
    CHECK(RSquared(y, y) == 1.0);
    double mean = 0.0;
    for (auto v : y) {
        mean += v / 5.0;
    }
    CHECK(RSquared(y, std::vector<double>(5, mean)) == doctest::Approx(0.0));
    std::vector<double> anti;
    double ssRes = 0.0;
    double ssTot = 0.0;
    for (auto v : y) {
        anti.push_back(2.0 * mean - v);
        ssRes += (2.0 * (v - mean)) * (2.0 * (v - mean));
        ssTot += (v - mean) * (v - mean);
    }
    auto const r2 = RSquared(y, anti);
    CHECK(r2 < 0.0);
    CHECK(r2 == doctest::Approx(1.0 - ssRes / ssTot));
    CHECK_THROWS_AS(RSquared(std::vector<double>(4, 2.0), y), std::exception);

    std::mt19937_64 rng(52);
    auto const yy = Sample(rng, 25);
    auto const hat = Sample(rng, 25);
    std::vector<double> ys;
    std::vector<double> hs;
    for (std::size_t i = 0; i < yy.size(); ++i) {
        ys.push_back(3.0 * yy[i] - 1.0);
        hs.push_back(3.0 * hat[i] - 1.0);
    }
    CHECK(RSquared(ys, hs) == doctest::Approx(RSquared(yy, hat)));
}

TEST_CASE("total fitness composition")
{
    auto const p = Parse("1*sin({x1})^2 + 1*affine({x1,1})^3", { -3, 3 });
    auto const weighted = Length(p, LengthMode::ExponentWeighted);
    REQUIRE(weighted == 5 + 10);

    RegularizerConfig none;
    none.DiversityWeight = 0.0;
    none.LengthWeight = 0.0;
    CHECK(TotalFitness(p, 0.75, 0.4, none) == 0.75);

    RegularizerConfig limit = none;
    limit.LengthLimit = 10;
    auto const twelve = Parse("1*affine({x1,x2,1})^2 + 1*affine({x1})^1", { -3, 3 });
    REQUIRE(Length(twelve, LengthMode::ExponentWeighted) == 12);
    CHECK(TotalFitness(twelve, 0.1, 0.0, limit) >= limit.Penalty);

    RegularizerConfig lengthy = none;
    lengthy.LengthWeight = 0.01;
    lengthy.Mode = LengthMode::Flat;
    CHECK(TotalFitness(0.5, 0.0, 5, 5, lengthy) < TotalFitness(0.5, 0.0, 9, 9, lengthy));

    RegularizerConfig full;
    full.LengthWeight = 0.01;
    full.DiversityWeight = 0.1;
    CHECK(TotalFitness(0.5, 0.3, 7, 7, full) == doctest::Approx(0.5 + 0.01 * 7 - 0.1 * 0.3));
    for (std::size_t len = 1; len < 50; ++len) {
        CHECK(TotalFitness(0.5, 0.3, len, len, full) <= TotalFitness(0.5, 0.3, len + 1, len + 1, full));
    }
}
