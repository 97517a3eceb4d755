#include <doctest.h>

#include <vector>

#include "welch.hpp"

using namespace faigp::stats;

// Reference values computed with scipy.stats (t.sf, ttest_ind).
TEST_CASE("student t survival matches reference values")
{
    CHECK(StudentTSurvival(2.0, 10.0) == doctest::Approx(0.036694017385370196).epsilon(1e-9));
    CHECK(StudentTSurvival(1.0, 5.0) == doctest::Approx(0.18160873382456127).epsilon(1e-9));
    CHECK(StudentTSurvival(2.5, 30.7) == doctest::Approx(0.008988720929681499).epsilon(1e-9));
    CHECK(StudentTSurvival(-0.5, 12.3) == doctest::Approx(0.6870499498703663).epsilon(1e-9));
    CHECK(StudentTSurvival(6.0, 58.0) == doctest::Approx(6.814788123840179e-08).epsilon(1e-7));
    CHECK(StudentTSurvival(0.0, 7.0) == doctest::Approx(0.5));
}

TEST_CASE("welch one-sided test matches reference values")
{
    std::vector<double> const a { 0.9, 0.8, 0.95, 0.7, 0.99, 0.85 };
    std::vector<double> const b { 0.5, 0.6, 0.2, 0.9, 0.4 };
    auto const r = WelchGreater(a, b);
    CHECK(r.T == doctest::Approx(2.7929653380545214).epsilon(1e-12));
    CHECK(r.P == doctest::Approx(0.018711674948562185).epsilon(1e-9));
    auto const flipped = WelchGreater(b, a);
    CHECK(flipped.P == doctest::Approx(1.0 - r.P).epsilon(1e-9));
}

TEST_CASE("zero-variance groups")
{
    std::vector<double> const high { 1.0, 1.0, 1.0 };
    std::vector<double> const low { 0.5, 0.5 };
    CHECK(WelchGreater(high, low).P == 0.0);
    CHECK(WelchGreater(low, high).P == 1.0);
    CHECK_THROWS_AS(WelchGreater(std::vector<double> { 1.0 }, low), std::invalid_argument);
}
