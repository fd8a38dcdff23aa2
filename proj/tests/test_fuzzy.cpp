#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fmm/error.hpp"
#include "fmm/fuzzy.hpp"

using namespace fmm;
using namespace fmm::fuzzy;

TEST_CASE("time membership")
{
    CHECK(time_membership(8, 8) == 1.0);
    CHECK(time_membership(10, 8) == doctest::Approx(0.449329).epsilon(1e-6));
    CHECK(time_membership(12, 17) == doctest::Approx(0.006738).epsilon(1e-4));
    CHECK(time_membership(10, 8) == doctest::Approx(std::exp(-0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(time_membership(std::nan(""), 8), DomainError);
    CHECK_THROWS_AS(time_membership(8, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("time membership is in (0,1] and peaks only at the center")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 24.0);
    for (int i = 0; i < 500; ++i) {
        const double t = u(rng), a = u(rng);
        const double mu = time_membership(t, a);
        CHECK(mu > 0.0);
        CHECK(mu <= 1.0);
        if (t != a && std::abs(t - a) > 1e-6)
            CHECK(mu < 1.0);
        // moving t toward a never lowers the weight
        CHECK(time_membership(t + 0.5 * (a - t), a) >= mu);
    }
}

TEST_CASE("place membership")
{
    CHECK(place_membership({7500, 6500}, {7500, 6500}) == 1.0);
    CHECK(place_membership({7600, 6500}, {7500, 6500}) == doctest::Approx(0.367879).epsilon(1e-6));
    CHECK(place_membership({7500, 6550}, {7500, 6500}) == doctest::Approx(0.778801).epsilon(1e-6));
    CHECK_THROWS_AS(place_membership({std::nan(""), 0}, {0, 0}), DomainError);
}

TEST_CASE("singleton fuzzifier")
{
    const auto s = singleton_fuzzify(8.0);
    CHECK(s.membership(8.0) == 1.0);
    CHECK(s.membership(8.001) == 0.0);
    CHECK(s.membership(8.0) * time_membership(8.0, 8.0) == 1.0);
    const auto p = singleton_fuzzify(Point{1, 2});
    CHECK(p.membership({1, 2}) == 1.0);
    CHECK(p.membership({1, 2.5}) == 0.0);
}

TEST_CASE("center average defuzzifier")
{
    const std::vector<ScalarActivation> one{{5.0, 0.7}};
    CHECK(center_average_defuzzify(one) == 5.0);
    const std::vector<ScalarActivation> two{{2.0, 1.0}, {4.0, 1.0}};
    CHECK(center_average_defuzzify(two) == 3.0);
    const std::vector<ScalarActivation> skew{{0.0, 1.0}, {10.0, 3.0}};
    CHECK(center_average_defuzzify(skew) == doctest::Approx(7.5));

    const std::vector<ScalarActivation> zero{{1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(center_average_defuzzify(zero), NoActivationError);
    const std::vector<ScalarActivation> neg{{1.0, -1.0}};
    CHECK_THROWS_AS(center_average_defuzzify(neg), DomainError);
}

TEST_CASE("defuzzifier is scale invariant and convex")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(-100.0, 100.0);
    std::uniform_real_distribution<double> w(0.01, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScalarActivation> acts(1 + trial % 7);
        double lo = 1e300, hi = -1e300;
        for (auto& a : acts) {
            a = {c(rng), w(rng)};
            lo = std::min(lo, a.center);
            hi = std::max(hi, a.center);
        }
        const double y = center_average_defuzzify(acts);
        CHECK(y >= lo - 1e-12);
        CHECK(y <= hi + 1e-12);
        auto scaled = acts;
        for (auto& a : scaled)
            a.weight *= 37.5;
        CHECK(std::abs(center_average_defuzzify(scaled) - y) < 1e-12);
    }
}

TEST_CASE("closed form: trivial rule sets")
{
    const std::vector<double> times{8, 12, 17};
    const std::vector<Point> sites{{0, 0}, {100, 0}};

    const std::vector<FuzzyRule> single{{1, 0, {3000, 4000}}};
    const Point out = fuzzy_system_eval(3.0, {50, 50}, single, times, sites);
    CHECK(out.x == doctest::Approx(3000));
    CHECK(out.y == doctest::Approx(4000));

    // Same label, place midway between the two site centers: equal weights.
    const std::vector<FuzzyRule> pair{{0, 0, {0, 0}}, {0, 1, {1000, 0}}};
    const Point mid = fuzzy_system_eval(8.0, {50, 0}, pair, times, sites);
    CHECK(mid.x == doctest::Approx(500));
    CHECK(mid.y == doctest::Approx(0));
}

TEST_CASE("closed form: weights exp(-0.8) and exp(-0.2)")
{
    // t = 10 against centers 8 and 9: weights exp(-0.8) and exp(-0.2);
    // place exactly at both (identical) site centers contributes 1.
    const std::vector<double> times{8, 9};
    const std::vector<Point> sites{{500, 500}};
    const std::vector<FuzzyRule> rules{{0, 0, {0, 0}}, {1, 0, {8000, 6000}}};
    const double w1 = std::exp(-0.8), w2 = std::exp(-0.2);
    const Point expect{(0 * w1 + 8000 * w2) / (w1 + w2), (0 * w1 + 6000 * w2) / (w1 + w2)};
    const Point got = fuzzy_system_eval(10.0, {500, 500}, rules, times, sites);
    CHECK(std::abs(got.x - expect.x) < 1e-9);
    CHECK(std::abs(got.y - expect.y) < 1e-9);
    const Point piped = fuzzy_pipeline_eval(10.0, {500, 500}, rules, times, sites);
    CHECK(std::abs(piped.x - expect.x) < 1e-9);
    CHECK(std::abs(piped.y - expect.y) < 1e-9);
}

TEST_CASE("infer assigns product weights")
{
    const std::vector<double> times{8, 17};
    const std::vector<Point> sites{{0, 0}, {100, 0}};
    const std::vector<FuzzyRule> rules{{0, 0, {1, 1}}, {1, 1, {2, 2}}};
    const auto acts = infer(singleton_fuzzify(10.0), singleton_fuzzify(Point{30, 40}), rules, times, sites);
    REQUIRE(acts.size() == 2);
    CHECK(acts[0].rule == &rules[0]);
    CHECK(acts[0].weight == doctest::Approx(std::exp(-0.2 * 4) * std::exp(-1e-4 * 2500)));
    CHECK(acts[1].weight == doctest::Approx(std::exp(-0.2 * 49) * std::exp(-1e-4 * (70 * 70 + 40 * 40))));
}

TEST_CASE("closed form errors")
{
    const std::vector<double> times{8};
    const std::vector<Point> sites{{0, 0}};
    CHECK_THROWS_AS(fuzzy_system_eval(8, {0, 0}, std::vector<FuzzyRule>{}, times, sites), ConfigError);
    const std::vector<FuzzyRule> bad_label{{3, 0, {0, 0}}};
    CHECK_THROWS_AS(fuzzy_system_eval(8, {0, 0}, bad_label, times, sites), ConfigError);
    const std::vector<FuzzyRule> bad_site{{0, 5, {0, 0}}};
    CHECK_THROWS_AS(fuzzy_system_eval(8, {0, 0}, bad_site, times, sites), ConfigError);
    const std::vector<FuzzyRule> ok{{0, 0, {0, 0}}};
    CHECK_THROWS_AS(fuzzy_system_eval(8, {100000, 0}, ok, times, sites), NoActivationError);
}
