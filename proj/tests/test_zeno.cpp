#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nqent/errors.hpp"
#include "nqent/zeno.hpp"
#include "oracles.hpp"

using namespace nqent;

TEST_CASE("schedules")
{
    CHECK_THROWS_AS(ZenoSchedule({0.0, 3}).validate(), ValidationError);
    CHECK_THROWS_AS(ZenoSchedule({1.0, 0}).validate(), ValidationError);
    CHECK(ZenoSchedule::covering(25.0, 0.1).count_N == 250);
    CHECK(ZenoSchedule::covering(25.0, 5.0).count_N == 5);
    CHECK(ZenoSchedule::covering(25.0, 7.0).count_N == 3);
    CHECK_THROWS_AS(ZenoSchedule::covering(1.0, 2.0), ValidationError);
}

TEST_CASE("one measurement changes nothing")
{
    const ModelParams p(4, 0.1);
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(std::abs(zeno_survival(p, {t, 1}) - std::norm(oracle::roots_survival(4, 0.1, t))) < 1e-13);
    }
}

TEST_CASE("survival after N measurements is the N-th power of one interval")
{
    const ModelParams p(3, 0.6);
    for (double t : {0.05, 0.4, 2.0}) {
        const double one = std::norm(oracle::roots_survival(3, 0.6, t));
        for (int count : {2, 7, 40}) {
            CHECK(std::abs(zeno_survival(p, {t, count}) - std::pow(one, count)) < 1e-13);
            CHECK(zeno_concurrence(p, {t, count}) == 2.0 / 3.0 * zeno_survival(p, {t, count}));
        }
    }
}

TEST_CASE("frequent measurement slows the decay")
{
    const ModelParams p(4, 0.1);
    double prev = -1.0;
    for (double t : {5.0, 1.0, 0.1}) {
        const double v = zeno_survival(p, ZenoSchedule::covering(25.0, t));
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > survival_probability(p, 25.0));
}

TEST_CASE("short-interval rate approaches n R^2 T")
{
    const ModelParams p(4, 0.1);
    for (double t : {1e-2, 1e-3, 1e-4}) {
        const double ratio = effective_decay_rate(p, t).gamma / t;
        CHECK(std::abs(ratio / 0.04 - 1.0) < 10.0 * t);
    }
}

TEST_CASE("measuring at a node of E destroys the state")
{
    const ModelParams p(4, 10.0);
    const double node = zero_crossings(p, 1)[0];
    const ZenoRate rate = effective_decay_rate(p, node);
    CHECK(rate.saturated);
    CHECK(std::isinf(rate.gamma));
    CHECK(zeno_survival(p, {node, 3}) == 0.0);
}

TEST_CASE("time-resolved Zeno concurrence")
{
    const ModelParams p(4, 0.1);
    // before the first measurement it is the free curve
    CHECK(std::abs(zeno_concurrence_at(p, 5.0, 3.0) - 0.5 * survival_probability(p, 3.0)) < 1e-15);
    // right at a measurement it equals the stroboscopic value
    CHECK(std::abs(zeno_concurrence_at(p, 1.0, 10.0) - zeno_concurrence(p, {1.0, 10})) < 1e-12);
    // between measurements: N completed, then free evolution of the remainder
    const double expect = 0.5 * std::pow(survival_probability(p, 1.0), 10) * survival_probability(p, 0.5);
    CHECK(std::abs(zeno_concurrence_at(p, 1.0, 10.5) - expect) < 1e-12);
    CHECK_THROWS_AS(zeno_concurrence_at(p, 1.0, -1.0), ValidationError);
}

TEST_CASE("effective rate at a short interval")
{
    // n R^2 T = 4e-4 for n = 4, R = 0.1, T = 0.01
    CHECK(std::abs(effective_decay_rate(ModelParams(4, 0.1), 0.01).gamma / 4e-4 - 1.0) < 0.05);
}

TEST_CASE("weak-coupling ordering over intervals up to one cavity time")
{
    const double intervals[] = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    for (int n : {2, 4, 8}) {
        for (double r : {0.02, 0.05, 0.1}) {
            const ModelParams p(n, r);
            for (std::size_t i = 1; i < std::size(intervals); ++i) {
                CHECK(zeno_survival(p, ZenoSchedule::covering(10.0, intervals[i - 1]))
                      >= zeno_survival(p, ZenoSchedule::covering(10.0, intervals[i])));
            }
        }
    }
}
