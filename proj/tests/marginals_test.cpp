/*
 * Copyright 2026 The mocop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mocop/error.hpp"
#include "mocop/marginals.hpp"
#include "mocop/random.hpp"

using namespace mocop;

TEST_CASE("empirical cdf uses the n/(n+1) rescale")
{
    const std::vector<double> times{1.0, 2.0, 3.0};
    const auto f = empirical_cdf(times);
    CHECK(f(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f(0.5) == doctest::Approx(0.25));
    CHECK(f(0.5) == f.floor_value());
    CHECK(f(3.0) == doctest::Approx(0.75));
    CHECK(f(100.0) == f.ceiling_value());
    CHECK(f(100.0) < 1.0);
    CHECK(f.method() == MarginMethod::Empirical);
    CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}), InputError);
}

TEST_CASE("empirical cdf gives tied times their maximal rank")
{
    const std::vector<double> times{4.0, 2.0, 2.0, 7.0};
    const auto f = empirical_cdf(times);
    CHECK(f(2.0) == doctest::Approx(0.5 * 0.8));
    CHECK(f.support().size() == 3);
}

TEST_CASE("Kaplan-Meier hand example")
{
    const std::vector<TimeObservation> obs{{1.0, true}, {2.0, false}, {3.0, true}};
    const auto f = kaplan_meier(obs);
    CHECK(f(1.0) == doctest::Approx((1.0 / 3.0) * 0.75));
    CHECK(f(2.5) == doctest::Approx((1.0 / 3.0) * 0.75));
    // Survival drops to 0 at t = 3; the rescale keeps the value interior.
    CHECK(f(3.0) == doctest::Approx(0.75));
    CHECK(f(3.0) < 1.0);
    CHECK(f(0.5) == f.floor_value());
    CHECK(f.method() == MarginMethod::KaplanMeier);
}

TEST_CASE("Kaplan-Meier keeps censored entries tied with a failure at risk")
{
    const std::vector<TimeObservation> obs{{2.0, true}, {2.0, false}, {5.0, true}, {5.0, false}};
    const auto f = kaplan_meier(obs);
    CHECK(f(2.0) == doctest::Approx(0.25 * 0.8));
    CHECK(f(5.0) == doctest::Approx((1.0 - 0.75 * 0.5) * 0.8));
}

TEST_CASE("Kaplan-Meier errors")
{
    CHECK_THROWS_AS(kaplan_meier(std::vector<TimeObservation>{}), InputError);
    CHECK_THROWS_AS(kaplan_meier(std::vector<TimeObservation>{{1.0, false}, {2.0, false}}), InputError);
}

TEST_CASE("Kaplan-Meier without censoring equals the empirical cdf")
{
    Rng rng(3);
    std::vector<double> times;
    std::vector<TimeObservation> obs;
    for (int i = 0; i < 200; ++i) {
        const double t = 1.0 + std::floor(20.0 * rng.uniform()); // plenty of ties
        times.push_back(t);
        obs.push_back({t, true});
    }
    const auto e = empirical_cdf(times);
    const auto k = kaplan_meier(obs);
    for (double t = 0.0; t < 23.0; t += 0.5) {
        CHECK(k(t) == doctest::Approx(e(t)).epsilon(1e-12));
    }
}

TEST_CASE("pseudo-observations")
{
    const std::vector<TimeObservation> x{{1.0, true}, {2.0, true}, {3.0, true}, {4.0, true}};
    const std::vector<TimeObservation> y{{4.0, true}, {3.0, true}, {2.0, true}, {1.0, true}};

    SUBCASE("distinct increasing times map to scaled ranks")
    {
        const auto p = pseudo_observations(x, y, false, MarginMode::Separate);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i].p.u == doctest::Approx(static_cast<double>(i + 1) / 5.0));
            CHECK(p[i].p.v == doctest::Approx(static_cast<double>(4 - i) / 5.0));
            CHECK(p[i].delta_x);
            CHECK(p[i].delta_y);
        }
    }
    SUBCASE("identical vectors lie on the diagonal in both modes")
    {
        for (auto mode : {MarginMode::Separate, MarginMode::Pooled}) {
            for (const auto& o : pseudo_observations(x, x, false, mode)) {
                CHECK(o.p.u == o.p.v);
            }
        }
    }
    SUBCASE("pooled margins map equal times to equal values")
    {
        const std::vector<TimeObservation> a{{1.0, true}, {5.0, true}, {9.0, true}};
        const std::vector<TimeObservation> b{{5.0, true}, {2.0, true}, {9.0, true}};
        const auto pooled = pseudo_observations(a, b, false, MarginMode::Pooled);
        CHECK(pooled[2].p.u == pooled[2].p.v);
        CHECK(pooled[1].p.u == pooled[0].p.v);
        CHECK(pooled[0].p.u == doctest::Approx(1.0 / 7.0));
    }
    SUBCASE("fully censored pair sits at the top value")
    {
        const std::vector<TimeObservation> a{{1.0, true}, {3.0, true}, {5.0, false}};
        const std::vector<TimeObservation> b{{2.0, true}, {5.0, true}, {5.0, false}};
        const auto sep = pseudo_observations(a, b, true, MarginMode::Separate);
        CHECK_FALSE(sep[2].delta_x);
        CHECK_FALSE(sep[2].delta_y);
        const auto fa = kaplan_meier(a);
        const auto fb = kaplan_meier(b);
        CHECK(sep[2].p.u == fa(5.0));
        CHECK(sep[2].p.v == fb(5.0));
        for (const auto& o : sep) {
            CHECK(o.p.u <= sep[2].p.u);
            CHECK(o.p.v <= sep[2].p.v);
        }
    }
    SUBCASE("errors")
    {
        const std::vector<TimeObservation> shorter{{1.0, true}};
        CHECK_THROWS_AS(pseudo_observations(x, shorter, false), InputError);
        const std::vector<TimeObservation> bad{{0.0, true}, {2.0, true}, {3.0, true}, {4.0, true}};
        CHECK_THROWS_AS(pseudo_observations(bad, y, false), InputError);
    }
}

TEST_CASE("pseudo-observations stay strictly inside the unit square")
{
    Rng rng(8);
    std::vector<TimeObservation> x;
    std::vector<TimeObservation> y;
    for (int i = 0; i < 300; ++i) {
        x.push_back({1.0 + std::floor(10.0 * rng.uniform()), rng.uniform() < 0.6});
        y.push_back({1.0 + std::floor(10.0 * rng.uniform()), rng.uniform() < 0.6});
    }
    for (bool censored : {false, true}) {
        for (auto mode : {MarginMode::Separate, MarginMode::Pooled}) {
            for (const auto& o : pseudo_observations(x, y, censored, mode)) {
                CHECK(o.p.u > 0.0);
                CHECK(o.p.u < 1.0);
                CHECK(o.p.v > 0.0);
                CHECK(o.p.v < 1.0);
            }
        }
    }
}

TEST_CASE("rank_pairs")
{
    const std::vector<UnitPair> raw{{0.9, 0.1}, {0.3, 0.3}, {0.5, 0.7}};
    const auto sep = rank_pairs(raw, MarginMode::Separate);
    CHECK(sep[0].u == doctest::Approx(0.75));
    CHECK(sep[0].v == doctest::Approx(0.25));
    CHECK(sep[1].u == doctest::Approx(0.25));
    const auto pooled = rank_pairs(raw, MarginMode::Pooled);
    CHECK(pooled[1].u == pooled[1].v);
    CHECK(pooled[0].u == doctest::Approx(6.0 / 7.0));
    CHECK(pooled[0].v == doctest::Approx(1.0 / 7.0));
    CHECK_THROWS_AS(rank_pairs(std::vector<UnitPair>{}, MarginMode::Pooled), InputError);
}
