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
#include "mocop/gof.hpp"
#include "mocop/random.hpp"
#include "oracles.hpp"
#include "simulation.hpp"

using namespace mocop;

TEST_CASE("aicc arithmetic")
{
    CHECK(aicc(10.0, 1, 100) == doctest::Approx(-17.9592).epsilon(1e-4 / 17.9592));
    CHECK(aicc(10.0, 1, 100) == doctest::Approx(2.0 - 20.0 + 4.0 / 98.0).epsilon(1e-15));
    CHECK(aicc(0.0, 0, 7) == 0.0);
    CHECK_THROWS_AS(aicc(1.0, 1, 2), DomainError);
    CHECK_THROWS_AS(aicc(1.0, 5, 6), DomainError);
}

TEST_CASE("empirical copula")
{
    const std::vector<UnitPair> s{{0.25, 0.25}, {0.5, 0.75}, {0.75, 0.5}};
    CHECK(empirical_copula(s, {1.0, 1.0}) == 1.0);
    CHECK(empirical_copula(s, {0.0, 0.0}) == 0.0);
    CHECK(empirical_copula(s, {0.5, 0.75}) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(empirical_copula(std::vector<UnitPair>{}, {0.5, 0.5}), InputError);

    const auto at = empirical_copula_at_sample(s);
    CHECK(at[0] == doctest::Approx(1.0 / 3.0));
    CHECK(at[1] == doctest::Approx(2.0 / 3.0));
    CHECK(at[2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fast empirical copula matches the naive count, ties included")
{
    Rng rng(12);
    std::vector<UnitPair> s;
    for (int i = 0; i < 700; ++i) {
        // Coarse grid forces ties in u, in v and on the diagonal.
        const double u = (1.0 + std::floor(25.0 * rng.uniform())) / 27.0;
        const double v = i % 5 == 0 ? u : (1.0 + std::floor(25.0 * rng.uniform())) / 27.0;
        s.push_back({u, v});
    }
    const auto fast = empirical_copula_at_sample(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(fast[i] == oracle::empirical_copula_naive(s, s[i].u, s[i].v));
    }
}

TEST_CASE("Cramer-von Mises statistic")
{
    CHECK(cvm_statistic(std::vector<UnitPair>{{0.5, 0.5}}, CopulaSpec::mo(0.0)) == doctest::Approx(0.5625));

    // Three points where the comonotone copula reproduces C_n exactly: min(i/3, i/3) = i/3.
    const std::vector<UnitPair> diag{{1.0 / 3.0, 1.0 / 3.0}, {2.0 / 3.0, 2.0 / 3.0}, {1.0, 1.0}};
    CHECK(cvm_statistic(diag, CopulaSpec::mo(1.0)) == doctest::Approx(0.0));

    const auto s = sim::complete_mo(0.6, 400, 4);
    CHECK(cvm_statistic(s.pairs, CopulaSpec::mo(0.6)) < cvm_statistic(s.pairs, CopulaSpec::mo(0.0)));
}

TEST_CASE("bootstrap p-value")
{
    const auto s = sim::complete_mo(0.7, 150, 21);
    BootstrapOptions options;
    options.replicates = 100;
    options.seed = 5;

    const auto a = bootstrap_pvalue(s, Family::MO, options);
    CHECK(a.replicates == 100);
    CHECK(a.p_value > 0.0);
    CHECK(a.p_value <= 1.0);
    CHECK(a.p_value == doctest::Approx((1.0 + static_cast<double>(a.exceedances)) / 101.0));
    CHECK(a.failed_replicates == 0);
    CHECK(a.fitted.spec.params()[0] == fit_mo_complete(s).spec.params()[0]);

    SUBCASE("deterministic across reruns and thread counts")
    {
        options.threads = 1;
        const auto b = bootstrap_pvalue(s, Family::MO, options);
        options.threads = 3;
        const auto c = bootstrap_pvalue(s, Family::MO, options);
        CHECK(a.p_value == b.p_value);
        CHECK(b.p_value == c.p_value);
        CHECK(b.statistic == c.statistic);
    }
    SUBCASE("invariant to the order of the sample")
    {
        auto shuffled = s.pairs;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + 37, shuffled.end());
        const auto b = bootstrap_pvalue(classify_complete(shuffled), Family::MO, options);
        CHECK(b.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
        CHECK(b.p_value == a.p_value);
    }
    SUBCASE("without continuity correction")
    {
        options.continuity_correction = false;
        const auto b = bootstrap_pvalue(s, Family::MO, options);
        CHECK(b.p_value == doctest::Approx(static_cast<double>(b.exceedances) / 100.0));
    }
    SUBCASE("too few replicates")
    {
        options.replicates = 99;
        CHECK_THROWS_AS(bootstrap_pvalue(s, Family::MO, options), DomainError);
    }
}

TEST_CASE("bootstrap rejects a badly misspecified family")
{
    const auto s = sim::complete_mo(0.8, 300, 33);
    BootstrapOptions options;
    options.replicates = 100;
    options.seed = 1;
    const auto gauss = bootstrap_pvalue(s, Family::Gaussian, options);
    const auto mo = bootstrap_pvalue(s, Family::MO, options);
    CHECK(gauss.p_value < 0.05);
    CHECK(mo.p_value > gauss.p_value);
}
