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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
// Usage: acceptance [--quick] [--only N]
//   --quick  100 bootstrap replicates instead of 1000 for criterion 7.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mocop/copula.hpp"
#include "mocop/estimation.hpp"
#include "mocop/gof.hpp"
#include "oracles.hpp"
#include "simulation.hpp"

using namespace mocop;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

Outcome tail_dependence_reproduction()
{
    const double tol = 1e-3;
    const double r[] = {1.33, 1.41, 1.45};
    const double expected[] = {0.316, 0.365, 0.387};
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
        const double upper = tail_dependence(CopulaSpec::gumbel(r[i])).upper;
        pass = pass && std::abs(upper - expected[i]) <= tol;
        detail += fmt("r=%.2f chi_u=%.4f (want %.3f) ", r[i], upper, expected[i]);
    }
    return {pass, detail + fmt("tol=%.0e", tol)};
}

Outcome closed_form_vs_grid()
{
    const double tol = 1e-3;
    const double thetas[] = {0.2, 0.5, 0.8};
    const std::size_t sizes[] = {50, 200, 1000};
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        const auto s = sim::complete_mo(thetas[i % 3], sizes[(i / 3) % 3], 20000 + i);
        const double closed = fit_mo_complete(s).spec.param(0);
        worst = std::max(worst, std::abs(closed - oracle::mo_grid_argmax(s.pairs, 1e-4)));
    }
    return {worst <= tol, fmt("100 samples, max |closed - grid| = %.2e (tol %.0e)", worst, tol)};
}

Outcome censored_complete_reduction()
{
    const double tol = 1e-12;
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        const auto s = sim::complete_mo(0.05 + 0.018 * static_cast<double>(i), 50 + 20 * i, 30000 + i);
        const auto c = classify_censored(sim::all_observed(s), 1.0, CensorContribution::LogTransformed);
        worst = std::max(worst, std::abs(fit_mo_censored(c).spec.param(0) - fit_mo_complete(s).spec.param(0)));
    }
    return {worst <= tol, fmt("50 samples, max |censored - complete| = %.2e (tol %.0e)", worst, tol)};
}

Outcome consistency()
{
    const double tol = 0.03;
    const std::size_t sizes[] = {250, 1000, 2000};
    double mean_error[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
        for (std::size_t rep = 0; rep < 50; ++rep) {
            const auto s = sim::complete_mo(0.5, sizes[k], 40000 + 1000 * static_cast<std::uint64_t>(k) + rep);
            mean_error[k] += std::abs(fit_mo_complete(s).spec.param(0) - 0.5) / 50.0;
        }
    }
    const bool monotone = mean_error[0] > mean_error[1] && mean_error[1] > mean_error[2];
    return {mean_error[2] < tol && monotone,
            fmt("mean |err| n=250: %.4f, n=1000: %.4f, n=2000: %.4f (need < %.2f at 2000, decreasing)", mean_error[0],
                mean_error[1], mean_error[2], tol)};
}

Outcome singular_mass()
{
    const std::size_t n = 100000;
    const auto draws = sample(CopulaSpec::mo(0.5), n, 50000);
    const auto ties = std::count_if(draws.begin(), draws.end(), [](const UnitPair& p) { return p.u == p.v; });
    const double fraction = static_cast<double>(ties) / static_cast<double>(n);
    const double p = 1.0 / 3.0;
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
    return {std::abs(fraction - p) <= 3 * se, fmt("tie fraction %.5f vs 1/3, |diff| = %.5f, 3 SE = %.5f", fraction,
                                                  std::abs(fraction - p), 3 * se)};
}

Outcome density_validity()
{
    const double tol = 1e-6;
    boost::math::quadrature::tanh_sinh<double> q;
    bool pass = true;
    std::string detail;
    for (double theta : {0.1, 0.5, 0.9}) {
        auto outer = [&](double u) {
            return q.integrate([&](double v) { return mo_density(theta, {u, v}); }, 0.0, u);
        };
        const double continuous = 2.0 * q.integrate(outer, 0.0, 1.0);
        const double diagonal = q.integrate([&](double u) { return mo_density(theta, {u, u}); }, 0.0, 1.0);
        const double total = continuous + diagonal;
        pass = pass && std::abs(total - 1.0) <= tol;
        detail += fmt("theta=%.1f mass=%.10f ", theta, total);
    }
    return {pass, detail + fmt("(tol %.0e)", tol)};
}

Outcome gof_size_power(std::size_t replicates)
{
    std::size_t mo_kept = 0;
    std::size_t gauss_rejected = 0;
    for (std::size_t run = 0; run < 100; ++run) {
        const auto s = sim::complete_mo(0.7, 500, 60000 + run);
        BootstrapOptions options;
        options.replicates = replicates;
        options.seed = run;
        mo_kept += bootstrap_pvalue(s, Family::MO, options).p_value > 0.05 ? 1 : 0;
        gauss_rejected += bootstrap_pvalue(s, Family::Gaussian, options).p_value < 0.05 ? 1 : 0;
    }
    return {mo_kept >= 90 && gauss_rejected >= 80,
            fmt("%zu replicates: MO p > 0.05 in %zu/100 (need >= 90), Gaussian p < 0.05 in %zu/100 (need >= 80)",
                replicates, mo_kept, gauss_rejected)};
}

Outcome censoring_direction()
{
    // Most banks never fail: 70% of each margin censored.
    const double cutoff = 0.3;
    std::size_t higher = 0;
    double mean_censored = 0.0;
    double mean_complete = 0.0;
    for (std::size_t run = 0; run < 50; ++run) {
        const auto cohort = sim::censored_mo(0.6, 2000, cutoff, 70000 + run);
        const double censored = fit_mo_censored(cohort.censored).spec.param(0);
        const double complete = fit_mo_complete(cohort.complete_subsample).spec.param(0);
        higher += censored >= complete ? 1 : 0;
        mean_censored += censored / 50.0;
        mean_complete += complete / 50.0;
    }
    return {higher >= 40, fmt("theta_c >= theta_complete in %zu/50 (need >= 40); means %.4f vs %.4f", higher,
                              mean_censored, mean_complete)};
}

Outcome aicc_arithmetic()
{
    const double value = aicc(10.0, 1, 100);
    return {std::abs(value + 17.9592) <= 1e-4, fmt("aicc(10, 1, 100) = %.6f (want -17.9592 +- 1e-4)", value)};
}

} // namespace

int main(int argc, char** argv)
{
    bool quick = false;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--quick] [--only N]\n");
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"tail dependence of Gumbel fits", tail_dependence_reproduction},
        {"closed form vs grid argmax", closed_form_vs_grid},
        {"censored estimator reduces to complete", censored_complete_reduction},
        {"estimator consistency", consistency},
        {"singular mass of the sampler", singular_mass},
        {"density integrates to one", density_validity},
        {"GOF size and power", [quick] { return gof_size_power(quick ? 100 : 1000); }},
        {"censoring raises the estimate", censoring_direction},
        {"AIC-c arithmetic", aicc_arithmetic},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i + 1) != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += outcome.pass ? 0 : 1;
        std::printf("AC%zu %s  %s: %s [%.1fs]\n", i + 1, outcome.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
