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

#include "mocop/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "mocop/error.hpp"
#include "mocop/random.hpp"

namespace mocop {

double aicc(double loglik, std::size_t k, std::size_t n)
{
    if (n <= k + 1) {
        throw DomainError("AIC-c needs n > k + 1 (n = " + std::to_string(n) + ", k = " + std::to_string(k) + ")");
    }
    const auto kd = static_cast<double>(k);
    const auto nd = static_cast<double>(n);
    return 2.0 * kd - 2.0 * loglik + 2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
}

double empirical_copula(std::span<const UnitPair> sample, UnitPair p)
{
    if (sample.empty()) {
        throw InputError("empirical copula of an empty sample");
    }
    const auto count = std::count_if(sample.begin(), sample.end(), [&](const UnitPair& q) { return q.u <= p.u && q.v <= p.v; });
    return static_cast<double>(count) / static_cast<double>(sample.size());
}

std::vector<double> empirical_copula_at_sample(std::span<const UnitPair> sample)
{
    const std::size_t n = sample.size();
    std::vector<double> vs(n);
    std::transform(sample.begin(), sample.end(), vs.begin(), [](const UnitPair& p) { return p.v; });
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample[a].u < sample[b].u; });

    // Fenwick tree over v ranks.
    std::vector<std::size_t> tree(vs.size() + 1, 0);
    auto rank_of = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin()) + 1;
    };
    auto add = [&](std::size_t i) {
        for (; i < tree.size(); i += i & (~i + 1)) {
            ++tree[i];
        }
    };
    auto prefix = [&](std::size_t i) {
        std::size_t total = 0;
        for (; i > 0; i -= i & (~i + 1)) {
            total += tree[i];
        }
        return total;
    };

    std::vector<double> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && sample[order[j]].u == sample[order[i]].u) {
            add(rank_of(sample[order[j]].v));
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) {
            out[order[k]] = static_cast<double>(prefix(rank_of(sample[order[k]].v))) / static_cast<double>(n);
        }
        i = j;
    }
    return out;
}

double cvm_statistic(std::span<const UnitPair> sample, const CopulaSpec& fitted)
{
    const auto empirical = empirical_copula_at_sample(sample);
    double total = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double d = empirical[i] - cdf(fitted, sample[i]);
        total += d * d;
    }
    return total;
}

namespace {

// Statistic of one bootstrap replicate drawn from `model`.
double replicate_statistic(const CopulaSpec& model, Family family, std::size_t n, std::uint64_t stream,
                           const BootstrapOptions& options)
{
    const auto raw = sample(model, n, options.seed, stream);
    const auto ranked = rank_pairs(raw, options.ranking);
    const auto pseudo = classify_complete(ranked, options.tie_tol);
    NumericOptions numeric = options.numeric;
    numeric.seed = derive_seed(options.seed, stream);
    const auto fit = fit_family(family, pseudo, numeric);
    return cvm_statistic(pseudo.pairs, fit.spec);
}

} // namespace

GofReport bootstrap_pvalue(const PseudoSample& sample, Family family, const BootstrapOptions& options)
{
    if (options.replicates < 100) {
        throw DomainError("bootstrap needs at least 100 replicates, got " + std::to_string(options.replicates));
    }
    GofReport report;
    report.replicates = options.replicates;
    report.seed = options.seed;
    NumericOptions numeric = options.numeric;
    numeric.seed = options.seed;
    report.fitted = fit_family(family, sample, numeric);
    report.statistic = cvm_statistic(sample.pairs, report.fitted.spec);

    const std::size_t n = sample.size();
    const std::size_t total = options.replicates;
    std::vector<double> stats(total, 0.0);
    std::vector<unsigned char> failed(total, 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            // Streams 1..R for first attempts, R+1..2R for the single retry.
            try {
                stats[i] = replicate_statistic(report.fitted.spec, family, n, i + 1, options);
                continue;
            } catch (const std::exception&) {
            }
            try {
                stats[i] = replicate_statistic(report.fitted.spec, family, n, total + i + 1, options);
            } catch (const std::exception&) {
                failed[i] = 1;
            }
        }
    };

    std::size_t threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, total);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t i = 0; i < total; ++i) {
        if (failed[i] != 0) {
            ++report.failed_replicates;
            ++report.exceedances;
            report.warnings.push_back("replicate " + std::to_string(i + 1) + " failed twice; counted as exceedance");
        } else if (stats[i] >= report.statistic) {
            ++report.exceedances;
        }
    }
    const auto exceed = static_cast<double>(report.exceedances);
    const auto reps = static_cast<double>(total);
    report.p_value = options.continuity_correction ? (1.0 + exceed) / (1.0 + reps) : exceed / reps;
    return report;
}

} // namespace mocop
