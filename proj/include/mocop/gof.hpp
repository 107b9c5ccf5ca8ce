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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mocop/copula.hpp"
#include "mocop/estimation.hpp"
#include "mocop/marginals.hpp"

namespace mocop {

/// Small-sample corrected AIC: 2k - 2 loglik + 2k(k+1)/(n-k-1). Requires n > k + 1.
double aicc(double loglik, std::size_t k, std::size_t n);

/// C_n(u, v) = #{i : u_i <= u, v_i <= v} / n.
double empirical_copula(std::span<const UnitPair> sample, UnitPair p);

/// C_n evaluated at every sample point, O(n log n).
std::vector<double> empirical_copula_at_sample(std::span<const UnitPair> sample);

/// Rank-sum Cramer-von Mises distance: sum_i [C_n(u_i, v_i) - C(u_i, v_i)]^2.
double cvm_statistic(std::span<const UnitPair> sample, const CopulaSpec& fitted);

struct BootstrapOptions {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    MarginMode ranking = MarginMode::Pooled; ///< must match how the observed sample was built
    double tie_tol = 0.0;
    bool continuity_correction = true; ///< p = (1 + #exceed) / (1 + R)
    std::size_t threads = 0;           ///< 0: hardware concurrency
    NumericOptions numeric;
};

struct GofReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    FitResult fitted;
    std::size_t exceedances = 0;
    std::size_t failed_replicates = 0; ///< counted as exceedances
    std::vector<std::string> warnings;
};

/// Parametric bootstrap p-value of the Cramer-von Mises statistic. Each replicate
/// draws from the fitted copula, re-ranks, re-fits with the same estimator and
/// recomputes the statistic; replicate i uses stream i of the seed, so the result
/// does not depend on the thread count. Requires replicates >= 100.
GofReport bootstrap_pvalue(const PseudoSample& sample, Family family, const BootstrapOptions& options = {});

} // namespace mocop
