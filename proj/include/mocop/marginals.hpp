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
#include <span>
#include <vector>

#include "mocop/copula.hpp"

namespace mocop {

/// A failure time in years since the start of observation. `observed == false`
/// marks a right-censored entry (the bank had not failed when observation stopped).
struct TimeObservation {
    double time = 0.0;
    bool observed = true;
};

enum class MarginMethod { Empirical, KaplanMeier };

/// Step-function estimate of a marginal CDF, rescaled by n/(n+1) and kept inside
/// [1/(n+1), n/(n+1)] so pseudo-observations never reach 0 or 1.
class MarginalEstimate {
public:
    MarginalEstimate(MarginMethod method, std::vector<double> support, std::vector<double> values, std::size_t n);

    double operator()(double t) const;

    MarginMethod method() const { return method_; }
    std::span<const double> support() const { return support_; }
    std::size_t sample_size() const { return n_; }
    double rescale_factor() const;
    double floor_value() const;
    double ceiling_value() const;

private:
    MarginMethod method_;
    std::vector<double> support_; // distinct jump points, ascending
    std::vector<double> values_;  // unscaled CDF at each jump point
    std::size_t n_;
};

MarginalEstimate empirical_cdf(std::span<const double> times);

/// Kaplan-Meier. Censored entries tied with a failure time stay at risk at that time.
MarginalEstimate kaplan_meier(std::span<const TimeObservation> obs);

/// How the two margins are estimated.
///   Separate: one estimator per country.
///   Pooled:   one estimator from both countries together (exchangeable margins).
///             Equal failure times then map to equal pseudo-observations, which is
///             what places simultaneous failures on the MO diagonal.
enum class MarginMode { Separate, Pooled };

struct PseudoObservation {
    UnitPair p;
    bool delta_x = true; ///< X failure observed
    bool delta_y = true; ///< Y failure observed
};

std::vector<PseudoObservation> pseudo_observations(std::span<const TimeObservation> x_obs,
                                                   std::span<const TimeObservation> y_obs, bool censored,
                                                   MarginMode mode = MarginMode::Separate);

/// Replaces raw copula draws by rescaled ranks (empirical CDF with maximal ranks).
std::vector<UnitPair> rank_pairs(std::span<const UnitPair> raw, MarginMode mode);

} // namespace mocop
