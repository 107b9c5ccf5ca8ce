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

#include "mocop/marginals.hpp"

#include <algorithm>
#include <cmath>

#include "mocop/error.hpp"

namespace mocop {

MarginalEstimate::MarginalEstimate(MarginMethod method, std::vector<double> support, std::vector<double> values,
                                   std::size_t n)
    : method_(method), support_(std::move(support)), values_(std::move(values)), n_(n)
{
    if (n_ == 0) {
        throw InputError("marginal estimate needs at least one observation");
    }
}

double MarginalEstimate::rescale_factor() const
{
    return static_cast<double>(n_) / static_cast<double>(n_ + 1);
}

double MarginalEstimate::floor_value() const
{
    return 1.0 / static_cast<double>(n_ + 1);
}

double MarginalEstimate::ceiling_value() const
{
    return static_cast<double>(n_) / static_cast<double>(n_ + 1);
}

double MarginalEstimate::operator()(double t) const
{
    const auto it = std::upper_bound(support_.begin(), support_.end(), t);
    double raw = 0.0;
    if (it != support_.begin()) {
        raw = values_[static_cast<std::size_t>(std::distance(support_.begin(), it)) - 1];
    }
    return std::clamp(raw * rescale_factor(), floor_value(), ceiling_value());
}

MarginalEstimate empirical_cdf(std::span<const double> times)
{
    if (times.empty()) {
        throw InputError("empirical CDF of an empty sample");
    }
    std::vector<double> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<double> support;
    std::vector<double> values;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        // Maximal rank for tied times.
        if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
            support.push_back(sorted[i]);
            values.push_back(static_cast<double>(i + 1) / n);
        }
    }
    return {MarginMethod::Empirical, std::move(support), std::move(values), sorted.size()};
}

MarginalEstimate kaplan_meier(std::span<const TimeObservation> obs)
{
    if (obs.empty()) {
        throw InputError("Kaplan-Meier estimate of an empty sample");
    }
    std::vector<TimeObservation> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    if (std::none_of(sorted.begin(), sorted.end(), [](const auto& o) { return o.observed; })) {
        throw InputError("Kaplan-Meier estimate needs at least one observed failure");
    }

    std::vector<double> support;
    std::vector<double> values;
    double survival = 1.0;
    std::size_t at_risk = sorted.size();
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double t = sorted[i].time;
        std::size_t failures = 0;
        std::size_t leaving = 0;
        while (i < sorted.size() && sorted[i].time == t) {
            failures += sorted[i].observed ? 1 : 0;
            ++leaving;
            ++i;
        }
        if (failures > 0) {
            survival *= 1.0 - static_cast<double>(failures) / static_cast<double>(at_risk);
            support.push_back(t);
            values.push_back(1.0 - survival);
        }
        at_risk -= leaving;
    }
    return {MarginMethod::KaplanMeier, std::move(support), std::move(values), sorted.size()};
}

namespace {

MarginalEstimate estimate(std::span<const TimeObservation> obs, bool censored)
{
    if (censored) {
        return kaplan_meier(obs);
    }
    std::vector<double> times;
    times.reserve(obs.size());
    for (const auto& o : obs) {
        times.push_back(o.time);
    }
    return empirical_cdf(times);
}

void check_times(std::span<const TimeObservation> obs, char side)
{
    for (const auto& o : obs) {
        if (!(o.time > 0.0) || !std::isfinite(o.time)) {
            throw InputError(std::string("non-positive or non-finite ") + side + " time " + std::to_string(o.time));
        }
    }
}

} // namespace

std::vector<PseudoObservation> pseudo_observations(std::span<const TimeObservation> x_obs,
                                                   std::span<const TimeObservation> y_obs, bool censored,
                                                   MarginMode mode)
{
    if (x_obs.size() != y_obs.size()) {
        throw InputError("pseudo-observations need paired samples of equal length (" + std::to_string(x_obs.size()) +
                         " vs " + std::to_string(y_obs.size()) + ")");
    }
    if (x_obs.empty()) {
        throw InputError("pseudo-observations of an empty sample");
    }
    check_times(x_obs, 'x');
    check_times(y_obs, 'y');

    std::vector<PseudoObservation> out;
    out.reserve(x_obs.size());
    auto emit = [&](const MarginalEstimate& fx, const MarginalEstimate& fy) {
        for (std::size_t i = 0; i < x_obs.size(); ++i) {
            out.push_back({{fx(x_obs[i].time), fy(y_obs[i].time)}, x_obs[i].observed, y_obs[i].observed});
        }
    };
    if (mode == MarginMode::Pooled) {
        std::vector<TimeObservation> both(x_obs.begin(), x_obs.end());
        both.insert(both.end(), y_obs.begin(), y_obs.end());
        const auto f = estimate(both, censored);
        emit(f, f);
    } else {
        emit(estimate(x_obs, censored), estimate(y_obs, censored));
    }
    return out;
}

std::vector<UnitPair> rank_pairs(std::span<const UnitPair> raw, MarginMode mode)
{
    if (raw.empty()) {
        throw InputError("cannot rank an empty sample");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(raw.size());
    ys.reserve(raw.size());
    for (const auto& p : raw) {
        xs.push_back(p.u);
        ys.push_back(p.v);
    }
    std::vector<UnitPair> out;
    out.reserve(raw.size());
    if (mode == MarginMode::Pooled) {
        std::vector<double> both = xs;
        both.insert(both.end(), ys.begin(), ys.end());
        const auto f = empirical_cdf(both);
        for (const auto& p : raw) {
            out.push_back({f(p.u), f(p.v)});
        }
    } else {
        const auto fx = empirical_cdf(xs);
        const auto fy = empirical_cdf(ys);
        for (const auto& p : raw) {
            out.push_back({fx(p.u), fy(p.v)});
        }
    }
    return out;
}

} // namespace mocop
