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
#include <stdexcept>
#include <string>
#include <vector>

#include "mocop/copula.hpp"
#include "mocop/marginals.hpp"

namespace mocop {

/// Complete-sample pseudo-observations with the MO sufficient statistics.
struct PseudoSample {
    std::vector<UnitPair> pairs;
    std::size_t n1 = 0;  ///< #{u < v}
    std::size_t n2 = 0;  ///< #{u > v}
    std::size_t n3 = 0;  ///< #{u == v} (within the tie tolerance)
    double s_min = 0.0;  ///< sum of min(-ln u, -ln v)

    std::size_t size() const { return pairs.size(); }
};

/// Throws InputError if a coordinate lies outside the open unit interval.
PseudoSample classify_complete(std::span<const UnitPair> pairs, double tie_tol = 0.0);

enum class FitMethod { ClosedForm, Numeric };

std::string_view method_name(FitMethod method);

struct FitFlags {
    bool boundary_estimate = false;
    bool no_ties = false;
    bool degenerate_sample = false;

    bool any() const { return boundary_estimate || no_ties || degenerate_sample; }
};

struct FitResult {
    CopulaSpec spec = CopulaSpec::mo(0.0);
    double loglik = 0.0;
    double aic_c = 0.0; ///< NaN when n <= k + 1
    FitMethod method = FitMethod::ClosedForm;
    FitFlags flags;
    std::size_t n = 0;
};

/// Numeric optimisation did not converge; carries the best point found.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, FitResult best) : std::runtime_error(what), best_(std::move(best)) {}
    const FitResult& best() const { return best_; }

private:
    FitResult best_;
};

/// Full MO log-likelihood, the sum of ln mo_density over the sample. Up to a
/// theta-free term this is (n1+n2) ln(1-theta) + n3 ln(theta) + sum ln C_theta.
double mo_loglik_complete(double theta, const PseudoSample& sample);

/// Closed-form MO estimator on a complete sample.
///
/// With n3 > 0 the estimate is the positive root of the score equation. With n3 == 0
/// the likelihood is (n) ln(1-theta) + theta * S_min: the maximiser is 1 - n/S_min
/// when S_min > n and the boundary 0 otherwise (always the case for rank data).
FitResult fit_mo_complete(const PseudoSample& sample);

/// How censored coordinates enter the log-transformed sums.
enum class CensorContribution {
    LogTransformed, ///< -ln of the pseudo-observation at the censoring time
    Literal,        ///< the raw censoring time t*
};

struct CensoredSample {
    std::vector<PseudoObservation> pairs;
    double t_star = 0.0;
    CensorContribution contribution = CensorContribution::LogTransformed;
    double tie_tol = 0.0;

    std::size_t n = 0;
    std::size_t m = 0;  ///< both failures observed
    std::size_t r = 0;  ///< X failed, Y censored
    std::size_t s = 0;  ///< Y failed, X censored
    std::size_t m1 = 0; ///< among the m: u < v
    std::size_t m2 = 0; ///< among the m: u > v
    std::size_t m3 = 0; ///< among the m: u == v
    double censor_x = 0.0; ///< contribution of a censored X coordinate
    double censor_y = 0.0; ///< contribution of a censored Y coordinate
    double s1 = 0.0;
    double s2 = 0.0;
    double s_max = 0.0;
    double s_min = 0.0; ///< s1 + s2 - s_max
};

/// Counts and sums for the type-I censored likelihood. Throws InputError when the
/// indicators are inconsistent: censored coordinates of one margin must share a
/// single value (the estimate at t*) that no observed coordinate exceeds.
CensoredSample classify_censored(std::span<const PseudoObservation> pairs, double t_star,
                                 CensorContribution contribution = CensorContribution::LogTransformed,
                                 double tie_tol = 0.0);

/// Censored log-likelihood in its summary-statistic form (additive constant 0):
/// (m1+m2+r+s) ln(1-theta) + m3 ln(theta) - (1-theta)(S1+S2) - theta S_max.
double mo_loglik_censored(double theta, const CensoredSample& sample);

/// The same function of psi = logit(theta), with its first two derivatives.
struct LogitLikelihood {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

LogitLikelihood mo_loglik_censored_logit(double psi, const CensoredSample& sample);

/// Term-by-term censored likelihood: ln c for pairs with both failures observed,
/// ln dC/dv when only Y failed, ln dC/du when only X failed, ln C when both are
/// censored. Single-censored points on the diagonal use the one-sided derivative
/// from the side where the failed coordinate is the larger one.
///
/// Agrees with mo_loglik_censored up to a theta-free constant whenever, for every
/// single-censored pair, the failed coordinate is not below the censored one.
double mo_loglik_censored_terms(double theta, std::span<const PseudoObservation> pairs);

/// Closed-form MO estimator for type-I censored samples. The reported log-likelihood
/// adds back the theta-free terms, so without censoring it equals the complete one.
/// Throws DegenerateSampleError when no pair has both failures observed.
FitResult fit_mo_censored(const CensoredSample& sample);

struct NumericOptions {
    std::uint64_t seed = 0;
    std::size_t starts = 5;
    std::size_t max_iterations = 5000;
};

/// Pseudo maximum likelihood for the comparison families (not MO), multi-start.
/// Throws FitError if the best start did not converge.
FitResult fit_numeric(Family family, const PseudoSample& sample, const NumericOptions& options = {});

/// Closed form for MO, fit_numeric otherwise.
FitResult fit_family(Family family, const PseudoSample& sample, const NumericOptions& options = {});

/// Interpretation of theta: above 0.5 systematic shocks dominate idiosyncratic ones.
std::string_view shock_verdict(double theta);

} // namespace mocop
