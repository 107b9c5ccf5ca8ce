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

#include "mocop/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mocop/error.hpp"
#include "mocop/gof.hpp"
#include "mocop/normal.hpp"
#include "mocop/optimize.hpp"
#include "mocop/random.hpp"

namespace mocop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPenalty = 1e300;

void require_open_theta(double theta)
{
    if (!(theta > 0.0 && theta < 1.0)) {
        throw DomainError("MO log-likelihood requires theta in (0, 1), got " + std::to_string(theta));
    }
}

double aicc_or_nan(double loglik, std::size_t k, std::size_t n)
{
    return n > k + 1 ? aicc(loglik, k, n) : kNaN;
}

// Positive root z = exp(-psi) of m3 z^2 - A z - K = 0, given A and the discriminant A^2 + 4 m3 K.
double logit_root(double a, double disc, double m3, double k)
{
    const double d = std::sqrt(disc);
    if (a >= 0.0) {
        return (a + d) / (2.0 * m3);
    }
    // A + D loses digits when A < 0; use (D^2 - A^2) / (D - A) = 4 m3 K / (D - A).
    return 2.0 * k / (d - a);
}

double sum_log_density(double theta, std::span<const UnitPair> pairs)
{
    double total = 0.0;
    for (const auto& p : pairs) {
        total += mo_log_density(theta, p);
    }
    return total;
}

FitResult make_mo_fit(double theta, const PseudoSample& sample, FitFlags flags)
{
    const double loglik = sum_log_density(theta, sample.pairs);
    return {CopulaSpec::mo(theta), loglik, aicc_or_nan(loglik, 1, sample.size()), FitMethod::ClosedForm, flags,
            sample.size()};
}

// Maximiser of K ln(1-theta) + theta S when there are no diagonal points.
double no_tie_maximiser(double k, double s)
{
    return s > k ? 1.0 - k / s : 0.0;
}

} // namespace

std::string_view method_name(FitMethod method)
{
    return method == FitMethod::ClosedForm ? "closed-form" : "numeric";
}

PseudoSample classify_complete(std::span<const UnitPair> pairs, double tie_tol)
{
    if (tie_tol < 0.0 || !std::isfinite(tie_tol)) {
        throw DomainError("tie tolerance must be a finite non-negative number");
    }
    PseudoSample out;
    out.pairs.assign(pairs.begin(), pairs.end());
    std::size_t index = 0;
    for (const auto& p : pairs) {
        ++index;
        if (!(p.u > 0.0 && p.u < 1.0 && p.v > 0.0 && p.v < 1.0)) {
            std::ostringstream msg;
            msg << "pseudo-observation " << index << " (" << p.u << ", " << p.v << ") outside (0, 1)^2";
            throw InputError(msg.str());
        }
        if (std::abs(p.u - p.v) <= tie_tol) {
            ++out.n3;
        } else if (p.u < p.v) {
            ++out.n1;
        } else {
            ++out.n2;
        }
        out.s_min += std::min(-std::log(p.u), -std::log(p.v));
    }
    return out;
}

double mo_loglik_complete(double theta, const PseudoSample& sample)
{
    require_open_theta(theta);
    return sum_log_density(theta, sample.pairs);
}

FitResult fit_mo_complete(const PseudoSample& sample)
{
    const auto n = static_cast<double>(sample.size());
    if (sample.size() == 0) {
        throw DegenerateSampleError("cannot fit the MO copula to an empty sample");
    }
    const double n3 = static_cast<double>(sample.n3);
    const double s = sample.s_min;
    FitFlags flags;
    if (sample.n3 == 0) {
        flags.no_ties = true;
        const double theta = no_tie_maximiser(n, s);
        flags.boundary_estimate = theta == 0.0;
        return make_mo_fit(theta, sample, flags);
    }
    if (sample.n1 + sample.n2 == 0) {
        flags.boundary_estimate = true;
        return make_mo_fit(1.0, sample, flags);
    }
    const double a = n - 2.0 * n3 - s;
    const double disc = n * n + s * s - s * (2.0 * n - 4.0 * n3);
    const double z = logit_root(a, disc, n3, n - n3);
    return make_mo_fit(1.0 / (1.0 + z), sample, flags);
}

CensoredSample classify_censored(std::span<const PseudoObservation> pairs, double t_star,
                                 CensorContribution contribution, double tie_tol)
{
    if (pairs.empty()) {
        throw InputError("censored sample is empty");
    }
    if (tie_tol < 0.0 || !std::isfinite(tie_tol)) {
        throw DomainError("tie tolerance must be a finite non-negative number");
    }
    if (contribution == CensorContribution::Literal && !(t_star > 0.0 && std::isfinite(t_star))) {
        throw InputError("literal censoring contribution needs a positive censoring time t*");
    }

    CensoredSample out;
    out.pairs.assign(pairs.begin(), pairs.end());
    out.t_star = t_star;
    out.contribution = contribution;
    out.n = pairs.size();
    out.tie_tol = tie_tol;

    double cens_u = kNaN;
    double cens_v = kNaN;
    double max_obs_u = 0.0;
    double max_obs_v = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& o = pairs[i];
        if (!(o.p.u > 0.0 && o.p.u < 1.0 && o.p.v > 0.0 && o.p.v < 1.0)) {
            throw InputError("censored pseudo-observation " + std::to_string(i + 1) + " outside (0, 1)^2");
        }
        auto track = [&](bool observed, double value, double& censor, double& max_obs, char side) {
            if (observed) {
                max_obs = std::max(max_obs, value);
                return;
            }
            if (std::isnan(censor)) {
                censor = value;
            } else if (censor != value) {
                throw InputError(std::string("censored ") + side + " coordinates disagree (" + std::to_string(censor) +
                                 " vs " + std::to_string(value) + "); all must sit at the estimate for t*");
            }
        };
        track(o.delta_x, o.p.u, cens_u, max_obs_u, 'X');
        track(o.delta_y, o.p.v, cens_v, max_obs_v, 'Y');
    }
    if (!std::isnan(cens_u) && max_obs_u > cens_u) {
        throw InputError("an observed X failure lies beyond the censoring point");
    }
    if (!std::isnan(cens_v) && max_obs_v > cens_v) {
        throw InputError("an observed Y failure lies beyond the censoring point");
    }

    if (contribution == CensorContribution::Literal) {
        out.censor_x = t_star;
        out.censor_y = t_star;
    } else {
        out.censor_x = std::isnan(cens_u) ? 0.0 : -std::log(cens_u);
        out.censor_y = std::isnan(cens_v) ? 0.0 : -std::log(cens_v);
    }

    std::size_t both_censored = 0;
    for (const auto& o : pairs) {
        const double a = -std::log(o.p.u);
        const double b = -std::log(o.p.v);
        if (o.delta_x && o.delta_y) {
            ++out.m;
            if (std::abs(o.p.u - o.p.v) <= tie_tol) {
                ++out.m3;
            } else if (o.p.u < o.p.v) {
                ++out.m1;
            } else {
                ++out.m2;
            }
            out.s1 += a;
            out.s2 += b;
            out.s_max += std::max(a, b);
        } else if (o.delta_x) {
            ++out.r;
            out.s1 += a;
            out.s2 += out.censor_y;
            out.s_max += out.censor_y;
        } else if (o.delta_y) {
            ++out.s;
            out.s1 += out.censor_x;
            out.s2 += b;
            out.s_max += out.censor_x;
        } else {
            ++both_censored;
        }
    }
    const auto cc = static_cast<double>(both_censored);
    out.s1 += cc * out.censor_x;
    out.s2 += cc * out.censor_y;
    out.s_max += cc * std::max(out.censor_x, out.censor_y);
    out.s_min = out.s1 + out.s2 - out.s_max;
    return out;
}

double mo_loglik_censored(double theta, const CensoredSample& sample)
{
    require_open_theta(theta);
    const auto off_diagonal = static_cast<double>(sample.m1 + sample.m2 + sample.r + sample.s);
    return off_diagonal * std::log1p(-theta) + static_cast<double>(sample.m3) * std::log(theta) -
           (1.0 - theta) * (sample.s1 + sample.s2) - theta * sample.s_max;
}

LogitLikelihood mo_loglik_censored_logit(double psi, const CensoredSample& sample)
{
    const double e = std::exp(-psi);
    const double theta = 1.0 / (1.0 + e);
    const double one_minus = e / (1.0 + e);
    const auto off_diagonal = static_cast<double>(sample.m1 + sample.m2 + sample.r + sample.s);
    const auto failures = static_cast<double>(sample.m + sample.r + sample.s);
    LogitLikelihood out;
    out.value = -off_diagonal * psi - failures * std::log1p(e) - one_minus * (sample.s1 + sample.s2) -
                theta * sample.s_max;
    const double w = theta * one_minus;
    out.first = -off_diagonal + failures * one_minus + w * sample.s_min;
    out.second = -failures * w + w * (1.0 - 2.0 * theta) * sample.s_min;
    return out;
}

double mo_loglik_censored_terms(double theta, std::span<const PseudoObservation> pairs)
{
    require_open_theta(theta);
    const auto spec = CopulaSpec::mo(theta);
    double total = 0.0;
    for (const auto& o : pairs) {
        const auto& p = o.p;
        if (o.delta_x && o.delta_y) {
            total += std::log(mo_density(theta, p));
        } else if (o.delta_y) {
            // X censored: dC/dv. On the diagonal take the branch v < u.
            const double dv = p.u == p.v ? std::pow(p.u, 1.0 - theta) : mo_partials(theta, p).dv;
            total += std::log(dv);
        } else if (o.delta_x) {
            // Y censored: dC/du. On the diagonal take the branch u > v.
            const double du = p.u == p.v ? (1.0 - theta) * std::pow(p.u, -theta) * p.v : mo_partials(theta, p).du;
            total += std::log(du);
        } else {
            total += std::log(cdf(spec, p));
        }
    }
    return total;
}

FitResult fit_mo_censored(const CensoredSample& sample)
{
    if (sample.m == 0) {
        throw DegenerateSampleError("censored MO fit needs at least one pair with both failures observed (m = 0)");
    }
    const auto failures = static_cast<double>(sample.m + sample.r + sample.s);
    const auto m3 = static_cast<double>(sample.m3);
    const double k = failures - m3;
    const double s = sample.s_min;

    FitFlags flags;
    double theta = 0.0;
    if (sample.m3 == 0) {
        flags.no_ties = true;
        theta = no_tie_maximiser(k, s);
        flags.boundary_estimate = theta == 0.0;
    } else if (k == 0.0) {
        theta = 1.0;
        flags.boundary_estimate = true;
    } else {
        const double a = failures - 2.0 * m3 - s;
        const double disc = a * a + 4.0 * m3 * k;
        theta = 1.0 / (1.0 + logit_root(a, disc, m3, k));
    }

    // Restore the theta-free terms the closed sums drop, so the reported value is
    // on the same scale as the complete-sample likelihood: sum of -ln over observed
    // coordinates, counting a tied pair once.
    double offset = 0.0;
    for (const auto& o : sample.pairs) {
        const bool tied = o.delta_x && o.delta_y && std::abs(o.p.u - o.p.v) <= sample.tie_tol;
        offset += (o.delta_x ? -std::log(o.p.u) : 0.0) + (o.delta_y && !tied ? -std::log(o.p.v) : 0.0);
    }
    double loglik = 0.0;
    if (theta > 0.0 && theta < 1.0) {
        loglik = mo_loglik_censored(theta, sample);
    } else {
        // Boundary: evaluate by continuity, ln(0) terms give -inf where they occur.
        const auto off = static_cast<double>(sample.m1 + sample.m2 + sample.r + sample.s);
        const double log_one_minus = theta >= 1.0 ? -std::numeric_limits<double>::infinity() : 0.0;
        const double log_theta = theta <= 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
        loglik = (off > 0.0 ? off * log_one_minus : 0.0) + (m3 > 0.0 ? m3 * log_theta : 0.0) -
                 (1.0 - theta) * (sample.s1 + sample.s2) - theta * sample.s_max;
    }
    loglik += offset;
    return {CopulaSpec::mo(theta), loglik, aicc_or_nan(loglik, 1, sample.n), FitMethod::ClosedForm, flags, sample.n};
}

namespace {

struct Box {
    double lo;
    double hi;
};

constexpr Box kRhoBox{-0.999, 0.999};
constexpr Box kGumbelBox{1.0, 20.0};
constexpr Box kFrankBox{-35.0, 35.0};
constexpr Box kClaytonBox{1e-4, 20.0};

Box box_for(Family family)
{
    switch (family) {
    case Family::Gaussian:
        return kRhoBox;
    case Family::Gumbel:
        return kGumbelBox;
    case Family::Frank:
        return kFrankBox;
    case Family::Clayton:
        return kClaytonBox;
    default:
        throw DomainError("no scalar parameter box for " + std::string(family_name(family)));
    }
}

// Negative pseudo-log-likelihood of a one-parameter family, with per-sample
// transforms computed once.
std::function<double(double)> scalar_objective(Family family, const PseudoSample& sample)
{
    const auto& pairs = sample.pairs;
    const auto n = static_cast<double>(pairs.size());
    switch (family) {
    case Family::Gaussian: {
        double sum_sq = 0.0;
        double sum_cross = 0.0;
        for (const auto& p : pairs) {
            const double x = normal_quantile(p.u);
            const double y = normal_quantile(p.v);
            sum_sq += x * x + y * y;
            sum_cross += x * y;
        }
        return [=](double rho) {
            const double one_minus = 1.0 - rho * rho;
            return 0.5 * n * std::log(one_minus) + (rho * rho * sum_sq - 2.0 * rho * sum_cross) / (2.0 * one_minus);
        };
    }
    case Family::Gumbel:
    case Family::Frank:
    case Family::Clayton: {
        return [family, &pairs](double param) {
            const CopulaSpec spec(family, {param});
            double total = 0.0;
            for (const auto& p : pairs) {
                total += log_density(spec, p);
            }
            return std::isfinite(total) ? -total : kPenalty;
        };
    }
    default:
        throw DomainError("not a one-parameter comparison family: " + std::string(family_name(family)));
    }
}

bool near_edge(double x, Box box)
{
    const double tol = 1e-6 * (box.hi - box.lo);
    return x - box.lo < tol || box.hi - x < tol;
}

FitResult fit_scalar(Family family, const PseudoSample& sample, const NumericOptions& options)
{
    const Box box = box_for(family);
    const auto objective = scalar_objective(family, sample);
    const std::size_t starts = std::max<std::size_t>(options.starts, 1);
    const double width = (box.hi - box.lo) / static_cast<double>(starts);

    optimize::ScalarResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < starts; ++i) {
        const double lo = box.lo + width * static_cast<double>(i);
        const double hi = i + 1 == starts ? box.hi : lo + width;
        const auto res = optimize::golden_section(objective, lo, hi, 1e-9, options.max_iterations);
        if (res.value < best.value) {
            best = res;
        }
    }
    FitResult fit{CopulaSpec(family, {best.x}), -best.value, kNaN, FitMethod::Numeric, {}, sample.size()};
    fit.aic_c = aicc_or_nan(fit.loglik, 1, sample.size());
    fit.flags.boundary_estimate = near_edge(best.x, box);
    if (!best.converged) {
        throw FitError(std::string(family_name(family)) + " fit did not converge", fit);
    }
    return fit;
}

double logistic(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

double logit(double p)
{
    return std::log(p / (1.0 - p));
}

// Unconstrained coordinates -> (pi_F, pi_C, alpha, gamma, r).
std::vector<double> mixture_params(const std::vector<double>& x)
{
    const double top = std::max({x[0], x[1], 0.0});
    const double ef = std::exp(x[0] - top);
    const double ec = std::exp(x[1] - top);
    const double eg = std::exp(-top);
    const double total = ef + ec + eg;
    return {ef / total,
            ec / total,
            kFrankBox.hi * std::tanh(x[2]),
            kClaytonBox.lo + (kClaytonBox.hi - kClaytonBox.lo) * logistic(x[3]),
            kGumbelBox.lo + (kGumbelBox.hi - kGumbelBox.lo) * logistic(x[4])};
}

std::vector<double> mixture_coordinates(double pf, double pc, double alpha, double gamma, double r)
{
    const double pg = 1.0 - pf - pc;
    return {std::log(pf / pg), std::log(pc / pg), std::atanh(alpha / kFrankBox.hi),
            logit((gamma - kClaytonBox.lo) / (kClaytonBox.hi - kClaytonBox.lo)),
            logit((r - kGumbelBox.lo) / (kGumbelBox.hi - kGumbelBox.lo))};
}

FitResult fit_mixture(const PseudoSample& sample, const NumericOptions& options)
{
    const auto& pairs = sample.pairs;
    auto objective = [&pairs](const std::vector<double>& x) {
        const auto par = mixture_params(x);
        double pf = par[0];
        double pc = par[1];
        if (pf + pc > 1.0) {
            const double scale = 1.0 / (pf + pc);
            pf *= scale;
            pc *= scale;
        }
        const auto spec = CopulaSpec::mixture(pf, pc, par[2], par[3], par[4]);
        double total = 0.0;
        for (const auto& p : pairs) {
            total += log_density(spec, p);
        }
        return std::isfinite(total) ? -total : kPenalty;
    };

    Rng rng(options.seed, 0x6d6978ULL);
    optimize::SimplexOptions simplex;
    simplex.max_iterations = options.max_iterations;
    const std::size_t starts = std::max<std::size_t>(options.starts, 1);

    optimize::SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < starts; ++i) {
        std::vector<double> start;
        if (i == 0) {
            start = mixture_coordinates(1.0 / 3.0, 1.0 / 3.0, 2.0, 1.0, 1.5);
        } else {
            const double wf = rng.uniform();
            const double wc = rng.uniform() * (1.0 - wf);
            start = mixture_coordinates(std::max(wf * 0.98, 0.01), std::max(wc * 0.98, 0.01),
                                        -10.0 + 20.0 * rng.uniform(), 0.1 + 4.9 * rng.uniform(),
                                        1.05 + 2.95 * rng.uniform());
        }
        auto res = optimize::nelder_mead(objective, start, simplex);
        // One restart from the optimum shakes the simplex out of flat regions.
        res = optimize::nelder_mead(objective, res.x, simplex);
        if (res.value < best.value) {
            best = std::move(res);
        }
    }

    auto par = mixture_params(best.x);
    if (par[0] + par[1] > 1.0) {
        const double scale = 1.0 / (par[0] + par[1]);
        par[0] *= scale;
        par[1] *= scale;
    }
    FitResult fit{CopulaSpec(Family::FCGMixture, par), -best.value, kNaN, FitMethod::Numeric, {}, sample.size()};
    fit.aic_c = aicc_or_nan(fit.loglik, 5, sample.size());
    fit.flags.boundary_estimate = near_edge(par[2], kFrankBox) || near_edge(par[3], kClaytonBox) ||
                                  near_edge(par[4], kGumbelBox) || par[0] < 1e-6 || par[1] < 1e-6 ||
                                  par[0] + par[1] > 1.0 - 1e-6;
    if (!best.converged) {
        throw FitError("F+C+G mixture fit did not converge", fit);
    }
    return fit;
}

} // namespace

FitResult fit_numeric(Family family, const PseudoSample& sample, const NumericOptions& options)
{
    if (sample.size() == 0) {
        throw DegenerateSampleError("cannot fit a copula to an empty sample");
    }
    switch (family) {
    case Family::MO:
        throw DomainError("the MO copula is fitted in closed form, not numerically");
    case Family::FCGMixture:
        return fit_mixture(sample, options);
    default:
        return fit_scalar(family, sample, options);
    }
}

FitResult fit_family(Family family, const PseudoSample& sample, const NumericOptions& options)
{
    if (family == Family::MO) {
        return fit_mo_complete(sample);
    }
    return fit_numeric(family, sample, options);
}

std::string_view shock_verdict(double theta)
{
    if (theta > 0.5) {
        return "systematic dominates";
    }
    if (theta < 0.5) {
        return "idiosyncratic dominates";
    }
    return "balanced";
}

} // namespace mocop
