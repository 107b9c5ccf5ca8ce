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

#include "mocop/copula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mocop/error.hpp"
#include "mocop/normal.hpp"
#include "mocop/random.hpp"

namespace mocop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<std::string_view, 1> kMoNames{"theta"};
constexpr std::array<std::string_view, 1> kGaussianNames{"rho"};
constexpr std::array<std::string_view, 1> kGumbelNames{"r"};
constexpr std::array<std::string_view, 1> kFrankNames{"alpha"};
constexpr std::array<std::string_view, 1> kClaytonNames{"gamma"};
constexpr std::array<std::string_view, 5> kMixtureNames{"pi_F", "pi_C", "alpha", "gamma", "r"};

[[noreturn]] void domain_fail(Family family, std::string_view param, double value, std::string_view expected)
{
    std::ostringstream msg;
    msg << family_name(family) << " parameter " << param << " = " << value << " outside domain " << expected;
    throw DomainError(msg.str());
}

void require_finite(Family family, std::string_view param, double value)
{
    if (!std::isfinite(value)) {
        domain_fail(family, param, value, "(finite)");
    }
}

void check_theta(Family f, double theta)
{
    require_finite(f, "theta", theta);
    if (theta < 0.0 || theta > 1.0) {
        domain_fail(f, "theta", theta, "[0, 1]");
    }
}

void check_rho(Family f, double rho)
{
    require_finite(f, "rho", rho);
    if (rho <= -1.0 || rho >= 1.0) {
        domain_fail(f, "rho", rho, "(-1, 1)");
    }
}

void check_gumbel(Family f, double r)
{
    require_finite(f, "r", r);
    if (r < 1.0) {
        domain_fail(f, "r", r, "[1, inf)");
    }
}

void check_clayton(Family f, double gamma)
{
    require_finite(f, "gamma", gamma);
    if (gamma <= 0.0) {
        domain_fail(f, "gamma", gamma, "(0, inf)");
    }
}

void validate(Family family, std::span<const double> params)
{
    if (params.size() != parameter_count(family)) {
        std::ostringstream msg;
        msg << family_name(family) << " expects " << parameter_count(family) << " parameter(s), got " << params.size();
        throw DomainError(msg.str());
    }
    switch (family) {
    case Family::MO:
        check_theta(family, params[0]);
        break;
    case Family::Gaussian:
        check_rho(family, params[0]);
        break;
    case Family::Gumbel:
        check_gumbel(family, params[0]);
        break;
    case Family::Frank:
        require_finite(family, "alpha", params[0]);
        break;
    case Family::Clayton:
        check_clayton(family, params[0]);
        break;
    case Family::FCGMixture: {
        const double pf = params[0];
        const double pc = params[1];
        require_finite(family, "pi_F", pf);
        require_finite(family, "pi_C", pc);
        if (pf < 0.0) {
            domain_fail(family, "pi_F", pf, "[0, 1]");
        }
        if (pc < 0.0) {
            domain_fail(family, "pi_C", pc, "[0, 1]");
        }
        if (pf + pc > 1.0 + 1e-12) {
            domain_fail(family, "pi_F + pi_C", pf + pc, "[0, 1]");
        }
        require_finite(family, "alpha", params[2]);
        check_clayton(family, params[3]);
        check_gumbel(family, params[4]);
        break;
    }
    }
}

void check_unit(UnitPair p)
{
    if (!(p.u >= 0.0 && p.u <= 1.0)) {
        throw DomainError("u = " + std::to_string(p.u) + " outside [0, 1]");
    }
    if (!(p.v >= 0.0 && p.v <= 1.0)) {
        throw DomainError("v = " + std::to_string(p.v) + " outside [0, 1]");
    }
}

// Interior CDFs; callers have handled u or v on the boundary of the square.

double mo_cdf(double theta, double u, double v)
{
    const double hi = std::max(u, v);
    const double lo = std::min(u, v);
    return lo * std::pow(hi, 1.0 - theta);
}

double gaussian_cdf(double rho, double u, double v)
{
    return bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), rho);
}

double gumbel_cdf(double r, double u, double v)
{
    const double a = -std::log(u);
    const double b = -std::log(v);
    return std::exp(-std::pow(std::pow(a, r) + std::pow(b, r), 1.0 / r));
}

bool frank_is_independent(double alpha)
{
    return std::abs(alpha) < 1e-10;
}

double frank_cdf(double alpha, double u, double v)
{
    if (frank_is_independent(alpha)) {
        return u * v;
    }
    return -std::log1p(std::expm1(-alpha * u) * std::expm1(-alpha * v) / std::expm1(-alpha)) / alpha;
}

double clayton_cdf(double gamma, double u, double v)
{
    const double s = std::pow(u, -gamma) + std::pow(v, -gamma) - 1.0;
    return std::pow(s, -1.0 / gamma);
}

double gaussian_log_density(double rho, double u, double v)
{
    const double x = normal_quantile(u);
    const double y = normal_quantile(v);
    const double one_minus = 1.0 - rho * rho;
    return -0.5 * std::log(one_minus) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * one_minus);
}

double gumbel_log_density(double r, double u, double v)
{
    const double a = -std::log(u);
    const double b = -std::log(v);
    const double big_a = std::pow(a, r) + std::pow(b, r);
    const double s = std::pow(big_a, 1.0 / r);
    return -s + a + b + (r - 1.0) * (std::log(a) + std::log(b)) + (2.0 / r - 2.0) * std::log(big_a) + std::log1p((r - 1.0) / s);
}

double frank_log_density(double alpha, double u, double v)
{
    if (frank_is_independent(alpha)) {
        return 0.0;
    }
    const double em = std::expm1(-alpha);
    const double denom = -em - std::expm1(-alpha * u) * std::expm1(-alpha * v);
    return std::log(alpha * -em) - alpha * (u + v) - 2.0 * std::log(std::abs(denom));
}

double clayton_log_density(double gamma, double u, double v)
{
    const double lu = std::log(u);
    const double lv = std::log(v);
    const double s = std::exp(-gamma * lu) + std::exp(-gamma * lv) - 1.0;
    return std::log1p(gamma) - (1.0 + gamma) * (lu + lv) - (2.0 + 1.0 / gamma) * std::log(s);
}

double log_sum_exp(std::span<const double> logs, std::span<const double> weights)
{
    double top = kNegInf;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (weights[i] > 0.0) {
            top = std::max(top, logs[i]);
        }
    }
    if (top == kNegInf) {
        return kNegInf;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (weights[i] > 0.0) {
            acc += weights[i] * std::exp(logs[i] - top);
        }
    }
    return top + std::log(acc);
}

// Conditional-inversion and frailty samplers. Each consumes a fixed number of
// uniforms so that streams stay aligned across parameter values.

UnitPair draw_mo(double theta, Rng& rng)
{
    if (theta <= 0.0) {
        const double u = rng.uniform();
        return {u, rng.uniform()};
    }
    if (theta >= 1.0) {
        const double u = rng.uniform();
        return {u, u};
    }
    const double z1 = rng.exponential(1.0 - theta);
    const double z2 = rng.exponential(1.0 - theta);
    const double z12 = rng.exponential(theta);
    return {std::exp(-std::min(z1, z12)), std::exp(-std::min(z2, z12))};
}

UnitPair draw_gaussian(double rho, Rng& rng)
{
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return {normal_cdf(z1), normal_cdf(rho * z1 + std::sqrt(1.0 - rho * rho) * z2)};
}

UnitPair draw_gumbel(double r, Rng& rng)
{
    const double alpha = 1.0 / r;
    const double e1 = rng.exponential(1.0);
    const double e2 = rng.exponential(1.0);
    const double angle = std::numbers::pi * rng.uniform();
    const double w = rng.exponential(1.0);
    if (alpha >= 1.0) {
        return {std::exp(-e1), std::exp(-e2)};
    }
    // Kanter's representation of the positive stable law with Laplace transform exp(-t^alpha).
    const double stable = std::sin(alpha * angle) / std::pow(std::sin(angle), 1.0 / alpha) *
                          std::pow(std::sin((1.0 - alpha) * angle) / w, (1.0 - alpha) / alpha);
    return {std::exp(-std::pow(e1 / stable, alpha)), std::exp(-std::pow(e2 / stable, alpha))};
}

UnitPair draw_frank(double alpha, Rng& rng)
{
    const double u = rng.uniform();
    const double w = rng.uniform();
    if (frank_is_independent(alpha)) {
        return {u, w};
    }
    const double v = -std::log1p(w * std::expm1(-alpha) / (w + (1.0 - w) * std::exp(-alpha * u))) / alpha;
    return {u, std::clamp(v, 0.0, 1.0)};
}

UnitPair draw_clayton(double gamma, Rng& rng)
{
    const double u = rng.uniform();
    const double w = rng.uniform();
    const double inner = std::pow(u, -gamma) * (std::pow(w, -gamma / (1.0 + gamma)) - 1.0) + 1.0;
    return {u, std::pow(inner, -1.0 / gamma)};
}

} // namespace

std::string_view family_name(Family family)
{
    switch (family) {
    case Family::MO:
        return "MO";
    case Family::Gaussian:
        return "Gaussian";
    case Family::Gumbel:
        return "Gumbel";
    case Family::Frank:
        return "Frank";
    case Family::Clayton:
        return "Clayton";
    case Family::FCGMixture:
        return "F+C+G";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    std::string key;
    for (char c : name) {
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "mo" || key == "marshall-olkin") {
        return Family::MO;
    }
    if (key == "gaussian" || key == "normal") {
        return Family::Gaussian;
    }
    if (key == "gumbel") {
        return Family::Gumbel;
    }
    if (key == "frank") {
        return Family::Frank;
    }
    if (key == "clayton") {
        return Family::Clayton;
    }
    if (key == "fcg" || key == "f+c+g" || key == "mixture") {
        return Family::FCGMixture;
    }
    throw InputError("unknown copula family '" + std::string(name) + "'");
}

std::size_t parameter_count(Family family)
{
    return family == Family::FCGMixture ? 5 : 1;
}

std::span<const std::string_view> parameter_names(Family family)
{
    switch (family) {
    case Family::MO:
        return kMoNames;
    case Family::Gaussian:
        return kGaussianNames;
    case Family::Gumbel:
        return kGumbelNames;
    case Family::Frank:
        return kFrankNames;
    case Family::Clayton:
        return kClaytonNames;
    case Family::FCGMixture:
        return kMixtureNames;
    }
    return {};
}

CopulaSpec::CopulaSpec(Family family, std::vector<double> params) : family_(family), params_(std::move(params))
{
    validate(family_, params_);
}

CopulaSpec CopulaSpec::mo(double theta)
{
    return {Family::MO, {theta}};
}

CopulaSpec CopulaSpec::gaussian(double rho)
{
    return {Family::Gaussian, {rho}};
}

CopulaSpec CopulaSpec::gumbel(double r)
{
    return {Family::Gumbel, {r}};
}

CopulaSpec CopulaSpec::frank(double alpha)
{
    return {Family::Frank, {alpha}};
}

CopulaSpec CopulaSpec::clayton(double gamma)
{
    return {Family::Clayton, {gamma}};
}

CopulaSpec CopulaSpec::mixture(double pi_frank, double pi_clayton, double alpha, double gamma, double r)
{
    return {Family::FCGMixture, {pi_frank, pi_clayton, alpha, gamma, r}};
}

std::string describe(const CopulaSpec& spec)
{
    std::ostringstream out;
    out << family_name(spec.family()) << "(";
    const auto names = parameter_names(spec.family());
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i ? ", " : "") << names[i] << "=" << spec.param(i);
    }
    out << ")";
    return out.str();
}

double cdf(const CopulaSpec& spec, UnitPair p)
{
    check_unit(p);
    if (p.u == 0.0 || p.v == 0.0) {
        return 0.0;
    }
    if (p.u == 1.0) {
        return p.v;
    }
    if (p.v == 1.0) {
        return p.u;
    }
    const auto par = spec.params();
    switch (spec.family()) {
    case Family::MO:
        return mo_cdf(par[0], p.u, p.v);
    case Family::Gaussian:
        return gaussian_cdf(par[0], p.u, p.v);
    case Family::Gumbel:
        return gumbel_cdf(par[0], p.u, p.v);
    case Family::Frank:
        return frank_cdf(par[0], p.u, p.v);
    case Family::Clayton:
        return clayton_cdf(par[0], p.u, p.v);
    case Family::FCGMixture: {
        const double pg = std::max(0.0, 1.0 - par[0] - par[1]);
        return par[0] * frank_cdf(par[2], p.u, p.v) + par[1] * clayton_cdf(par[3], p.u, p.v) +
               pg * gumbel_cdf(par[4], p.u, p.v);
    }
    }
    return 0.0;
}

double log_density(const CopulaSpec& spec, UnitPair p)
{
    if (!(p.u > 0.0 && p.u < 1.0 && p.v > 0.0 && p.v < 1.0)) {
        if (spec.family() == Family::MO && p.u > 0.0 && p.v > 0.0 && p.u <= 1.0 && p.v <= 1.0) {
            return mo_log_density(spec.param(0), p);
        }
        throw DomainError("density requires (u, v) in the open unit square");
    }
    const auto par = spec.params();
    switch (spec.family()) {
    case Family::MO:
        return mo_log_density(par[0], p);
    case Family::Gaussian:
        return gaussian_log_density(par[0], p.u, p.v);
    case Family::Gumbel:
        return gumbel_log_density(par[0], p.u, p.v);
    case Family::Frank:
        return frank_log_density(par[0], p.u, p.v);
    case Family::Clayton:
        return clayton_log_density(par[0], p.u, p.v);
    case Family::FCGMixture: {
        const std::array<double, 3> logs{frank_log_density(par[2], p.u, p.v), clayton_log_density(par[3], p.u, p.v),
                                         gumbel_log_density(par[4], p.u, p.v)};
        const std::array<double, 3> weights{par[0], par[1], std::max(0.0, 1.0 - par[0] - par[1])};
        return log_sum_exp(logs, weights);
    }
    }
    return kNegInf;
}

double density(const CopulaSpec& spec, UnitPair p)
{
    if (spec.family() == Family::MO) {
        return mo_density(spec.param(0), p);
    }
    return std::exp(log_density(spec, p));
}

double mo_log_density(double theta, UnitPair p)
{
    if (!(p.u > 0.0 && p.u <= 1.0 && p.v > 0.0 && p.v <= 1.0)) {
        throw DomainError("MO density requires u, v in (0, 1]");
    }
    if (p.u == p.v) {
        return std::log(theta) + (1.0 - theta) * std::log(p.u);
    }
    return std::log1p(-theta) - theta * std::log(std::max(p.u, p.v));
}

double mo_density(double theta, UnitPair p)
{
    if (!(theta > 0.0 && theta < 1.0)) {
        throw DomainError("MO density requires theta in (0, 1), got " + std::to_string(theta));
    }
    if (!(p.u > 0.0 && p.u <= 1.0 && p.v > 0.0 && p.v <= 1.0)) {
        throw DomainError("MO density requires u, v in (0, 1]");
    }
    // theta C / u and (1 - theta) C / (uv), simplified so tiny arguments do not underflow.
    if (p.u == p.v) {
        return theta * std::pow(p.u, 1.0 - theta);
    }
    return (1.0 - theta) * std::pow(std::max(p.u, p.v), -theta);
}

MoPartials mo_partials(double theta, UnitPair p)
{
    check_theta(Family::MO, theta);
    check_unit(p);
    if (p.u == p.v) {
        throw DiagonalError("MO partial derivatives are undefined on the diagonal u == v");
    }
    if (p.u > p.v) {
        return {std::pow(p.u, 1.0 - theta), (1.0 - theta) * std::pow(p.u, -theta) * p.v};
    }
    return {(1.0 - theta) * p.u * std::pow(p.v, -theta), std::pow(p.v, 1.0 - theta)};
}

double MoDecomposition::singular(UnitPair p) const
{
    return std::pow(std::min(p.u, p.v), 2.0 - theta);
}

double MoDecomposition::continuous(UnitPair p) const
{
    const double lo = std::min(p.u, p.v);
    const double hi = std::max(p.u, p.v);
    if (lo <= 0.0) {
        return 0.0;
    }
    if (weight_continuous == 0.0) {
        // theta -> 1 limit of the expression below.
        return lo * (1.0 + 0.5 * std::log(hi / lo));
    }
    return ((2.0 - theta) * mo_cdf(theta, p.u, p.v) - theta * singular(p)) / (2.0 - 2.0 * theta);
}

MoDecomposition mo_decomposition(double theta)
{
    check_theta(Family::MO, theta);
    MoDecomposition d;
    d.theta = theta;
    d.weight_singular = theta / (2.0 - theta);
    d.weight_continuous = (2.0 - 2.0 * theta) / (2.0 - theta);
    return d;
}

TailDependence tail_dependence(const CopulaSpec& spec, MixtureTail mode)
{
    const auto par = spec.params();
    auto gumbel_upper = [](double r) { return 2.0 - std::pow(2.0, 1.0 / r); };
    auto clayton_lower = [](double gamma) { return std::pow(2.0, -1.0 / gamma); };
    switch (spec.family()) {
    case Family::MO:
        return {0.0, par[0]};
    case Family::Gumbel:
        return {0.0, gumbel_upper(par[0])};
    case Family::Clayton:
        return {clayton_lower(par[0]), 0.0};
    case Family::Frank:
    case Family::Gaussian:
        return {0.0, 0.0};
    case Family::FCGMixture:
        if (mode == MixtureTail::GumbelComponent) {
            return {clayton_lower(par[3]), gumbel_upper(par[4])};
        }
        return {par[1] * clayton_lower(par[3]), (1.0 - par[0] - par[1]) * gumbel_upper(par[4])};
    }
    return {};
}

std::vector<UnitPair> sample(const CopulaSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t stream)
{
    if (n == 0) {
        throw DomainError("sample size must be at least 1");
    }
    Rng rng(seed, stream);
    const auto par = spec.params();
    std::vector<UnitPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (spec.family()) {
        case Family::MO:
            out.push_back(draw_mo(par[0], rng));
            break;
        case Family::Gaussian:
            out.push_back(draw_gaussian(par[0], rng));
            break;
        case Family::Gumbel:
            out.push_back(draw_gumbel(par[0], rng));
            break;
        case Family::Frank:
            out.push_back(draw_frank(par[0], rng));
            break;
        case Family::Clayton:
            out.push_back(draw_clayton(par[0], rng));
            break;
        case Family::FCGMixture: {
            const double pick = rng.uniform();
            if (pick < par[0]) {
                out.push_back(draw_frank(par[2], rng));
            } else if (pick < par[0] + par[1]) {
                out.push_back(draw_clayton(par[3], rng));
            } else {
                out.push_back(draw_gumbel(par[4], rng));
            }
            break;
        }
        }
    }
    return out;
}

} // namespace mocop
