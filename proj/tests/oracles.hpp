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

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the estimators it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "mocop/copula.hpp"

namespace oracle {

inline double phi(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Bivariate normal CDF through Owen's T function.
inline double bvn_owen(double h, double k, double rho)
{
    if (h == 0.0) {
        h = 1e-300;
    }
    if (k == 0.0) {
        k = 1e-300;
    }
    const double root = std::sqrt(1.0 - rho * rho);
    const double beta = (h * k > 0.0 || (h * k == 0.0 && h + k >= 0.0)) ? 0.0 : 0.5;
    return 0.5 * phi(h) + 0.5 * phi(k) - boost::math::owens_t(h, (k - rho * h) / (h * root)) -
           boost::math::owens_t(k, (h - rho * k) / (k * root)) - beta;
}

/// Total mass of the MO density: two off-diagonal triangles plus the diagonal line.
struct MoMass {
    double continuous = 0.0;
    double singular = 0.0;
    double total() const { return continuous + singular; }
};

inline MoMass mo_density_mass(double theta)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto off = [&](double u) {
        // Inner integral over v in (0, u): the density of the lower triangle.
        auto inner = [&](double v) { return (1.0 - theta) * std::pow(std::max(u, v), -theta); };
        return integrator.integrate(inner, 0.0, u);
    };
    auto diag = [&](double u) { return theta * std::pow(u, 1.0 - theta); };
    MoMass mass;
    mass.continuous = 2.0 * integrator.integrate(off, 0.0, 1.0);
    mass.singular = integrator.integrate(diag, 0.0, 1.0);
    return mass;
}

/// Conditional likelihood up to a theta-free constant:
/// (n1 + n2) ln(1 - theta) + n3 ln(theta) + sum ln C_theta(u, v), with C evaluated directly.
inline double mo_conditional_loglik(double theta, std::span<const mocop::UnitPair> pairs)
{
    double total = 0.0;
    for (const auto& p : pairs) {
        const double c = p.u * p.v * std::min(std::pow(p.u, -theta), std::pow(p.v, -theta));
        total += std::log(c) + (p.u == p.v ? std::log(theta) : std::log(1.0 - theta));
    }
    return total;
}

/// Brute-force argmax of mo_conditional_loglik over theta = step, 2 step, ..., 1 - step.
inline double mo_grid_argmax(std::span<const mocop::UnitPair> pairs, double step = 1e-4)
{
    double best_theta = step;
    double best = -std::numeric_limits<double>::infinity();
    const auto count = static_cast<int>(std::round(1.0 / step));
    for (int i = 1; i < count; ++i) {
        const double theta = i * step;
        const double value = mo_conditional_loglik(theta, pairs);
        if (value > best) {
            best = value;
            best_theta = theta;
        }
    }
    return best_theta;
}

inline double empirical_copula_naive(std::span<const mocop::UnitPair> sample, double u, double v)
{
    double count = 0.0;
    for (const auto& p : sample) {
        if (p.u <= u && p.v <= v) {
            count += 1.0;
        }
    }
    return count / static_cast<double>(sample.size());
}

/// Two-sided Kolmogorov-Smirnov distance of a sample from U(0, 1).
inline double ks_uniform(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - xs[i], xs[i] - static_cast<double>(i) / n});
    }
    return d;
}

} // namespace oracle
