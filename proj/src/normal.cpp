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

#include "mocop/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace mocop {

namespace {

using Quadrature = boost::math::quadrature::gauss<double, 20>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double bivariate_normal_cdf(double x, double y, double rho)
{
    if (rho >= 1.0) {
        return normal_cdf(std::min(x, y));
    }
    if (rho <= -1.0) {
        return std::max(0.0, normal_cdf(x) - normal_cdf(-y));
    }

    // Genz works with upper orthant probabilities P(X > h, Y > k).
    double h = -x;
    double k = -y;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(rho) < 0.925) {
        if (rho != 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(rho);
            auto integrand = [&](double t) {
                const double sn = std::sin(asr * (1.0 - t) / 2.0);
                return std::exp((sn * hk - hs) / (1.0 - sn * sn));
            };
            bvn = Quadrature::integrate(integrand, -1.0, 1.0) * asr / (2.0 * kTwoPi);
        }
        return bvn + normal_cdf(-h) * normal_cdf(-k);
    }

    if (rho < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double ass = (1.0 - rho) * (1.0 + rho);
    double a = std::sqrt(ass);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    const double asr = -(bs / ass + hk) / 2.0;
    if (asr > -100.0) {
        bvn = a * std::exp(asr) * (1.0 - c * (bs - ass) * (1.0 - d * bs / 5.0) / 3.0 + c * d * ass * ass / 5.0);
    }
    if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    auto integrand = [&](double t) {
        double xs = a * (1.0 - t);
        xs *= xs;
        const double rs = std::sqrt(1.0 - xs);
        const double e = -(bs / xs + hk) / 2.0;
        if (e <= -100.0) {
            return 0.0;
        }
        return a * std::exp(e) * (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
    };
    bvn += Quadrature::integrate(integrand, -1.0, 1.0);
    bvn /= -kTwoPi;

    if (rho > 0.0) {
        bvn += normal_cdf(-std::max(h, k));
    } else {
        bvn = -bvn;
        if (k > h) {
            if (h >= 0.0) {
                bvn += normal_cdf(-h) - normal_cdf(-k);
            } else {
                bvn += normal_cdf(k) - normal_cdf(h);
            }
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

} // namespace mocop
