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

#include "mocop/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mocop::optimize {

ScalarResult golden_section(const std::function<double(double)>& f, double lo, double hi, double tol,
                            std::size_t max_evaluations)
{
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    std::size_t evaluations = 2;
    while (b - a > tol && evaluations < max_evaluations) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        ++evaluations;
    }
    ScalarResult result;
    result.converged = b - a <= tol;
    result.evaluations = evaluations;
    if (fc <= fd) {
        result.x = c;
        result.value = fc;
    } else {
        result.x = d;
        result.value = fd;
    }
    return result;
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                          const SimplexOptions& options)
{
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += options.initial_step;
    }
    std::vector<double> values(dim + 1);
    std::transform(simplex.begin(), simplex.end(), values.begin(), f);

    std::vector<std::size_t> order(dim + 1);
    SimplexResult result;
    auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coef) {
        std::vector<double> p(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            p[j] = centroid[j] + coef * (worst[j] - centroid[j]);
        }
        return p;
    };

    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - 1];

        double spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        const double frange = std::abs(values[worst] - values[best]);
        if (frange <= options.f_tolerance * (std::abs(values[best]) + options.f_tolerance) &&
            spread <= options.x_tolerance * (1.0 + std::abs(*std::max_element(simplex[best].begin(), simplex[best].end())))) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                centroid[j] += simplex[i][j] / static_cast<double>(dim);
            }
        }

        auto reflected = point(centroid, simplex[worst], -1.0);
        const double fr = f(reflected);
        if (fr < values[best]) {
            auto expanded = point(centroid, simplex[worst], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        auto contracted = point(centroid, outside ? reflected : simplex[worst], 0.5);
        const double fc = f(contracted);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = f(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::distance(values.begin(), std::min_element(values.begin(), values.end())));
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

} // namespace mocop::optimize
