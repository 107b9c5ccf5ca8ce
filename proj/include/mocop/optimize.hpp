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
#include <functional>
#include <vector>

namespace mocop::optimize {

struct ScalarResult {
    double x = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Golden-section minimisation of f on [lo, hi]; stops once the bracket is below tol.
ScalarResult golden_section(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10,
                            std::size_t max_evaluations = 500);

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct SimplexOptions {
    double initial_step = 0.5;
    double f_tolerance = 1e-10;
    double x_tolerance = 1e-8;
    std::size_t max_iterations = 5000;
};

/// Nelder-Mead downhill simplex (unconstrained; boxes are handled by reparameterising).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                          const SimplexOptions& options = {});

} // namespace mocop::optimize
