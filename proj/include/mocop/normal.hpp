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

namespace mocop {

double normal_cdf(double x);

/// Inverse of normal_cdf for p in (0, 1).
double normal_quantile(double p);

/// P(X <= x, Y <= y) for a standard bivariate normal with correlation rho in [-1, 1].
/// Genz (2004) hybrid Gauss-Legendre scheme, double precision.
double bivariate_normal_cdf(double x, double y, double rho);

} // namespace mocop
