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
#include <string>
#include <string_view>
#include <vector>

namespace mocop {

/// Arguments of a bivariate copula: u = F_X(x), v = F_Y(y).
struct UnitPair {
    double u = 0.0;
    double v = 0.0;

    friend bool operator==(const UnitPair&, const UnitPair&) = default;
};

enum class Family { MO, Gaussian, Gumbel, Frank, Clayton, FCGMixture };

std::string_view family_name(Family family);

/// Case-insensitive; accepts "FCG" and "F+C+G" for the mixture. Throws InputError.
Family parse_family(std::string_view name);

/// Number of free parameters of a family (the k in AIC).
std::size_t parameter_count(Family family);

/// Names of the parameters in the order they are stored.
std::span<const std::string_view> parameter_names(Family family);

/// A copula family together with a validated parameter vector.
///
/// Parameter layouts:
///   MO          theta in [0, 1]
///   Gaussian    rho in (-1, 1)
///   Gumbel      r >= 1
///   Frank       alpha (0 is the independence copula)
///   Clayton     gamma > 0
///   FCGMixture  (pi_F, pi_C, alpha, gamma, r); the Gumbel weight is 1 - pi_F - pi_C
class CopulaSpec {
public:
    /// Throws DomainError naming the offending parameter.
    CopulaSpec(Family family, std::vector<double> params);

    static CopulaSpec mo(double theta);
    static CopulaSpec gaussian(double rho);
    static CopulaSpec gumbel(double r);
    static CopulaSpec frank(double alpha);
    static CopulaSpec clayton(double gamma);
    static CopulaSpec mixture(double pi_frank, double pi_clayton, double alpha, double gamma, double r);

    Family family() const { return family_; }
    std::span<const double> params() const { return params_; }
    double param(std::size_t i) const { return params_.at(i); }

private:
    Family family_;
    std::vector<double> params_;
};

std::string describe(const CopulaSpec& spec);

/// C(u, v). Grounded with uniform margins for every family.
double cdf(const CopulaSpec& spec, UnitPair p);

/// Density of a continuous family with respect to Lebesgue measure on (0,1)^2.
/// For MO this is the density with respect to the mixed measure (see mo_density).
double density(const CopulaSpec& spec, UnitPair p);

/// Log of density(); -inf where the density vanishes.
double log_density(const CopulaSpec& spec, UnitPair p);

/// MO density with respect to 2-D Lebesgue measure off the diagonal plus 1-D
/// Lebesgue measure on the diagonal. Requires 0 < theta < 1 and u, v in (0, 1].
double mo_density(double theta, UnitPair p);

/// Log MO density, extended by continuity to theta in {0, 1} (may return -inf).
double mo_log_density(double theta, UnitPair p);

struct MoPartials {
    double dv; ///< dC/dv
    double du; ///< dC/du
};

/// Partial derivatives of the MO CDF off the diagonal. Throws DiagonalError on u == v.
MoPartials mo_partials(double theta, UnitPair p);

/// The MO copula as a mixture of an absolutely continuous and a singular copula.
struct MoDecomposition {
    double theta = 0.0;
    double weight_continuous = 1.0;
    double weight_singular = 0.0;

    /// C_s(u, v) = min(u, v)^(2 - theta): all mass on the diagonal.
    double singular(UnitPair p) const;
    /// C_a, defined so that the weighted combination reproduces the MO CDF.
    double continuous(UnitPair p) const;
};

MoDecomposition mo_decomposition(double theta);

struct TailDependence {
    double lower = 0.0;
    double upper = 0.0;
};

enum class MixtureTail {
    Weighted,        ///< limit of the mixture CDF itself: component weights applied
    GumbelComponent, ///< 2 - 2^(1/r) of the Gumbel component, weights ignored
};

TailDependence tail_dependence(const CopulaSpec& spec, MixtureTail mode = MixtureTail::Weighted);

/// n i.i.d. draws, deterministic in (spec, n, seed, stream).
std::vector<UnitPair> sample(const CopulaSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

} // namespace mocop
