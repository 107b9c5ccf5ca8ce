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

#include <stdexcept>
#include <string>

namespace mocop {

/// A parameter or argument lies outside the domain of the operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by MO partial derivatives on the diagonal u == v, where the CDF has a kink.
class DiagonalError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed or inconsistent input data (files, samples, indicators).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The sample carries no information for the requested estimator.
class DegenerateSampleError : public InputError {
public:
    using InputError::InputError;
};

} // namespace mocop
