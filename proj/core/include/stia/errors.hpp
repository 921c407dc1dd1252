// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The stia-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace stia {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (bad user count, negative gamma, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Raised by the dense solvers when the matrix is singular to tolerance.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// A channel draw whose stacked matrix cannot be inverted reliably.
/// Callers are expected to redraw the block.
class IllConditionedChannel : public Error {
public:
    IllConditionedChannel(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class DecodeFailure : public Error {
public:
    using Error::Error;
};

}  // namespace stia
