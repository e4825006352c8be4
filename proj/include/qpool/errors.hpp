// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qpool {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (dimension mismatch, bad index,
// weights that do not sum to one, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An operator that must be positive semidefinite has an eigenvalue below
// the allowed negative slack.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// Iterative routine failed to converge, or a random construction could not
// produce a well-conditioned result.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Pure tripartite state whose S-rank differs from the product of the party
// ranks.
class RankConditionError : public Error {
 public:
  using Error::Error;
};

// S-components of a product-state mixture overlap.
class OrthogonalityError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an outcome that has (numerically) zero probability.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

// The pooled operator has vanishing trace.
class EmptyPoolError : public Error {
 public:
  using Error::Error;
};

// A posterior is not supported inside the support of the prior.
class SupportError : public Error {
 public:
  using Error::Error;
};

// Input document could not be parsed or failed validation. `path` names the
// offending field, e.g. "$.povms[0][1]".
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qpool
