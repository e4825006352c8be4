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

// The qpool command line: demo, run, verify and pool subcommands.

#include <iosfwd>
#include <string>
#include <vector>

#include "qpool/matrix_core.hpp"

namespace qpool::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitNumeric = 3,
  kExitPredicateFailed = 4,
};

/// Runs the tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

/// Six significant digits; negative zero prints as 0.
std::string format_real(double x);
std::string format_complex(Complex z);
std::string format_matrix(const ComplexMatrix& m, const std::string& indent = "  ");

}  // namespace qpool::cli
