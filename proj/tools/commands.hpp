// Copyright 2026 The contincl Authors
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

// The contincl command-line front end.
//
//   contincl wp A B [--p P]
//   contincl verify-inequalities [--seed S] [--instances N]
//   contincl simulate|reach|filippov|cone-test|viability-check|
//            invariance-check|viable-curve SCENARIO
//
// Common flags: --out DIR, --seed U64, --threads N, --tol FLOAT,
// --format json|csv. The JSON report goes to stdout (and to DIR/report.json
// with the CSV traces when --out is given). Exit status is 0 when the check
// passes, 2 when it reports a violation or cannot decide, 1 on errors.

#ifndef CONTINCL_TOOLS_COMMANDS_HPP_
#define CONTINCL_TOOLS_COMMANDS_HPP_

#include <ostream>

namespace contincl::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace contincl::cli

#endif  // CONTINCL_TOOLS_COMMANDS_HPP_
