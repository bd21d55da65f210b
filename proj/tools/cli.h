/*
 * Copyright 2026 The bqt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef BQT_TOOLS_CLI_H
#define BQT_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

#include "bqt/statevector.h"

namespace bqt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses "re", "re+imj", "re-imJ" or "imj".
Amplitude parse_coefficient(const std::string &text);

/// Parses "5", "1..10" or "1,2,4".
std::vector<size_t> parse_decoy_range(const std::string &text);

/// Entry point shared by the executable and the tests. Reports go to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace bqt::cli

#endif
