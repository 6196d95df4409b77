/*
 * Copyright 2026 The valfram Authors
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

#ifndef VALFRAM_CLI_HPP
#define VALFRAM_CLI_HPP

#include <string>
#include <vector>

namespace valfram {

/// Entry point of the `valfram` command-line tool. Returns 0 on success,
/// 1 when validation completed but produced failed records, 2 on fatal
/// errors (bad usage, unreadable or malformed inputs).
int cli_main(int argc, const char* const* argv);

/// Same, with `args` holding everything after the program name.
int cli_main(const std::vector<std::string>& args);

}  // namespace valfram

#endif  // VALFRAM_CLI_HPP
