/*
 Copyright 2026 The pchdkit authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef PCHD_CLI_HPP
#define PCHD_CLI_HPP

#include <string>
#include <vector>

namespace pchd {

/// Runs one pchdkit command. `args` holds the command-line arguments without
/// the program name. Exit codes: 0 success, 1 usage/config error, 2
/// data/parse error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

/// Tool version string as recorded in output files.
const char* cli_version();

} // namespace pchd

#endif // PCHD_CLI_HPP
