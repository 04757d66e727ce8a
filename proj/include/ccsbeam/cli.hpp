// SPDX-License-Identifier: Apache-2.0
//
// ccsbeam: convolutional compressive beam alignment for planar phased arrays
// Copyright (C) 2026 The ccsbeam Authors
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

// Command-line front end: gen, train, eval, export-mask, prior.
//
// Configuration keys are kebab-case. Values resolve as
// command-line flag > config file (`key = value`, `#` comments) > default.

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsbeam
{

/// Bad flags, unknown keys, malformed values (exit code 2).
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 2,
    exit_data = 3,
    exit_numeric = 4
};

/// Every key the tool understands, with its default value.
const std::map<std::string, std::string> &config_defaults();

/// Parses `key = value` lines; `#` starts a comment. Underscores in keys are
/// read as dashes. Throws UsageError naming every unknown key.
std::map<std::string, std::string> parse_config_text(const std::string &text);

class RunConfig
{
public:
    RunConfig() = default;
    explicit RunConfig(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    const std::string &get(const std::string &key) const;
    double get_double(const std::string &key) const;
    long long get_int(const std::string &key) const;
    std::size_t get_size(const std::string &key) const;
    bool get_bool(const std::string &key) const;
    std::vector<double> get_doubles(const std::string &key) const;
    std::vector<std::size_t> get_sizes(const std::string &key) const;
    const std::map<std::string, std::string> &values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Layered resolution: defaults, then `file`, then `flags`.
RunConfig resolve_config(const std::map<std::string, std::string> &file,
                         const std::map<std::string, std::string> &flags);

/// Parses a grid: comma list ("0,10,20") or inclusive range "lo:hi:step".
std::vector<double> parse_grid(const std::string &text);

/// Entry point used by the executable and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ccsbeam
