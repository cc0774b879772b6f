// include/strfnet/cli.h

// Copyright 2026  The strfnet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRFNET_CLI_H_
#define STRFNET_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace strfnet {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Parses |args| (without the program name) and runs one subcommand. Errors
// are reported on |err| as a single-line JSON record.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace strfnet

#endif  // STRFNET_CLI_H_
