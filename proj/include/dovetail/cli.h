// dovetail/cli.h

// Copyright 2026  The dovetail authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOVETAIL_CLI_H_
#define DOVETAIL_CLI_H_

#include <iostream>

namespace dovetail {

// Entry point behind main(). Returns kExitOk, kExitUsage for command line
// problems, kExitData for unreadable or malformed inputs. Streams are
// injectable so tests can capture output.
int CliMain(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace dovetail

#endif  // DOVETAIL_CLI_H_
