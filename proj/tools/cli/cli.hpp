// Copyright 2026 The qmux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

namespace qmux::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,  // runtime error or failed acceptance check
    kExitUsage = 2,    // bad flags, malformed config or input files
};

/// Entry point of the qmux tool. Streams are injected so tests can capture
/// output without spawning a process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmux::cli
