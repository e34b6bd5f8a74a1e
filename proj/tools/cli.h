// Copyright 2026 The vqmark Authors
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

#include <ostream>
#include <span>
#include <string>

namespace vqmark::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kIo = 3,
  kCapacity = 4,
  kFormat = 5,  // malformed file or codebook mismatch
};

// Runs the command line `args` (args[0] is the program name). Results go
// to `out`, logs and errors to `err`. Returns an ExitCode.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace vqmark::cli
