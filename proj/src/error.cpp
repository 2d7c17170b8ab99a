// Copyright 2026 The twinsep Authors
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

#include "twinsep/error.hpp"

namespace twinsep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::inconsistent_input: return "inconsistent-input";
    case ErrorKind::capacity: return "capacity-error";
    case ErrorKind::singular_fit: return "singular-fit";
    case ErrorKind::no_solution: return "no-solution";
    case ErrorKind::convergence: return "convergence-error";
    case ErrorKind::io: return "io-error";
  }
  return "unknown";
}

}  // namespace twinsep
