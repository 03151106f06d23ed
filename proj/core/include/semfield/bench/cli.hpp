// Copyright 2026 The Semfield Authors
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

#ifndef SEMFIELD_BENCH_CLI_HPP_
#define SEMFIELD_BENCH_CLI_HPP_

#include <iosfwd>

namespace semfield::bench {

// Entry point behind the command-line tool. Subcommands: gen-demos, train,
// eval, ablate, viz-field. Returns 0 on success, 2 for configuration or
// usage errors, 3 for I/O failures. Output streams are injectable so tests
// can capture them.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_CLI_HPP_
