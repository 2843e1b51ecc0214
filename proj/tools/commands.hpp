// Copyright 2026 The stanceshift Authors.
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

#ifndef STANCESHIFT_TOOLS_COMMANDS_HPP_
#define STANCESHIFT_TOOLS_COMMANDS_HPP_

#include <functional>

#include "CLI11.hpp"

namespace stanceshift::cli {

using Action = std::function<int()>;

// Adds every subcommand to `app`; the parsed one stores its handler in
// `action`.
void register_commands(CLI::App& app, Action& action);

}  // namespace stanceshift::cli

#endif  // STANCESHIFT_TOOLS_COMMANDS_HPP_
