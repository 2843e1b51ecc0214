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

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "stanceshift/pipeline.hpp"

int main(int argc, char** argv) {
  namespace pl = stanceshift::pipeline;
  CLI::App app{"stanceshift: media and audience stance-shift corpus analytics"};
  app.set_version_flag("--version", std::string(pl::tool_version()));
  app.require_subcommand(1);
  stanceshift::cli::Action action;
  stanceshift::cli::register_commands(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pl::kExitConfigError;
  }

  try {
    return action ? action() : pl::kExitConfigError;
  } catch (const pl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return pl::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pl::kExitStageFailure;
  }
}
