#pragma once

#include <optional>
#include <string>

#include <CLI/CLI.hpp>

namespace kogito::cli {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: standard output
  bool dry_run = false;
  bool json_errors = false;
};

// Registers every subcommand on `app`. The returned callbacks run after
// parsing, from main().
void register_commands(CLI::App& app, GlobalOptions& global);

}  // namespace kogito::cli
