#include <exception>
#include <iostream>

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "kogito/error.hpp"

namespace {

int report(const kogito::cli::GlobalOptions& g, const char* kind,
           const std::string& message, kogito::ExitCode code) {
  const int status = static_cast<int>(code);
  if (g.json_errors) {
    std::cerr << nlohmann::ordered_json{{"error", kind},
                                        {"message", message},
                                        {"exit_code", status}}
                     .dump()
              << '\n';
  } else {
    std::cerr << "kogito: " << kind << " error: " << message << '\n';
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commonsense knowledge inference from text"};
  app.require_subcommand(1);
  app.fallthrough();

  kogito::cli::GlobalOptions global;
  app.add_option("--config", global.config, "key=value pipeline configuration file");
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--output,-o", global.output, "Output path (default: standard output)");
  app.add_flag("--dry-run", global.dry_run, "Skip tail generation");
  app.add_flag("--json-errors", global.json_errors, "Report errors as JSON on stderr");
  kogito::cli::register_commands(app, global);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (!global.json_errors) {
      app.exit(e);
      return static_cast<int>(kogito::ExitCode::kUsage);
    }
    return report(global, "usage", e.what(), kogito::ExitCode::kUsage);
  } catch (const kogito::Error& e) {
    return report(global, e.kind(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return report(global, "internal", e.what(), kogito::ExitCode::kFailure);
  }
  return 0;
}
