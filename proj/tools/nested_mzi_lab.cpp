// nested-mzi-lab: command-line front end for the nested interferometer
// simulations.
//
//   nested-mzi-lab <command> --preset <name> [--set key=value]... --out <dir>
//                  [--seed N] [--engine analytic|numeric|both] [--config file]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical guard.

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nmzi/config.hpp"
#include "nmzi/error.hpp"

namespace {

int fail(std::string_view category, std::string_view kind, std::string_view key,
         std::string_view message, int code) {
  // Keep the report on one line.
  std::string msg(message);
  for (char& c : msg) {
    if (c == '\n') c = ' ';
  }
  std::cerr << fmt::format("error category={} kind={} key={} message=\"{}\"\n", category, kind,
                           key.empty() ? "-" : key, msg);
  return code;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested Mach-Zehnder interferometer with Dove prisms: weak values, centroids, "
               "dither spectroscopy"};
  std::string command, preset, out = "out", engine, config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "weak-values | centroid | dither | photons | before-F");
  app.add_option("--preset", preset, "fig1a | fig1b | fig1c | dove-after | alt-port");
  app.add_option("--set", sets, "override a configuration key (key=value)");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed (required for photons)");
  app.add_option("--engine", engine, "analytic | numeric | both");
  app.add_option("--config", config_file, "configuration or manifest file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", "cli", "-", e.what(), 2);
  }

  std::ostringstream text;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) return fail("config", "config", "config", "cannot read " + config_file, 2);
    text << in.rdbuf() << '\n';
  }
  // Command-line values override the file; drop the file's copies first.
  std::string base = text.str();
  auto drop = [&](const std::string& key) {
    std::istringstream lines(base);
    std::string line, kept;
    while (std::getline(lines, line)) {
      const auto first = line.find_first_not_of(" \t");
      const bool match = first != std::string::npos && line.compare(first, key.size(), key) == 0 &&
                         line.find_first_not_of(" \t=", first + key.size()) != first + key.size();
      if (!match) kept += line + '\n';
    }
    base = kept;
  };
  std::vector<std::pair<std::string, std::string>> extra;
  auto put = [&](const std::string& key, const std::string& value) {
    drop(key);
    std::erase_if(extra, [&](const auto& kv) { return kv.first == key; });
    extra.emplace_back(key, value);
  };
  if (!command.empty()) put("command", command);
  if (!preset.empty()) put("preset", preset);
  if (!engine.empty()) put("engine", engine);
  if (seed) put("seed", std::to_string(*seed));
  put("out", out);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) return fail("config", "cli", s, "--set expects key=value", 2);
    put(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }

  try {
    for (const auto& [key, value] : extra) base += key + " = " + value + '\n';
    const nmzi::RunConfig cfg = nmzi::parse_config(base);
    const nmzi::RunResult result = nmzi::run(cfg);
    std::cout << fmt::format("{}: {}\nmanifest_sha256 = {}\n", nmzi::to_string(cfg.command),
                             result.summary, result.manifest_hash);
    for (const auto& f : result.files) std::cout << "  wrote " << f.string() << '\n';
    return 0;
  } catch (const nmzi::ConfigError& e) {
    return fail("config", e.kind(), e.key(), e.what(), 2);
  } catch (const nmzi::Error& e) {
    return fail(nmzi::to_string(e.category()), e.kind(), "", e.what(), nmzi::exit_code_for(e));
  } catch (const std::exception& e) {
    return fail("internal", "exception", "", e.what(), 1);
  }
}
