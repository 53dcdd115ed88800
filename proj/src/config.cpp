#include "nmzi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "nmzi/error.hpp"

namespace nmzi {

namespace {

constexpr std::string_view kSections[] = {"run", "scenario", "tilt", "dither", "photons"};

std::string mkey(std::string_view prefix, MirrorId m) {
  return fmt::format("{}_{}", prefix, to_string(m));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, fmt::format("{}: '{}' is not a finite number", key, v));
  }
  return out;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  // Accept integral values written in floating notation such as 1e5.
  const double d = to_double(key, v);
  if (d < 0.0 || d != std::floor(d) || d > 9.0e18) {
    throw ConfigError(key, fmt::format("{}: '{}' is not a non-negative integer", key, v));
  }
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, fmt::format("{}: '{}' is not a boolean", key, v));
}

Command to_command(const std::string& v) {
  if (v == "weak-values") return Command::WeakValues;
  if (v == "centroid") return Command::Centroid;
  if (v == "dither") return Command::Dither;
  if (v == "photons") return Command::Photons;
  if (v == "before-F") return Command::BeforeF;
  throw ConfigError("command", fmt::format("unknown command '{}'\n{}", v, usage_text()));
}

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::WeakValues: return "weak-values";
    case Command::Centroid: return "centroid";
    case Command::Dither: return "dither";
    case Command::Photons: return "photons";
    case Command::BeforeF: return "before-F";
  }
  return "?";
}

std::string_view to_string(EngineChoice e) noexcept {
  switch (e) {
    case EngineChoice::Analytic: return "analytic";
    case EngineChoice::Numeric: return "numeric";
    case EngineChoice::Both: return "both";
  }
  return "?";
}

std::string usage_text() {
  return "usage: nested-mzi-lab <weak-values|centroid|dither|photons|before-F> --preset <name> "
         "[--set key=value]... --out <dir> [--seed N] [--engine analytic|numeric|both]";
}

int exit_code_for(const Error& e) noexcept {
  switch (e.category()) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::NumericalGuard: return 3;
    case ErrorCategory::Usage: return 1;
  }
  return 1;
}

RunConfig parse_config(std::string_view text) {
  // Strip comments, pull out section headers, then read key = value pairs.
  std::string body;
  {
    std::string line;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = std::min(text.find('\n', pos), text.size());
      line.assign(text.substr(pos, nl - pos));
      pos = nl + 1;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      static const std::regex section(R"(\[\s*([A-Za-z_]+)\s*\])");
      std::smatch sm;
      std::string rest;
      auto it = line.cbegin();
      while (std::regex_search(it, line.cend(), sm, section)) {
        const std::string name = sm[1];
        if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
          throw ConfigError(name, fmt::format("unknown section [{}]", name));
        }
        rest.append(it, sm[0].first);
        rest += ' ';
        it = sm[0].second;
      }
      rest.append(it, line.cend());
      body += rest;
      body += '\n';
    }
  }

  std::map<std::string, std::string> kv;
  static const std::regex pair(R"(([A-Za-z_][A-Za-z0-9_]*)[ \t]*=[ \t]*([^\s=]*))");
  std::string leftover;
  auto it = body.cbegin();
  std::smatch m;
  while (std::regex_search(it, body.cend(), m, pair)) {
    leftover.append(it, m[0].first);
    const std::string k = m[1];
    std::string v = m[2];
    it = m[0].second;
    // "key= other=1": the token belongs to the next pair, the value is empty.
    const auto next = std::find_if(it, body.cend(), [](char c) { return c != ' ' && c != '\t'; });
    if (!v.empty() && next != body.cend() && *next == '=') {
      v.clear();
      it = std::find(m[0].first, m[0].second, '=') + 1;
    }
    if (!kv.emplace(k, v).second) throw ConfigError(k, fmt::format("duplicate key '{}'", k));
  }
  leftover.append(it, body.cend());
  if (const auto junk = leftover.find_first_not_of(" \t\r\n"); junk != std::string::npos) {
    const auto end = leftover.find_first_of(" \t\r\n", junk);
    const std::string tok = leftover.substr(junk, end - junk);
    throw ConfigError(tok, fmt::format("malformed entry '{}': expected key = value", tok));
  }

  auto take = [&](const std::string& k) -> std::optional<std::string> {
    auto f = kv.find(k);
    if (f == kv.end()) return std::nullopt;
    std::string v = f->second;
    kv.erase(f);
    return v;
  };

  RunConfig cfg;
  const auto command = take("command");
  if (!command || command->empty()) throw ConfigError("command", "missing command\n" + usage_text());
  cfg.command = to_command(*command);

  if (auto p = take("preset")) {
    if (*p != "custom") {
      Preset pre = preset(*p);
      cfg.scenario = pre.scenario;
      cfg.tilt = pre.tilt;
    }
    cfg.preset = *p;
    cfg.scenario.name = *p;
  }
  if (auto v = take("engine_version"); v && *v != kEngineVersion) {
    throw ConfigError("engine_version", fmt::format("manifest written by engine {}, this is {}", *v,
                                                    kEngineVersion));
  }
  if (auto v = take("engine")) {
    if (*v == "analytic") cfg.engine = EngineChoice::Analytic;
    else if (*v == "numeric") cfg.engine = EngineChoice::Numeric;
    else if (*v == "both") cfg.engine = EngineChoice::Both;
    else throw ConfigError("engine", fmt::format("engine must be analytic, numeric or both (got '{}')", *v));
  }
  if (auto v = take("seed")) cfg.seed = to_count("seed", *v);
  if (auto v = take("out")) cfg.out = *v;

  Scenario& s = cfg.scenario;
  for (MirrorId mi : kAllMirrors) {
    if (auto v = take(mkey("z", mi))) s.distance(mi) = to_double(mkey("z", mi), *v);
    if (auto v = take(mkey("alpha", mi))) cfg.tilt[mi] = to_double(mkey("alpha", mi), *v);
    if (auto v = take(mkey("freq", mi))) cfg.protocol[mi].frequency = to_double(mkey("freq", mi), *v);
    if (auto v = take(mkey("amp", mi))) cfg.protocol[mi].amplitude = to_double(mkey("amp", mi), *v);
  }
  if (auto v = take("path_length")) s.path_length = to_double("path_length", *v);
  if (auto v = take("waist")) s.beam.waist = to_double("waist", *v);
  if (auto v = take("wavelength")) s.beam.wavelength = to_double("wavelength", *v);
  {
    auto n = take("grid_n");
    auto w = take("grid_half_width");
    if (n || w) {
      s.grid = TransverseGrid(n ? to_count("grid_n", *n) : s.grid.size(),
                              w ? to_double("grid_half_width", *w) : s.grid.half_width());
    }
  }
  if (auto v = take("dove")) s.dove.enabled = to_bool("dove", *v);
  if (auto v = take("dove_placement")) {
    if (*v == "before") s.dove.placement = DovePlacement::BeforeInnerMirrors;
    else if (*v == "after") s.dove.placement = DovePlacement::AfterInnerMirrors;
    else throw ConfigError("dove_placement", "dove_placement must be before or after");
  }
  if (auto v = take("output_port")) {
    if (*v == "bright") s.output_port = OutputPort::Bright;
    else if (*v == "alternate") s.output_port = OutputPort::AlternateInnerPort;
    else throw ConfigError("output_port", "output_port must be bright or alternate");
  }
  if (auto v = take("sample_rate")) cfg.protocol.sample_rate = to_double("sample_rate", *v);
  if (auto v = take("duration")) cfg.protocol.duration = to_double("duration", *v);
  if (auto v = take("photons_per_sample")) cfg.photons_per_sample = to_count("photons_per_sample", *v);
  if (auto v = take("photon_count")) cfg.photon_count = to_count("photon_count", *v);

  if (!kv.empty()) {
    const auto& [k, v] = *kv.begin();
    throw ConfigError(k, fmt::format("unknown key '{}'", k));
  }

  s.validate();
  cfg.tilt.validate();
  if (cfg.command == Command::Dither || cfg.command == Command::Photons) {
    cfg.protocol.validate_for(s);
  }
  if (cfg.command == Command::Photons) {
    if (!cfg.seed) throw ConfigError("seed", "the photons command needs an explicit seed");
    if (cfg.photons_per_sample == 0) throw ConfigError("photons_per_sample", "must be >= 1");
    if (cfg.photon_count == 0) throw ConfigError("photon_count", "must be >= 1");
  }
  return cfg;
}

std::string RunConfig::manifest() const {
  std::string out = "# nested-mzi-lab run manifest\n[run]\n";
  out += fmt::format("command = {}\npreset = {}\nengine = {}\nengine_version = {}\n",
                     to_string(command), preset, to_string(engine), kEngineVersion);
  if (seed) out += fmt::format("seed = {}\n", *seed);
  const Scenario& s = scenario;
  out += "[scenario]\n";
  for (MirrorId m : kAllMirrors) out += fmt::format("{} = {}\n", mkey("z", m), fmt_num(s.distance(m)));
  out += fmt::format("path_length = {}\nwaist = {}\nwavelength = {}\ngrid_n = {}\ngrid_half_width = {}\n",
                     fmt_num(s.path_length), fmt_num(s.beam.waist), fmt_num(s.beam.wavelength),
                     s.grid.size(), fmt_num(s.grid.half_width()));
  out += fmt::format("dove = {}\ndove_placement = {}\noutput_port = {}\n",
                     s.dove.enabled ? "true" : "false",
                     s.dove.placement == DovePlacement::BeforeInnerMirrors ? "before" : "after",
                     s.output_port == OutputPort::Bright ? "bright" : "alternate");
  out += "[tilt]\n";
  for (MirrorId m : kAllMirrors) out += fmt::format("{} = {}\n", mkey("alpha", m), fmt_num(tilt[m]));
  out += "[dither]\n";
  for (MirrorId m : kAllMirrors) {
    out += fmt::format("{} = {}\n{} = {}\n", mkey("freq", m), fmt_num(protocol[m].frequency),
                       mkey("amp", m), fmt_num(protocol[m].amplitude));
  }
  out += fmt::format("sample_rate = {}\nduration = {}\n", fmt_num(protocol.sample_rate),
                     fmt_num(protocol.duration));
  out += fmt::format("[photons]\nphotons_per_sample = {}\nphoton_count = {}\n", photons_per_sample,
                     photon_count);
  return out;
}

std::string RunConfig::manifest_hash() const {
  const std::string text = manifest();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace nmzi
