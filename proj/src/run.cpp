#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "nmzi/config.hpp"
#include "nmzi/detection.hpp"
#include "nmzi/error.hpp"
#include "nmzi/weak_values.hpp"

namespace nmzi {

namespace {

// Noiseless spectra have a round-off noise floor; there a peak must also
// clear this fraction of the strongest peak to count as a weak trace.
constexpr double kRelativeTraceFloor = 1e-3;
constexpr double kNoiseFactor = 5.0;

class Writer {
 public:
  Writer(const RunConfig& cfg, RunResult& result) : cfg_(cfg), result_(result) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) {
      throw ConfigError("out", fmt::format("cannot create output directory {}: {}",
                                           cfg.out.string(), ec.message()));
    }
  }

  /// Opens a file whose first line records the manifest hash.
  std::ofstream open(const std::string& name) {
    const auto path = cfg_.out / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("out", fmt::format("cannot write {}", path.string()));
    os << "# manifest_sha256 = " << result_.manifest_hash << '\n';
    result_.files.push_back(path);
    return os;
  }

  void manifest() {
    const auto path = cfg_.out / "manifest.txt";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("out", fmt::format("cannot write {}", path.string()));
    os << "# manifest_sha256 = " << result_.manifest_hash << '\n' << cfg_.manifest();
    result_.files.push_back(path);
  }

 private:
  const RunConfig& cfg_;
  RunResult& result_;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_field(std::ofstream os, const TransverseField& f) {
  os << "x,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << num(f.grid().x(i)) << ',' << num(f[i].real()) << ',' << num(f[i].imag()) << '\n';
  }
}

void write_series(std::ofstream os, const DitherSeries& s) {
  os << "t,signal\n";
  for (std::size_t i = 0; i < s.time.size(); ++i) os << num(s.time[i]) << ',' << num(s.signal[i]) << '\n';
}

double trace_threshold(const SpectrumReport& r, bool noiseless) {
  const double noise = kNoiseFactor * r.noise_floor;
  return noiseless ? std::max(noise, kRelativeTraceFloor * r.max_magnitude()) : noise;
}

std::string write_spectrum(std::ofstream& os, const SpectrumReport& r, bool noiseless) {
  const double threshold = trace_threshold(r, noiseless);
  os << "# noise_floor = " << num(r.noise_floor) << '\n';
  os << "# threshold = " << num(threshold) << '\n';
  os << "mirror,f,re,im,magnitude,detected\n";
  std::string detected;
  for (const auto& pk : r.peaks) {
    const bool hit = pk.magnitude() > threshold;
    if (hit) detected += to_string(pk.mirror);
    os << to_string(pk.mirror) << ',' << num(pk.frequency) << ',' << num(pk.amplitude.real()) << ','
       << num(pk.amplitude.imag()) << ',' << num(pk.magnitude()) << ',' << (hit ? 1 : 0) << '\n';
  }
  return detected.empty() ? "none" : detected;
}

void run_weak_values(const RunConfig& cfg, Writer& w, RunResult& r) {
  const WeakValueReport rep = weak_value_report(cfg.scenario);
  w.open("weak_values.txt") << rep.to_text();
  auto os = w.open("weak_values.csv");
  os << "mirror,weak_value_re,weak_value_im,effective_weak_value\n";
  for (MirrorId m : kAllMirrors) {
    os << to_string(m) << ',' << num(rep.projector_value(m).real()) << ','
       << num(rep.projector_value(m).imag()) << ',' << num(rep.effective_value(m)) << '\n';
  }
  r.summary = fmt::format("Pi_E,w = {:.6g}, effective Pi_E = {:.6f}",
                          rep.projector_value(MirrorId::E).real(), rep.effective_value(MirrorId::E));
}

void run_centroid(const RunConfig& cfg, Writer& w, RunResult& r) {
  auto os = w.open("centroid.csv");
  os << "engine,centroid_m,momentum_centroid_rad_per_m,split_signal,detection_probability\n";
  auto emit = [&](std::string_view name, const TransverseField& f) {
    const double c = centroid(f);
    os << name << ',' << num(c) << ',' << num(momentum_centroid(f)) << ',' << num(split_signal(f))
       << ',' << num(detection_probability(f)) << '\n';
    write_field(w.open(fmt::format("field_{}.csv", name)), f);
    r.summary += fmt::format("{}{} centroid = {:.6e} m", r.summary.empty() ? "" : "; ", name, c);
  };
  if (cfg.engine != EngineChoice::Numeric) emit("analytic", detector_field_analytic(cfg.scenario, cfg.tilt));
  if (cfg.engine != EngineChoice::Analytic) emit("numeric", detector_field_numeric(cfg.scenario, cfg.tilt));
}

void run_dither_cmd(const RunConfig& cfg, Writer& w, RunResult& r) {
  const DitherSeries series = run_dither(cfg.scenario, cfg.protocol);
  write_series(w.open("series.csv"), series);
  const SpectrumReport rep = spectrum(series.signal, cfg.protocol);
  auto os = w.open("spectrum.csv");
  r.summary = "weak traces at: " + write_spectrum(os, rep, true);
}

void run_photons(const RunConfig& cfg, Writer& w, RunResult& r) {
  const TransverseField f = detector_field_numeric(cfg.scenario, cfg.tilt);
  const PhotonSample sample = sample_photons(f, cfg.photon_count, *cfg.seed);
  {
    auto os = w.open("photons.csv");
    os << "x\n";
    for (double x : sample.positions) os << num(x) << '\n';
  }
  const DitherSeries series =
      photon_dither_series(cfg.scenario, cfg.protocol, cfg.photons_per_sample, *cfg.seed);
  write_series(w.open("photon_series.csv"), series);
  const SpectrumReport rep = spectrum(series.signal, cfg.protocol);
  auto os = w.open("photon_spectrum.csv");
  r.summary = fmt::format("sample mean = {:.6e} m (centroid {:.6e} m); weak traces at: {}",
                          sample.mean(), centroid(f), write_spectrum(os, rep, false));
}

void run_before_f(const RunConfig& cfg, Writer& w, RunResult& r) {
  const TransverseField f = field_before_f(cfg.scenario, cfg.tilt);
  write_field(w.open("before_f_field.csv"), f);
  const double arm = 1.0 / 3.0;
  const double p = f.power();
  w.open("before_f.txt") << fmt::format("power = {}\narm_power = {}\nratio = {}\n", num(p), num(arm),
                                        num(p / arm));
  r.summary = fmt::format("power before F / arm power = {:.6e}", p / arm);
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  result.manifest_hash = cfg.manifest_hash();
  Writer w(cfg, result);
  w.manifest();
  switch (cfg.command) {
    case Command::WeakValues: run_weak_values(cfg, w, result); break;
    case Command::Centroid: run_centroid(cfg, w, result); break;
    case Command::Dither: run_dither_cmd(cfg, w, result); break;
    case Command::Photons: run_photons(cfg, w, result); break;
    case Command::BeforeF: run_before_f(cfg, w, result); break;
  }
  return result;
}

}  // namespace nmzi
