#include "nmzi/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fft.hpp"
#include "nmzi/error.hpp"
#include "nmzi/kernels.hpp"
#include "parallel.hpp"

namespace nmzi {

namespace {

constexpr double kZeroPower = 1e-30;

std::string key(std::string_view prefix, MirrorId m) {
  return fmt::format("{}_{}", prefix, to_string(m));
}

bool is_whole(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6e6d7a69u};
  return std::mt19937_64(seq);
}

// Fraction of photons landing right of the split: the middle cell is
// straddled by the gap, so half of it counts on each side.
double right_probability(const SplitPowers& p) { return (p.right + 0.5 * p.middle) / p.total(); }

}  // namespace

SplitPowers split_powers(const TransverseField& f) {
  const auto amp = f.amplitude();
  const std::size_t c = f.grid().center_index();
  const double dx = f.grid().spacing();
  return {kernels::power(amp.first(c)) * dx, std::norm(amp[c]) * dx,
          kernels::power(amp.subspan(c + 1)) * dx};
}

double split_signal(const TransverseField& f) {
  const SplitPowers p = split_powers(f);
  if (p.total() < kZeroPower) throw guard_error("zero-norm", "split signal of a dark field");
  return (p.right - p.left) / p.total();
}

DitherProtocol DitherProtocol::defaults() {
  DitherProtocol p;
  const std::array<double, 5> freq{310.0, 370.0, 430.0, 490.0, 550.0};
  for (MirrorId m : kAllMirrors) p[m] = {1e-6, freq[static_cast<std::size_t>(m)]};
  return p;
}

std::size_t DitherProtocol::sample_count() const noexcept {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

TiltSet DitherProtocol::tilts_at(std::size_t i) const noexcept {
  TiltSet t;
  const double ti = time(i);
  for (MirrorId m : kAllMirrors) {
    const auto& d = (*this)[m];
    // Reduce f*t to its fractional cycle before taking the sine.
    const double cycles = d.frequency * ti;
    t[m] = d.amplitude * std::sin(2.0 * std::numbers::pi * (cycles - std::floor(cycles)));
  }
  return t;
}

void DitherProtocol::validate() const {
  if (!(sample_rate > 0.0)) throw ConfigError("sample_rate", "sample_rate must be positive");
  if (!(duration > 0.0)) throw ConfigError("duration", "duration must be positive");
  if (!is_whole(duration * sample_rate)) {
    throw ConfigError("duration", "duration * sample_rate must be a whole number of samples");
  }
  double fmax = 0.0;
  for (MirrorId m : kAllMirrors) {
    const auto& d = (*this)[m];
    if (!(d.frequency > 0.0)) {
      throw ConfigError(key("freq", m), fmt::format("{} must be positive", key("freq", m)));
    }
    if (!(d.amplitude >= 0.0) || !std::isfinite(d.amplitude)) {
      throw ConfigError(key("amp", m), fmt::format("{} must be >= 0", key("amp", m)));
    }
    if (!is_whole(d.frequency * duration)) {
      throw ConfigError(key("freq", m),
                        fmt::format("{} = {} Hz does not complete a whole number of cycles in {} s",
                                    key("freq", m), d.frequency, duration));
    }
    fmax = std::max(fmax, d.frequency);
  }
  if (!(sample_rate > 4.0 * fmax)) {
    throw ConfigError("sample_rate",
                      fmt::format("sample_rate = {} Hz must exceed 4 * max frequency = {} Hz",
                                  sample_rate, 4.0 * fmax));
  }
  for (MirrorId a : kAllMirrors) {
    for (MirrorId b : kAllMirrors) {
      if (a == b) continue;
      const double fa = (*this)[a].frequency, fb = (*this)[b].frequency;
      const double resolution = 1.0 / duration;
      if (std::abs(fa - fb) < resolution) {
        throw ConfigError(key("freq", b), fmt::format("{} and {} fall in the same frequency bin",
                                                      key("freq", a), key("freq", b)));
      }
      if (fb > fa && is_whole(fb / fa)) {
        throw ConfigError(key("freq", b), fmt::format("{} is a harmonic of {}", key("freq", b),
                                                      key("freq", a)));
      }
    }
  }
}

void DitherProtocol::validate_for(const Scenario& s) const {
  validate();
  TiltSet peak;
  for (MirrorId m : kAllMirrors) peak[m] = (*this)[m].amplitude;
  const auto r = small_angle_regime(s, peak);
  if (!r.within) {
    throw ConfigError("amp", fmt::format("dither amplitudes leave the small-angle regime "
                                         "(max k*A*w0 = {:.3g}, walk-off = {:.3g} m)",
                                         r.max_kick, r.walkoff));
  }
}

DitherSeries run_dither(const Scenario& s, const DitherProtocol& p) {
  p.validate_for(s);
  const NumericEngine engine(s);
  const std::size_t n = p.sample_count();
  DitherSeries out{std::vector<double>(n), std::vector<double>(n)};
  detail::parallel_for(n, [&](std::size_t i) {
    out.time[i] = p.time(i);
    out.signal[i] = split_signal(engine.detector_field(p.tilts_at(i)));
  });
  return out;
}

double SpectrumReport::max_magnitude() const noexcept {
  double m = 0.0;
  for (const auto& pk : peaks) m = std::max(m, pk.magnitude());
  return m;
}

std::vector<MirrorId> SpectrumReport::detected(double factor) const {
  std::vector<MirrorId> out;
  for (MirrorId m : kAllMirrors) {
    if (peak(m).magnitude() > factor * noise_floor) out.push_back(m);
  }
  return out;
}

SpectrumReport spectrum(std::span<const double> series, const DitherProtocol& p) {
  const std::size_t n = p.sample_count();
  if (series.size() != n) {
    throw usage_error("length-mismatch",
                      fmt::format("series has {} samples, protocol expects {}", series.size(), n));
  }
  const double scale = 2.0 / static_cast<double>(n);
  SpectrumReport r;
  std::vector<double> c(n), sn(n);
  std::vector<std::size_t> signal_bins;
  for (MirrorId m : kAllMirrors) {
    const double f = p[m].frequency;
    for (std::size_t i = 0; i < n; ++i) {
      const double cycles = f * p.time(i);
      const double ph = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
      c[i] = std::cos(ph);
      sn[i] = std::sin(ph);
    }
    auto& pk = r.peaks[static_cast<std::size_t>(m)];
    pk.mirror = m;
    pk.frequency = f;
    pk.amplitude = {scale * kernels::dot(series, c), -scale * kernels::dot(series, sn)};
    signal_bins.push_back(static_cast<std::size_t>(std::llround(f * p.duration)));
  }

  std::vector<cplx> bins(n / 2 + 1);
  detail::fft_real(series, bins);
  std::vector<double> mags;
  for (std::size_t m = 1; 2 * m < n; ++m) {
    if (std::find(signal_bins.begin(), signal_bins.end(), m) != signal_bins.end()) continue;
    mags.push_back(scale * std::abs(bins[m]));
  }
  if (!mags.empty()) {
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
    double med = mags[mid];
    if (mags.size() % 2 == 0) {
      med = 0.5 * (med + *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    r.noise_floor = med;
  }
  return r;
}

double PhotonSample::mean() const noexcept {
  if (positions.empty()) return 0.0;
  return std::accumulate(positions.begin(), positions.end(), 0.0) /
         static_cast<double>(positions.size());
}

namespace {

// Cumulative cell probabilities (unnormalised) of |f|^2.
std::vector<double> cumulative_intensity(const TransverseField& f) {
  std::vector<double> cdf(f.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += std::norm(f[i]);
    cdf[i] = acc;
  }
  return cdf;
}

template <class Rng>
double draw_position(const TransverseGrid& g, std::span<const double> cdf, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, cdf.back());
  const double u = uni(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  const double lo = i == 0 ? 0.0 : cdf[i - 1];
  const double width = cdf[i] - lo;
  const double frac = width > 0.0 ? std::clamp((u - lo) / width, 0.0, 1.0) : 0.5;
  return g.x(i) + (frac - 0.5) * g.spacing();
}

}  // namespace

PhotonSample sample_photons(const TransverseField& f, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw usage_error("empty-sample", "photon count must be at least 1");
  const std::vector<double> cdf = cumulative_intensity(f);
  if (cdf.back() * f.grid().spacing() < kZeroPower) {
    throw guard_error("zero-norm", "cannot sample photons from a dark field");
  }
  auto rng = stream(seed, 0);
  PhotonSample s;
  s.seed = seed;
  s.positions.resize(count);
  for (auto& x : s.positions) x = draw_position(f.grid(), cdf, rng);
  return s;
}

DitherSeries photon_dither_series(const Scenario& s, const DitherProtocol& p,
                                  std::uint64_t photons_per_sample, std::uint64_t seed) {
  if (photons_per_sample == 0) throw usage_error("empty-sample", "photons_per_sample must be >= 1");
  p.validate_for(s);
  const NumericEngine engine(s);
  const std::size_t n = p.sample_count();
  const auto photons = static_cast<double>(photons_per_sample);
  DitherSeries out{std::vector<double>(n), std::vector<double>(n)};
  detail::parallel_for(n, [&](std::size_t i) {
    const TransverseField f = engine.detector_field(p.tilts_at(i));
    auto rng = stream(seed, i + 1);
    double right = 0.0;
    if (photons_per_sample <= kExplicitPhotonLimit) {
      const std::vector<double> cdf = cumulative_intensity(f);
      for (std::uint64_t k = 0; k < photons_per_sample; ++k) {
        const double x = draw_position(f.grid(), cdf, rng);
        right += x > 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
      }
    } else {
      const SplitPowers sp = split_powers(f);
      if (sp.total() < kZeroPower) throw guard_error("zero-norm", "dark detector field");
      std::binomial_distribution<std::uint64_t> bin(photons_per_sample, right_probability(sp));
      right = static_cast<double>(bin(rng));
    }
    out.time[i] = p.time(i);
    out.signal[i] = (2.0 * right - photons) / photons;
  });
  return out;
}

SpectrumReport photon_dither_experiment(const Scenario& s, const DitherProtocol& p,
                                        std::uint64_t photons_per_sample, std::uint64_t seed) {
  const DitherSeries series = photon_dither_series(s, p, photons_per_sample, seed);
  return spectrum(series.signal, p);
}

}  // namespace nmzi
