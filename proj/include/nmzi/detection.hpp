#pragma once
// Detector-plane observables and the dither experiment: split-detector
// signal, mirror dither time series, lock-in spectral peaks and
// photon-by-photon acquisition.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nmzi/elements.hpp"
#include "nmzi/field.hpp"
#include "nmzi/interferometer.hpp"

namespace nmzi {

struct SplitPowers {
  double left = 0.0;    ///< x < 0
  double middle = 0.0;  ///< the x = 0 sample
  double right = 0.0;   ///< x > 0
  double total() const noexcept { return left + middle + right; }
};

SplitPowers split_powers(const TransverseField& f);
/// (P_right - P_left) / (P_right + P_left) for an ideal two-half detector;
/// the midpoint sample is shared evenly. Throws zero-norm on a dark field.
double split_signal(const TransverseField& f);

struct MirrorDither {
  double amplitude = 0.0;  ///< rad
  double frequency = 0.0;  ///< Hz
};

struct DitherProtocol {
  std::array<MirrorDither, 5> mirror{};  ///< indexed by MirrorId
  double sample_rate = 10e3;             ///< Hz
  double duration = 1.0;                 ///< s

  /// 310/370/430/490/550 Hz on A/B/C/E/F, 1 urad each, 10 kHz for 1 s.
  static DitherProtocol defaults();

  MirrorDither& operator[](MirrorId m) noexcept { return mirror[static_cast<std::size_t>(m)]; }
  const MirrorDither& operator[](MirrorId m) const noexcept {
    return mirror[static_cast<std::size_t>(m)];
  }
  std::size_t sample_count() const noexcept;
  double time(std::size_t i) const noexcept { return static_cast<double>(i) / sample_rate; }
  /// alpha_j(t_i) = A_j sin(2 pi f_j t_i)
  TiltSet tilts_at(std::size_t i) const noexcept;

  /// Distinct, non-harmonic frequencies with whole cycles in the window and
  /// sample_rate > 4 max f. Throws ConfigError.
  void validate() const;
  /// validate() plus: amplitudes inside the scenario's small-angle regime.
  void validate_for(const Scenario& s) const;
};

struct DitherSeries {
  std::vector<double> time;
  std::vector<double> signal;
};

/// Split signal of the numeric detector field at every time sample.
DitherSeries run_dither(const Scenario& s, const DitherProtocol& p);

struct SpectralPeak {
  MirrorId mirror = MirrorId::A;
  double frequency = 0.0;
  cplx amplitude{};
  double magnitude() const noexcept { return std::abs(amplitude); }
};

struct SpectrumReport {
  std::array<SpectralPeak, 5> peaks{};  ///< indexed by MirrorId
  double noise_floor = 0.0;             ///< median off-bin magnitude

  const SpectralPeak& peak(MirrorId m) const noexcept {
    return peaks[static_cast<std::size_t>(m)];
  }
  double max_magnitude() const noexcept;
  /// Mirrors whose peak magnitude exceeds factor * noise_floor.
  std::vector<MirrorId> detected(double factor) const;
};

/// Lock-in projection at each dither frequency,
/// amplitude_j = (2/T) sum_t s(t) exp(-2 pi i f_j t) dt, and a noise floor
/// equal to the median one-sided DFT magnitude (same scaling) over all
/// bins except DC, Nyquist and the five dither bins. Throws length-mismatch.
SpectrumReport spectrum(std::span<const double> series, const DitherProtocol& p);

struct PhotonSample {
  std::vector<double> positions;  ///< m
  std::uint64_t seed = 0;

  std::size_t count() const noexcept { return positions.size(); }
  double mean() const noexcept;
};

/// Inverse-transform sampling of N detection positions from |f|^2 treated
/// as piecewise constant over the grid cells. Reproducible for a fixed seed.
PhotonSample sample_photons(const TransverseField& f, std::size_t count, std::uint64_t seed);

/// Photons per time sample at or below which each photon is drawn
/// individually; above it the right/left count is drawn binomially.
inline constexpr std::uint64_t kExplicitPhotonLimit = 4096;

/// Empirical split signal (fraction right - fraction left) per time sample.
/// Each sample uses its own generator stream derived from (seed, index), so
/// the result does not depend on evaluation order.
DitherSeries photon_dither_series(const Scenario& s, const DitherProtocol& p,
                                  std::uint64_t photons_per_sample, std::uint64_t seed);
SpectrumReport photon_dither_experiment(const Scenario& s, const DitherProtocol& p,
                                        std::uint64_t photons_per_sample, std::uint64_t seed);

}  // namespace nmzi
