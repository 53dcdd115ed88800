#pragma once
// Element-level operators: mirror tilts, Dove prisms and the net path
// amplitudes of the nested interferometer's beam splitters.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "nmzi/field.hpp"

namespace nmzi {

/// E and F belong to the outer interferometer, A and B to the inner one,
/// C to the reference arm.
enum class MirrorId { A, B, C, E, F };

inline constexpr std::array<MirrorId, 5> kAllMirrors{MirrorId::A, MirrorId::B, MirrorId::C,
                                                     MirrorId::E, MirrorId::F};

std::string_view to_string(MirrorId m) noexcept;
std::optional<MirrorId> parse_mirror(std::string_view s) noexcept;

/// Largest tilt accepted anywhere (paraxial guard), rad.
inline constexpr double kMaxTilt = 1e-3;

/// Beam deflection alpha_j (twice the mechanical tilt) per mirror. Signs
/// follow the convention where every positive alpha kicks the unfolded
/// beam towards +x.
struct TiltSet {
  std::array<double, 5> alpha{};

  double& operator[](MirrorId m) noexcept { return alpha[static_cast<std::size_t>(m)]; }
  double operator[](MirrorId m) const noexcept { return alpha[static_cast<std::size_t>(m)]; }

  static TiltSet single(MirrorId m, double a) noexcept {
    TiltSet t;
    t[m] = a;
    return t;
  }
  bool all_zero() const noexcept;
  /// Throws angle-out-of-range (ConfigError) if any |alpha| >= kMaxTilt.
  void validate() const;

  friend bool operator==(const TiltSet&, const TiltSet&) = default;
};

enum class DovePlacement { BeforeInnerMirrors, AfterInnerMirrors };

struct DoveConfig {
  bool enabled = false;
  DovePlacement placement = DovePlacement::BeforeInnerMirrors;

  bool before() const noexcept { return enabled && placement == DovePlacement::BeforeInnerMirrors; }
  bool after() const noexcept { return enabled && placement == DovePlacement::AfterInnerMirrors; }
  friend bool operator==(const DoveConfig&, const DoveConfig&) = default;
};

/// Unfolded source-to-detector paths.
enum class PathId { EAF, EBF, C };
inline constexpr std::array<PathId, 3> kAllPaths{PathId::EAF, PathId::EBF, PathId::C};
std::string_view to_string(PathId p) noexcept;

/// Which port of the inner interferometer the final beam splitter collects.
enum class OutputPort { Bright, AlternateInnerPort };

/// Multiply by exp(i k alpha x). Throws angle-out-of-range if |alpha| >= kMaxTilt.
TransverseField apply_tilt(const TransverseField& f, double alpha);

/// Dove prism acting in x: reflects the mode about the optical axis and
/// reverses k_x.
TransverseField apply_dove_x(const TransverseField& f);

/// Net amplitude of each path at the detector: (+1, -1, +1)/sqrt(3) for the
/// bright port, (+1, +1, -1)/sqrt(3) when the alternate inner port is
/// collected.
double path_amplitude(PathId path, OutputPort port = OutputPort::Bright) noexcept;

}  // namespace nmzi
