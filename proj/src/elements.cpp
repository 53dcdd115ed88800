#include "nmzi/elements.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "nmzi/error.hpp"
#include "nmzi/kernels.hpp"

namespace nmzi {

std::string_view to_string(MirrorId m) noexcept {
  switch (m) {
    case MirrorId::A: return "A";
    case MirrorId::B: return "B";
    case MirrorId::C: return "C";
    case MirrorId::E: return "E";
    case MirrorId::F: return "F";
  }
  return "?";
}

std::optional<MirrorId> parse_mirror(std::string_view s) noexcept {
  for (MirrorId m : kAllMirrors) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(PathId p) noexcept {
  switch (p) {
    case PathId::EAF: return "EAF";
    case PathId::EBF: return "EBF";
    case PathId::C: return "C";
  }
  return "?";
}

bool TiltSet::all_zero() const noexcept {
  for (double a : alpha) {
    if (a != 0.0) return false;
  }
  return true;
}

void TiltSet::validate() const {
  for (MirrorId m : kAllMirrors) {
    const double a = (*this)[m];
    if (!std::isfinite(a) || std::abs(a) >= kMaxTilt) {
      throw ConfigError(fmt::format("alpha_{}", to_string(m)),
                        fmt::format("tilt alpha_{} = {} rad outside |alpha| < {}", to_string(m), a,
                                    kMaxTilt));
    }
  }
}

TransverseField apply_tilt(const TransverseField& f, double alpha) {
  if (!std::isfinite(alpha) || std::abs(alpha) >= kMaxTilt) {
    throw Error(ErrorCategory::Config, "angle-out-of-range",
                fmt::format("tilt {} rad outside |alpha| < {}", alpha, kMaxTilt));
  }
  if (alpha == 0.0) return f;
  const auto& g = f.grid();
  const double kick = f.wavenumber() * alpha;
  std::vector<cplx> ramp(f.size());
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = std::polar(1.0, kick * g.x(i));
  std::vector<cplx> out(f.amplitude().begin(), f.amplitude().end());
  kernels::multiply(out, ramp);
  return {g, f.wavenumber(), std::move(out)};
}

TransverseField apply_dove_x(const TransverseField& f) { return parity_x(f); }

double path_amplitude(PathId path, OutputPort port) noexcept {
  const double a = 1.0 / std::sqrt(3.0);
  switch (path) {
    case PathId::EAF: return a;
    case PathId::EBF: return port == OutputPort::Bright ? -a : a;
    case PathId::C: return port == OutputPort::Bright ? a : -a;
  }
  return 0.0;
}

}  // namespace nmzi
