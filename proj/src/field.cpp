#include "nmzi/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fft.hpp"
#include "nmzi/error.hpp"
#include "nmzi/kernels.hpp"

namespace nmzi {

namespace {

constexpr double kZeroPower = 1e-30;
constexpr double kEdgeFraction = 0.05;
constexpr double kEdgeRelative = 1e-8;

void require_same_grid(const TransverseField& f, const TransverseField& g) {
  if (!(f.grid() == g.grid())) {
    throw usage_error("grid-mismatch", "fields live on different transverse grids");
  }
}

}  // namespace

TransverseGrid::TransverseGrid(std::size_t sample_count, double half_width)
    : n_(sample_count), half_width_(half_width) {
  if (sample_count < 256 || !std::has_single_bit(sample_count)) {
    throw ConfigError("grid_n", fmt::format("grid_n must be a power of two >= 256 (got {})",
                                            sample_count));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError("grid_half_width", "grid_half_width must be positive");
  }
}

double TransverseGrid::kx(std::size_t m) const noexcept {
  const auto n = static_cast<double>(n_);
  const double mm = m < n_ / 2 ? static_cast<double>(m) : static_cast<double>(m) - n;
  return 2.0 * std::numbers::pi * mm / (n * spacing());
}

double GaussianSpec::wavenumber() const noexcept { return 2.0 * std::numbers::pi / wavelength; }

double GaussianSpec::rayleigh_range() const noexcept {
  return 0.5 * wavenumber() * waist * waist;
}

double GaussianSpec::width_at(double z) const noexcept {
  const double r = z / rayleigh_range();
  return waist * std::sqrt(1.0 + r * r);
}

void GaussianSpec::validate() const {
  if (!(waist > 0.0)) throw ConfigError("waist", "waist must be positive");
  if (!(wavelength > 0.0)) throw ConfigError("wavelength", "wavelength must be positive");
  if (wavenumber() * waist < 100.0) {
    throw ConfigError("waist", fmt::format("k*w0 = {:.3g} < 100: outside paraxial validity",
                                           wavenumber() * waist));
  }
}

TransverseField::TransverseField(TransverseGrid grid, double wavenumber, std::vector<cplx> amplitude)
    : grid_(grid), k_(wavenumber), amp_(std::move(amplitude)) {
  if (amp_.size() != grid_.size()) {
    throw usage_error("length-mismatch",
                      fmt::format("field has {} samples, grid has {}", amp_.size(), grid_.size()));
  }
}

double TransverseField::power() const { return kernels::power(amp_) * grid_.spacing(); }

double TransverseField::norm() const { return std::sqrt(power()); }

TransverseField operator+(const TransverseField& f, const TransverseField& g) {
  require_same_grid(f, g);
  std::vector<cplx> out(f.amplitude().begin(), f.amplitude().end());
  kernels::accumulate(out, 1.0, g.amplitude());
  return {f.grid(), f.wavenumber(), std::move(out)};
}

TransverseField operator-(const TransverseField& f, const TransverseField& g) {
  require_same_grid(f, g);
  std::vector<cplx> out(f.amplitude().begin(), f.amplitude().end());
  kernels::accumulate(out, -1.0, g.amplitude());
  return {f.grid(), f.wavenumber(), std::move(out)};
}

TransverseField operator*(cplx a, const TransverseField& f) {
  std::vector<cplx> out(f.size());
  kernels::accumulate(out, a, f.amplitude());
  return {f.grid(), f.wavenumber(), std::move(out)};
}

TransverseField make_gaussian(const GaussianSpec& spec, const TransverseGrid& grid) {
  spec.validate();
  if (grid.half_width() < 8.0 * spec.waist) {
    throw Error(ErrorCategory::Config, "grid-too-narrow",
                fmt::format("grid half-width {:.4g} m is below 8 w0 = {:.4g} m", grid.half_width(),
                            8.0 * spec.waist));
  }
  std::vector<cplx> amp(grid.size());
  const double inv_w2 = 1.0 / (spec.waist * spec.waist);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double x = grid.x(i);
    amp[i] = std::exp(-x * x * inv_w2);
  }
  const double scale = 1.0 / std::sqrt(kernels::power(amp) * grid.spacing());
  for (auto& a : amp) a *= scale;
  return {grid, spec.wavenumber(), std::move(amp)};
}

double centroid(const TransverseField& f) {
  const auto& g = f.grid();
  const auto m = kernels::moments(f.amplitude(), g.x(0), g.spacing());
  if (m.power * g.spacing() < kZeroPower) throw guard_error("zero-norm", "centroid of a zero field");
  return m.first / m.power;
}

double rms_width(const TransverseField& f) {
  const double c = centroid(f);
  const auto& g = f.grid();
  double p = 0.0, s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = std::norm(f[i]);
    const double d = g.x(i) - c;
    p += q;
    s += d * d * q;
  }
  return std::sqrt(s / p);
}

double momentum_centroid(const TransverseField& f) {
  std::vector<cplx> spec(f.amplitude().begin(), f.amplitude().end());
  detail::fft_forward(spec);
  double p = 0.0, s = 0.0;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const double q = std::norm(spec[m]);
    p += q;
    s += f.grid().kx(m) * q;
  }
  if (p * f.grid().spacing() / static_cast<double>(spec.size()) < kZeroPower) {
    throw guard_error("zero-norm", "momentum centroid of a zero field");
  }
  return s / p;
}

cplx inner_product(const TransverseField& f, const TransverseField& g) {
  require_same_grid(f, g);
  return kernels::inner(f.amplitude(), g.amplitude()) * f.grid().spacing();
}

bool satisfies_edge_guard(std::span<const cplx> amp) {
  const std::size_t n = amp.size();
  const auto edge = static_cast<std::size_t>(std::ceil(kEdgeFraction * static_cast<double>(n)));
  double peak = 0.0, rim = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(amp[i]);
    peak = std::max(peak, a);
    if (i < edge || i >= n - edge) rim = std::max(rim, a);
  }
  return rim <= kEdgeRelative * peak;
}

FresnelPropagator::FresnelPropagator(const TransverseGrid& grid, double wavenumber, double z)
    : grid_(grid), k_(wavenumber), z_(z), transfer_(grid.size()) {
  if (!(z >= 0.0)) {
    throw usage_error("negative-distance", fmt::format("propagation distance {} < 0", z));
  }
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t m = 0; m < transfer_.size(); ++m) {
    const double kx = grid.kx(m);
    transfer_[m] = std::polar(inv_n, -kx * kx * z / (2.0 * wavenumber));
  }
}

void FresnelPropagator::apply(std::vector<cplx>& samples) const {
  if (samples.size() != transfer_.size()) {
    throw usage_error("length-mismatch", "propagator and field sizes differ");
  }
  detail::fft_forward(samples);
  kernels::multiply(samples, transfer_);
  detail::fft_backward(samples);
}

TransverseField FresnelPropagator::operator()(const TransverseField& f) const {
  if (!(f.grid() == grid_)) throw usage_error("grid-mismatch", "propagator built for another grid");
  if (z_ == 0.0) return f;
  std::vector<cplx> s(f.amplitude().begin(), f.amplitude().end());
  apply(s);
  TransverseField out{grid_, k_, std::move(s)};
  if (!satisfies_edge_guard(out)) {
    throw guard_error("aliasing",
                      fmt::format("field reaches the outer 5% of the grid after propagating {} m", z_));
  }
  return out;
}

TransverseField propagate(const TransverseField& f, double z) {
  return FresnelPropagator(f.grid(), f.wavenumber(), z)(f);
}

TransverseField parity_x(const TransverseField& f) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n);
  out[0] = f[0];
  for (std::size_t i = 1; i < n; ++i) out[i] = f[n - i];
  return {f.grid(), f.wavenumber(), std::move(out)};
}

ParityParts decompose_parity(const TransverseField& f) {
  const TransverseField mirrored = parity_x(f);
  return {0.5 * (f + mirrored), 0.5 * (f - mirrored)};
}

}  // namespace nmzi
