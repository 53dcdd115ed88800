#pragma once
// Sampled 1-D transverse fields (the "meter" state) and the operations on
// them: Gaussian preparation, moments, paraxial propagation and parity.
//
// The grid is FFT-centred: x_i = (i - N/2) * dx for i in [0, N), dx = 2W/N,
// so x = 0 is a sample and the parity image of sample i is (N - i) mod N.
// All fields are values; operations return new fields.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nmzi {

using cplx = std::complex<double>;

class TransverseGrid {
 public:
  /// Throws ConfigError unless sample_count is a power of two >= 256 and
  /// half_width > 0.
  TransverseGrid(std::size_t sample_count, double half_width);

  std::size_t size() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(n_); }
  std::size_t center_index() const noexcept { return n_ / 2; }
  double x(std::size_t i) const noexcept {
    return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * spacing();
  }
  /// Angular spatial frequency of FFT bin m (rad/m), negative above N/2.
  double kx(std::size_t m) const noexcept;

  friend bool operator==(const TransverseGrid&, const TransverseGrid&) = default;

 private:
  std::size_t n_;
  double half_width_;
};

struct GaussianSpec {
  double waist = 1e-3;           ///< w0 (m), 1/e amplitude radius
  double wavelength = 633e-9;    ///< (m)

  double wavenumber() const noexcept;
  double rayleigh_range() const noexcept;  ///< k w0^2 / 2
  /// 1/e amplitude radius after free propagation over z.
  double width_at(double z) const noexcept;
  /// Throws ConfigError on w0 <= 0, lambda <= 0 or k*w0 < 100.
  void validate() const;
};

class TransverseField {
 public:
  TransverseField(TransverseGrid grid, double wavenumber, std::vector<cplx> amplitude);

  const TransverseGrid& grid() const noexcept { return grid_; }
  double wavenumber() const noexcept { return k_; }
  std::span<const cplx> amplitude() const noexcept { return amp_; }
  std::size_t size() const noexcept { return amp_.size(); }
  const cplx& operator[](std::size_t i) const noexcept { return amp_[i]; }

  /// Integral of |f|^2 (midpoint rule).
  double power() const;
  double norm() const;

  /// Release the sample buffer (for in-place pipelines).
  std::vector<cplx> take() && { return std::move(amp_); }

 private:
  TransverseGrid grid_;
  double k_;
  std::vector<cplx> amp_;
};

TransverseField operator+(const TransverseField& f, const TransverseField& g);
TransverseField operator-(const TransverseField& f, const TransverseField& g);
TransverseField operator*(cplx a, const TransverseField& f);

/// L2-normalised even Gaussian exp(-x^2/w0^2) at its waist.
/// Throws grid-too-narrow (ConfigError) if half_width < 8 w0.
TransverseField make_gaussian(const GaussianSpec& spec, const TransverseGrid& grid);

/// <x> = int x|f|^2 / int |f|^2. Throws zero-norm if power < 1e-30.
double centroid(const TransverseField& f);
/// Root-mean-square width sqrt(<x^2> - <x>^2).
double rms_width(const TransverseField& f);
/// <k_x> from the discrete spectral power distribution.
double momentum_centroid(const TransverseField& f);

/// Discrete L2 inner product, conjugate-linear in f. Throws grid-mismatch.
cplx inner_product(const TransverseField& f, const TransverseField& g);

/// True when |f| < 1e-8 * max|f| over the outer 5% of the grid on both sides.
bool satisfies_edge_guard(std::span<const cplx> samples);
inline bool satisfies_edge_guard(const TransverseField& f) {
  return satisfies_edge_guard(f.amplitude());
}

/// Paraxial Fresnel propagation over a fixed distance, transfer function
/// exp(-i kx^2 z / 2k) applied in the spectral domain. The carrier phase
/// exp(ikz) is dropped. Precomputes the transfer function once.
class FresnelPropagator {
 public:
  FresnelPropagator(const TransverseGrid& grid, double wavenumber, double z);

  double distance() const noexcept { return z_; }
  /// Throws aliasing if the result fails the edge guard.
  TransverseField operator()(const TransverseField& f) const;
  /// Same, on a raw sample buffer of matching size.
  void apply(std::vector<cplx>& samples) const;

 private:
  TransverseGrid grid_;
  double k_;
  double z_;
  std::vector<cplx> transfer_;  // includes the 1/N inverse-FFT scale
};

/// Free propagation over z >= 0. Unitary; throws aliasing on guard failure.
TransverseField propagate(const TransverseField& f, double z);

/// amplitude(x) -> amplitude(-x).
TransverseField parity_x(const TransverseField& f);

struct ParityParts {
  TransverseField even;
  TransverseField odd;
};
ParityParts decompose_parity(const TransverseField& f);

}  // namespace nmzi
