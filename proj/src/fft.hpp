#pragma once
// Thin wrapper over FFTW3. Plans are created once per size under a lock and
// executed through the new-array interface, which is thread-safe.

#include <complex>
#include <cstddef>
#include <span>

namespace nmzi::detail {

using cplx = std::complex<double>;

/// Unnormalised forward DFT (exp(-2 pi i mn/N)) in place.
void fft_forward(std::span<cplx> data);
/// Unnormalised inverse DFT (exp(+2 pi i mn/N)) in place.
void fft_backward(std::span<cplx> data);
/// Forward DFT of a real sequence; out receives bins 0..n/2.
void fft_real(std::span<const double> in, std::span<cplx> out);

}  // namespace nmzi::detail
