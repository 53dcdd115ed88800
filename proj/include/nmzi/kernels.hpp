#pragma once
// Data-parallel inner loops shared by the field, interferometer and
// detection code. Every kernel has a scalar reference in nmzi::kernels::scalar
// and, on x86-64, an AVX2+FMA variant in nmzi::kernels::avx2. The unqualified
// entry points dispatch to the best variant the running CPU supports.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace nmzi::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;

/// Pin the dispatch target (tests and benchmarks). Throws if the ISA is
/// not supported by this CPU/build.
void force_isa(Isa isa);
/// Return to automatic selection (honours NMZI_KERNELS=scalar|avx2).
void reset_isa() noexcept;

struct Moments {
  double power = 0.0;  ///< sum |f_i|^2
  double first = 0.0;  ///< sum x_i |f_i|^2, x_i = x0 + i*dx
};

// data[i] *= factors[i]
void multiply(std::span<cplx> data, std::span<const cplx> factors);
// acc[i] += a * x[i]
void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x);
double power(std::span<const cplx> f);
Moments moments(std::span<const cplx> f, double x0, double dx);
// sum conj(f_i) * g_i
cplx inner(std::span<const cplx> f, std::span<const cplx> g);
double dot(std::span<const double> a, std::span<const double> b);

namespace scalar {
void multiply(std::span<cplx> data, std::span<const cplx> factors);
void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x);
double power(std::span<const cplx> f);
Moments moments(std::span<const cplx> f, double x0, double dx);
cplx inner(std::span<const cplx> f, std::span<const cplx> g);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
// Only callable when isa_available(Isa::Avx2).
void multiply(std::span<cplx> data, std::span<const cplx> factors);
void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x);
double power(std::span<const cplx> f);
Moments moments(std::span<const cplx> f, double x0, double dx);
cplx inner(std::span<const cplx> f, std::span<const cplx> g);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

}  // namespace nmzi::kernels
