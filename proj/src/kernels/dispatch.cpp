#include <atomic>
#include <cstdlib>
#include <string>

#include "nmzi/error.hpp"
#include "nmzi/kernels.hpp"

namespace nmzi {

const char* to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::NumericalGuard: return "numerical-guard";
    case ErrorCategory::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace nmzi

namespace nmzi::kernels {

#ifndef NMZI_HAVE_AVX2
// Non-x86 builds: the AVX2 symbols exist but are never selected.
namespace avx2 {
void multiply(std::span<cplx> d, std::span<const cplx> f) { scalar::multiply(d, f); }
void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x) { scalar::accumulate(acc, a, x); }
double power(std::span<const cplx> f) { return scalar::power(f); }
Moments moments(std::span<const cplx> f, double x0, double dx) { return scalar::moments(f, x0, dx); }
cplx inner(std::span<const cplx> f, std::span<const cplx> g) { return scalar::inner(f, g); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NMZI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa auto_select() noexcept {
  if (const char* env = std::getenv("NMZI_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::Avx2;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{auto_select()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
  return isa == Isa::Scalar || cpu_has_avx2();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw usage_error("isa-unavailable", "kernel ISA " + std::string(to_string(isa)) +
                                             " is not supported on this CPU");
  }
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() noexcept { current().store(auto_select(), std::memory_order_relaxed); }

#define NMZI_DISPATCH(call) \
  (active_isa() == Isa::Avx2 ? avx2::call : scalar::call)

void multiply(std::span<cplx> data, std::span<const cplx> factors) {
  NMZI_DISPATCH(multiply(data, factors));
}
void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x) {
  NMZI_DISPATCH(accumulate(acc, a, x));
}
double power(std::span<const cplx> f) { return NMZI_DISPATCH(power(f)); }
Moments moments(std::span<const cplx> f, double x0, double dx) {
  return NMZI_DISPATCH(moments(f, x0, dx));
}
cplx inner(std::span<const cplx> f, std::span<const cplx> g) { return NMZI_DISPATCH(inner(f, g)); }
double dot(std::span<const double> a, std::span<const double> b) { return NMZI_DISPATCH(dot(a, b)); }

#undef NMZI_DISPATCH

}  // namespace nmzi::kernels
