#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace nmzi::detail {

namespace {

enum class Kind { Forward, Backward, Real };

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(Kind kind, std::size_t n) {
  static std::map<std::pair<Kind, std::size_t>, fftw_plan> plans;
  std::lock_guard lock(planner_mutex());
  auto it = plans.find({kind, n});
  if (it != plans.end()) return it->second;

  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
  fftw_plan p = nullptr;
  if (kind == Kind::Real) {
    std::vector<double> in(n);
    std::vector<cplx> out(n / 2 + 1);
    p = fftw_plan_dft_r2c_1d(ni, in.data(), reinterpret_cast<fftw_complex*>(out.data()), flags);
  } else {
    std::vector<cplx> buf(n);
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    p = fftw_plan_dft_1d(ni, b, b, kind == Kind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
  }
  plans.emplace(std::pair{kind, n}, p);
  return p;
}

}  // namespace

void fft_forward(std::span<cplx> data) {
  auto* d = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(Kind::Forward, data.size()), d, d);
}

void fft_backward(std::span<cplx> data) {
  auto* d = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(Kind::Backward, data.size()), d, d);
}

void fft_real(std::span<const double> in, std::span<cplx> out) {
  // Planned with FFTW_PRESERVE_INPUT; the interface is still non-const.
  fftw_execute_dft_r2c(plan_for(Kind::Real, in.size()), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace nmzi::detail
