#include "nmzi/kernels.hpp"

#include <cassert>

namespace nmzi::kernels::scalar {

void multiply(std::span<cplx> data, std::span<const cplx> factors) {
  assert(data.size() == factors.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double ar = data[i].real(), ai = data[i].imag();
    const double br = factors[i].real(), bi = factors[i].imag();
    data[i] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x) {
  assert(acc.size() == x.size());
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    acc[i] += cplx{ar * xr - ai * xi, ar * xi + ai * xr};
  }
}

double power(std::span<const cplx> f) {
  double s = 0.0;
  for (const cplx& v : f) s += v.real() * v.real() + v.imag() * v.imag();
  return s;
}

Moments moments(std::span<const cplx> f, double x0, double dx) {
  Moments m;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double p = f[i].real() * f[i].real() + f[i].imag() * f[i].imag();
    m.power += p;
    m.first += (x0 + static_cast<double>(i) * dx) * p;
  }
  return m;
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g) {
  assert(f.size() == g.size());
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fr = f[i].real(), fi = f[i].imag();
    const double gr = g[i].real(), gi = g[i].imag();
    re += fr * gr + fi * gi;
    im += fr * gi - fi * gr;
  }
  return {re, im};
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace nmzi::kernels::scalar
