// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached through the
// dispatcher after a CPUID check. A __m256d register holds two complex
// doubles laid out as [re0, im0, re1, im1].
#include <immintrin.h>

#include <cassert>

#include "nmzi/kernels.hpp"

namespace nmzi::kernels::avx2 {

namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (a * b) for two packed complex pairs
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

void multiply(std::span<cplx> data, std::span<const cplx> factors) {
  assert(data.size() == factors.size());
  const std::size_t n = data.size();
  double* d = as_doubles(data.data());
  const double* f = as_doubles(factors.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(d + 2 * i);
    const __m256d b = _mm256_loadu_pd(f + 2 * i);
    _mm256_storeu_pd(d + 2 * i, cmul(a, b));
  }
  if (i < n) scalar::multiply(data.subspan(i), factors.subspan(i));
}

void accumulate(std::span<cplx> acc, cplx a, std::span<const cplx> x) {
  assert(acc.size() == x.size());
  const std::size_t n = acc.size();
  double* d = as_doubles(acc.data());
  const double* xs = as_doubles(x.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    const __m256d prod = _mm256_fmaddsub_pd(v, ar, _mm256_mul_pd(_mm256_permute_pd(v, 0x5), ai));
    _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), prod));
  }
  if (i < n) scalar::accumulate(acc.subspan(i), a, x.subspan(i));
}

double power(std::span<const cplx> f) {
  const std::size_t n = f.size();
  const double* p = as_doubles(f.data());
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    s0 = _mm256_fmadd_pd(a, a, s0);
    s1 = _mm256_fmadd_pd(b, b, s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  if (i < n) s += scalar::power(f.subspan(i));
  return s;
}

Moments moments(std::span<const cplx> f, double x0, double dx) {
  const std::size_t n = f.size();
  const double* p = as_doubles(f.data());
  const __m256d offs = _mm256_setr_pd(0.0, 0.0, 1.0, 1.0);
  const __m256d vdx = _mm256_set1_pd(dx);
  const __m256d vx0 = _mm256_set1_pd(x0);
  __m256d pw = _mm256_setzero_pd();
  __m256d fm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(p + 2 * i);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), offs);
    const __m256d x = _mm256_fmadd_pd(idx, vdx, vx0);
    pw = _mm256_add_pd(pw, sq);
    fm = _mm256_fmadd_pd(x, sq, fm);
  }
  Moments m{hsum(pw), hsum(fm)};
  for (; i < n; ++i) {
    const double q = std::norm(f[i]);
    m.power += q;
    m.first += (x0 + static_cast<double>(i) * dx) * q;
  }
  return m;
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g) {
  assert(f.size() == g.size());
  const std::size_t n = f.size();
  const double* a = as_doubles(f.data());
  const double* b = as_doubles(g.data());
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d fv = _mm256_loadu_pd(a + 2 * i);
    const __m256d gv = _mm256_loadu_pd(b + 2 * i);
    re = _mm256_fmadd_pd(fv, gv, re);
    im = _mm256_fmadd_pd(fv, _mm256_permute_pd(gv, 0x5), im);
  }
  // im lanes hold [fr*gi, fi*gr, ...]; conj(f)*g takes their difference.
  alignas(32) double il[4];
  _mm256_store_pd(il, im);
  cplx s{hsum(re), (il[0] - il[1]) + (il[2] - il[3])};
  if (i < n) s += scalar::inner(f.subspan(i), g.subspan(i));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  if (i < n) s += scalar::dot(a.subspan(i), b.subspan(i));
  return s;
}

}  // namespace nmzi::kernels::avx2
