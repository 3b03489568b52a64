#include "rittlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace rittlab {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2(std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // One exact table for the finest stage; coarser stages stride into it, so no
  // per-stage recurrence drift enters the twiddles.
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cdouble> tw(n / 2);
  const double step = sign * 2.0 * std::numbers::pi / double(n);
  for (std::size_t k = 0; k < n / 2; ++k) tw[k] = std::polar(1.0, step * double(k));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cdouble w = tw[k * stride];
        const cdouble u = a[i + k];
        const cdouble v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / double(n);
    for (auto& z : a) z *= inv;
  }
}

std::vector<cdouble> convolve_fft_raw(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  std::vector<cdouble> fa(n, cdouble{0.0, 0.0}), fb(n, cdouble{0.0, 0.0});
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft_pow2(fa, false);
  fft_pow2(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_pow2(fa, true);
  fa.resize(out_len);
  return fa;
}

std::vector<double> convolve_fft_real(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  // Pack a + i*b; the two spectra separate by Hermitian symmetry.
  std::vector<cdouble> f(n, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) f[i] = cdouble{a[i], 0.0};
  for (std::size_t i = 0; i < b.size(); ++i) f[i] += cdouble{0.0, b[i]};
  fft_pow2(f, false);
  // The product spectrum of a real result is Hermitian, so the unpack-multiply
  // can run pairwise in place instead of through a second full-size buffer.
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    const std::size_t kr = (n - k) & (n - 1);
    const cdouble fk = f[k];
    const cdouble fkr = std::conj(f[kr]);
    const cdouble fa = 0.5 * (fk + fkr);
    const cdouble fb = cdouble{0.0, -0.5} * (fk - fkr);
    const cdouble p = fa * fb;
    f[k] = p;
    f[kr] = std::conj(p);
  }
  fft_pow2(f, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = f[i].real();
  return out;
}

std::vector<cdouble> convolve_direct_raw(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<cdouble> out(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    KahanAccC acc;
    const std::size_t jlo = k >= b.size() - 1 ? k - (b.size() - 1) : 0;
    const std::size_t jhi = std::min(k, a.size() - 1);
    for (std::size_t j = jlo; j <= jhi; ++j) acc.add(a[j] * b[k - j]);
    out[k] = acc.value();
  }
  return out;
}

std::vector<double> convolve_direct_real(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<double> out(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    KahanAcc acc;
    const std::size_t jlo = k >= b.size() - 1 ? k - (b.size() - 1) : 0;
    const std::size_t jhi = std::min(k, a.size() - 1);
    for (std::size_t j = jlo; j <= jhi; ++j) acc.add(a[j] * b[k - j]);
    out[k] = acc.value();
  }
  return out;
}

}  // namespace rittlab
