#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rittlab/numerics.hpp"

namespace rittlab {

std::size_t next_pow2(std::size_t n);

// In-place radix-2 transform; a.size() must be a power of two.
// inverse=true applies the conjugate transform with the 1/n scaling.
void fft_pow2(std::vector<cdouble>& a, bool inverse);

// Linear convolution, output length a.size()+b.size()-1.
std::vector<cdouble> convolve_fft_raw(const std::vector<cdouble>& a, const std::vector<cdouble>& b);
// Real inputs packed into a single complex transform (half the work of the complex route).
std::vector<double> convolve_fft_real(const std::vector<double>& a, const std::vector<double>& b);

// Direct O(n*m) convolution with a compensated accumulator per output; the
// reference route the FFT path is certified against.
std::vector<cdouble> convolve_direct_raw(const std::vector<cdouble>& a, const std::vector<cdouble>& b);
std::vector<double> convolve_direct_real(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rittlab
