// Cached FFTW plans behind plain forward/backward transforms.
// Unnormalized: forward then backward multiplies by n.
// Thread safe; plans are created once per size under a lock.
#pragma once

#include <complex>
#include <cstddef>

namespace pulselab::dft {

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);
void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);

} // namespace pulselab::dft
