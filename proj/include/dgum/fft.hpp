#ifndef DGUM_FFT_HPP
#define DGUM_FFT_HPP

#include <complex>

#include "dgum/lattice.hpp"

namespace dgum {

using ComplexField = Field<std::complex<double>>;

/// In-place 2-D DFT. The forward transform is unnormalized; the inverse
/// carries the 1/(rows*cols) factor, so inverse(forward(x)) == x.
void fft2(ComplexField& data, bool inverse = false);

inline ComplexField fft2(const RealField& data) {
  ComplexField out = data.cast<std::complex<double>>();
  fft2(out, false);
  return out;
}

inline ComplexField ifft2(ComplexField data) {
  fft2(data, true);
  return data;
}

}  // namespace dgum

#endif  // DGUM_FFT_HPP
