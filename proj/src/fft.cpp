#include "dgum/fft.hpp"

#include <vector>

#include <unsupported/Eigen/FFT>

namespace dgum {

void fft2(ComplexField& data, bool inverse) {
  using Complex = std::complex<double>;
  const Index rows = data.rows();
  const Index cols = data.cols();

  // Eigen::FFT caches twiddles per length, so one instance per call is fine.
  Eigen::FFT<double> fft;
  std::vector<Complex> in;
  std::vector<Complex> out;

  // Length-1 transforms are the identity (and kissfft does not handle them).
  in.resize(cols);
  for (Index r = 0; r < rows && cols > 1; ++r) {
    Complex* row = data.data() + r * cols;
    in.assign(row, row + cols);
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    std::copy(out.begin(), out.end(), row);
  }

  in.resize(rows);
  for (Index c = 0; c < cols && rows > 1; ++c) {
    for (Index r = 0; r < rows; ++r) in[r] = data(r, c);
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    for (Index r = 0; r < rows; ++r) data(r, c) = out[r];
  }
}

}  // namespace dgum
