#include "mcsig/fft_util.hpp"

#include <unsupported/Eigen/FFT>

namespace mcsig {

CVec fft(const CVec& x) {
  Eigen::FFT<double> engine;
  CVec out(x.size());
  engine.fwd(out, x);
  return out;
}

CVec ifft(const CVec& x) {
  Eigen::FFT<double> engine;
  CVec out(x.size());
  engine.inv(out, x);
  return out;
}

CVec fft_real(const VecRef& x) {
  Eigen::FFT<double> engine;
  CVec out(x.size());
  const Vec contiguous = x;
  engine.fwd(out, contiguous);
  return out;
}

CVec analytic_signal(const VecRef& x) {
  const Index n = x.size();
  require(n >= 2, ErrorCode::SignalTooShort, "analytic signal needs >= 2 samples");
  CVec spectrum = fft_real(x);
  const Index half = n / 2;
  for (Index k = 1; k < half; ++k) spectrum[k] *= 2.0;
  if (n % 2 != 0) spectrum[half] *= 2.0;  // odd n: no distinct Nyquist bin
  for (Index k = half + 1; k < n; ++k) spectrum[k] = 0.0;
  return ifft(spectrum);
}

Vec hamming(Index n) {
  Vec w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const double step = 2.0 * EIGEN_PI / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(step * static_cast<double>(i));
  return w;
}

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace mcsig
