#ifndef MCSIG_TEST_UTIL_HPP
#define MCSIG_TEST_UTIL_HPP

#include <cmath>

#include "mcsig/rng.hpp"
#include "mcsig/types.hpp"

namespace mcsig::test {

inline Vec tone(double freq, double fs, Index n, double amplitude = 1.0,
                double phase = 0.0) {
  Vec out(n);
  for (Index i = 0; i < n; ++i)
    out[i] = amplitude * std::cos(2.0 * EIGEN_PI * freq *
                                      static_cast<double>(i) / fs +
                                  phase);
  return out;
}

inline Vec gaussian_noise(std::uint64_t seed, Index n, double sigma = 1.0) {
  Rng rng(seed);
  Vec out(n);
  for (Index i = 0; i < n; ++i) out[i] = sigma * rng.gaussian();
  return out;
}

inline double rms(const Vec& x) {
  return std::sqrt(x.array().square().mean());
}

inline double rms_mid(const Vec& x, double edge_fraction = 0.1) {
  const Index skip = static_cast<Index>(x.size() * edge_fraction);
  return rms(x.segment(skip, x.size() - 2 * skip));
}

// Brute-force cross-correlation peak: the lag of y relative to x with the
// largest inner product. Positive lag means y is delayed.
inline long xcorr_peak_lag(const Vec& x, const Vec& y, long max_lag) {
  double best = -1.0;
  long best_lag = 0;
  const long n = static_cast<long>(x.size());
  for (long lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (long t = 0; t < n; ++t) {
      const long u = t + lag;
      if (u < 0 || u >= n) continue;
      acc += x[t] * y[u];
    }
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_lag = lag;
    }
  }
  return best_lag;
}

// Least-squares slope of y against x.
inline double fit_slope(const Vec& x, const Vec& y) {
  const double xm = x.mean(), ym = y.mean();
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  return num / den;
}

}  // namespace mcsig::test

#endif
