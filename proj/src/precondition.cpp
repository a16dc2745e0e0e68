#include "mcsig/precondition.hpp"

#include <algorithm>
#include <complex>
#include <vector>

namespace mcsig {

namespace {

Vec windowed_mean(const VecRef& x, Index window) {
  const Index n = x.size();
  if (window == 1) return x;
  // prefix[i] = sum of x[0..i-1]
  Vec prefix(n + 1);
  prefix[0] = 0.0;
  for (Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

  const Index back = (window - 1) / 2;
  const Index front = window / 2;
  Vec out(n);
  for (Index i = 0; i < n; ++i) {
    const Index lo = std::max<Index>(0, i - back);
    const Index hi = std::min<Index>(n - 1, i + front);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

Vec windowed_median(const VecRef& x, Index window) {
  const Index n = x.size();
  const Index back = (window - 1) / 2;
  const Index front = window / 2;
  Vec out(n);
  std::vector<double> buf;
  buf.reserve(static_cast<size_t>(window));
  for (Index i = 0; i < n; ++i) {
    const Index lo = std::max<Index>(0, i - back);
    const Index hi = std::min<Index>(n - 1, i + front);
    buf.assign(x.data() + lo, x.data() + hi + 1);
    const size_t m = buf.size() / 2;
    std::nth_element(buf.begin(), buf.begin() + m, buf.end());
    double med = buf[m];
    if (buf.size() % 2 == 0) {
      const double below = *std::max_element(buf.begin(), buf.begin() + m);
      med = 0.5 * (med + below);
    }
    out[i] = med;
  }
  return out;
}

}  // namespace

Vec baseline_estimate(const VecRef& x, Index window, Approach approach) {
  require(x.size() > 0, ErrorCode::EmptySignal, "baseline of empty signal");
  require(window >= 1, ErrorCode::InvalidArgument, "window must be >= 1");
  require(window <= x.size(), ErrorCode::WindowTooLarge,
          "window exceeds signal length");
  return approach == Approach::Mean ? windowed_mean(x, window)
                                    : windowed_median(x, window);
}

Vec drift_reject(const VecRef& x, Index window1, Index window2,
                 Approach approach) {
  const Vec stage1 = baseline_estimate(x, window1, approach);
  const Vec stage2 = baseline_estimate(stage1, window2, approach);
  return x - stage2;
}

TrendResult sig_trend(const VecRef& x) {
  const Index n = x.size();
  require(n >= 3, ErrorCode::SignalTooShort, "trend needs >= 3 samples");

  TrendResult result;
  result.knots.push_back(0);
  for (Index i = 1; i + 1 < n; ++i)
    if (x[i] < x[i - 1] && x[i] < x[i + 1]) result.knots.push_back(i);
  result.knots.push_back(n - 1);

  result.trend.resize(n);
  for (size_t k = 0; k + 1 < result.knots.size(); ++k) {
    const Index a = result.knots[k];
    const Index b = result.knots[k + 1];
    const double slope = (x[b] - x[a]) / static_cast<double>(b - a);
    for (Index i = a; i <= b; ++i)
      result.trend[i] = x[a] + slope * static_cast<double>(i - a);
  }
  return result;
}

Index cic_comb_length(double fs, double bw) {
  // Chosen so the composite four-section response is roughly `bw` wide.
  return std::max<Index>(2, round_index(0.45 * fs / bw));
}

namespace {

// One causal integrator-comb pass on a complex sequence: running sum (the
// integrator) differenced at lag L (the comb), normalized by the live window
// length so constants pass with unit gain even during the fill-in region.
void comb_pass(CVec& x, Index comb) {
  const Index n = x.size();
  CVec prefix(n + 1);
  prefix[0] = 0.0;
  for (Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  for (Index i = 0; i < n; ++i) {
    const Index lo = std::max<Index>(0, i - comb + 1);
    x[i] = (prefix[i + 1] - prefix[lo]) / static_cast<double>(i - lo + 1);
  }
}

void comb_pass_reverse(CVec& x, Index comb) {
  x.reverseInPlace();
  comb_pass(x, comb);
  x.reverseInPlace();
}

}  // namespace

Vec cic_bandpass(const VecRef& x, double fs, const BandSpec& band, int order) {
  require(order >= 2 && order % 2 == 0, ErrorCode::OddOrder,
          "comb cascade order must be even and >= 2");
  band.check_against(fs);
  const Index n = x.size();
  require(n >= 2, ErrorCode::SignalTooShort, "band-pass of <2 samples");

  const Index comb = cic_comb_length(fs, band.bw);
  const double w0 = 2.0 * EIGEN_PI * band.f0 / fs;

  // Shift the band center to DC, smooth, shift back.
  CVec shifted(n);
  for (Index i = 0; i < n; ++i) {
    const double ph = -w0 * static_cast<double>(i);
    shifted[i] = x[i] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  const int half = order / 2;
  for (int p = 0; p < half; ++p) comb_pass(shifted, comb);
  for (int p = 0; p < half; ++p) comb_pass_reverse(shifted, comb);

  Vec out(n);
  for (Index i = 0; i < n; ++i) {
    const double ph = w0 * static_cast<double>(i);
    out[i] = 2.0 * (shifted[i] * std::complex<double>(std::cos(ph), std::sin(ph)))
                       .real();
  }
  return out;
}

}  // namespace mcsig
