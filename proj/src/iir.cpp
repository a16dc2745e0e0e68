#include "mcsig/iir.hpp"

#include <algorithm>
#include <cmath>

#include "mcsig/precondition.hpp"

namespace mcsig {

namespace {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Descending Landen sequence of moduli, stopping once negligible.
std::vector<double> landen(double k) {
  std::vector<double> seq;
  for (int i = 0; i < 32 && k > 1e-16; ++i) {
    const double kp = std::sqrt(1.0 - k * k);
    k = std::pow(k / (1.0 + kp), 2.0);
    seq.push_back(k);
  }
  return seq;
}

// Jacobi cd with argument u in units of the quarter period K(k).
template <typename T>
T cde(T u, double k) {
  const std::vector<double> seq = landen(k);
  T w = std::cos(u * (kPi / 2.0));
  for (size_t i = seq.size(); i-- > 0;)
    w = (1.0 + seq[i]) * w / (1.0 + seq[i] * w * w);
  return w;
}

// Jacobi sn with argument u in units of K(k).
template <typename T>
T sne(T u, double k) {
  const std::vector<double> seq = landen(k);
  T w = std::sin(u * (kPi / 2.0));
  for (size_t i = seq.size(); i-- > 0;)
    w = (1.0 + seq[i]) * w / (1.0 + seq[i] * w * w);
  return w;
}

// Inverse of sne, returning u (in units of K) with sne(u, k) = w.
Complex asne(Complex w, double k) {
  std::vector<double> seq;
  seq.push_back(k);
  {
    double kk = k;
    for (int i = 0; i < 32 && kk > 1e-16; ++i) {
      const double kp = std::sqrt(1.0 - kk * kk);
      kk = std::pow(kk / (1.0 + kp), 2.0);
      seq.push_back(kk);
    }
  }
  for (size_t i = 1; i < seq.size(); ++i) {
    const double prev = seq[i - 1];
    w = 2.0 * w / ((1.0 + seq[i]) * (1.0 + std::sqrt(1.0 - prev * prev * w * w)));
  }
  return (2.0 / kPi) * std::asin(w);
}

// Solves the degree equation for the selectivity modulus k given the order
// and the ripple modulus k1.
double ellip_degree(int order, double k1) {
  const int half = order / 2;
  const double kc = std::sqrt(1.0 - k1 * k1);
  double prod = 1.0;
  for (int i = 1; i <= half; ++i) {
    const double ui = (2.0 * i - 1.0) / order;
    prod *= sne(ui, kc);
  }
  const double kp = std::pow(kc, order) * std::pow(prod, 4.0);
  return std::sqrt(1.0 - kp * kp);
}

Complex bilinear_map(Complex s, double fs) {
  const double two_fs = 2.0 * fs;
  return (two_fs + s) / (two_fs - s);
}

}  // namespace

ZpkAnalog elliptic_lowpass_analog(int order, double pass_ripple_db,
                                  double stop_atten_db) {
  require(order >= 1, ErrorCode::InvalidArgument, "filter order must be >= 1");
  const double ep = std::sqrt(std::pow(10.0, pass_ripple_db / 10.0) - 1.0);
  const double es = std::sqrt(std::pow(10.0, stop_atten_db / 10.0) - 1.0);
  const double k1 = ep / es;
  const double k = ellip_degree(order, k1);

  const int half = order / 2;
  const bool odd = order % 2 != 0;
  const Complex j(0.0, 1.0);
  const Complex v0 = -j * asne(j / ep, k1) / static_cast<double>(order);

  ZpkAnalog out;
  for (int i = 1; i <= half; ++i) {
    const double ui = (2.0 * i - 1.0) / order;
    const double zeta = cde(ui, k);
    const Complex zero = j / (k * zeta);
    const Complex pole = j * cde(Complex(ui, 0.0) - j * v0, k);
    out.zeros.push_back(zero);
    out.zeros.push_back(std::conj(zero));
    out.poles.push_back(pole);
    out.poles.push_back(std::conj(pole));
  }
  if (odd) out.poles.push_back(j * sne(j * v0, k));

  // Normalize so |H| at DC is 1 for odd orders and the ripple floor for even.
  Complex h0(1.0, 0.0);
  for (const Complex& z : out.zeros) h0 *= -z;
  for (const Complex& p : out.poles) h0 /= -p;
  double target = odd ? 1.0 : std::pow(10.0, -pass_ripple_db / 20.0);
  out.gain = target / std::abs(h0);
  return out;
}

std::vector<Sos> elliptic_lowpass(int order, double pass_ripple_db,
                                  double stop_atten_db, double cutoff_hz,
                                  double fs) {
  require(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0, ErrorCode::BandOutOfNyquist,
          "cutoff must lie below Nyquist");
  ZpkAnalog proto = elliptic_lowpass_analog(order, pass_ripple_db, stop_atten_db);

  const double warp = 2.0 * fs * std::tan(kPi * cutoff_hz / fs);
  std::vector<Complex> zd, pd;
  for (const Complex& z : proto.zeros) zd.push_back(bilinear_map(z * warp, fs));
  for (const Complex& p : proto.poles) pd.push_back(bilinear_map(p * warp, fs));

  // The prototype stores conjugate pairs adjacently, with a possible real
  // pole last; the bilinear map preserves that layout.
  std::vector<Sos> sections;
  const size_t pairs = pd.size() / 2;
  for (size_t i = 0; i < pairs; ++i) {
    const Complex p1 = pd[2 * i], p2 = pd[2 * i + 1];
    const Complex z1 = zd[2 * i], z2 = zd[2 * i + 1];
    Sos s;
    s.a1 = -(p1 + p2).real();
    s.a2 = (p1 * p2).real();
    s.b0 = 1.0;
    s.b1 = -(z1 + z2).real();
    s.b2 = (z1 * z2).real();
    sections.push_back(s);
  }
  if (pd.size() % 2 != 0) {
    // Real pole from an odd-order prototype; its bilinear zero sits at -1.
    Sos s;
    s.a1 = -pd.back().real();
    s.b0 = 1.0;
    s.b1 = 1.0;
    sections.push_back(s);
  }

  // Scale to the required gain at DC.
  const double target = order % 2 != 0
                            ? 1.0
                            : std::pow(10.0, -pass_ripple_db / 20.0);
  double dc = 1.0;
  for (const Sos& s : sections)
    dc *= (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  const double scale = target / dc;
  sections.front().b0 *= scale;
  sections.front().b1 *= scale;
  sections.front().b2 *= scale;
  return sections;
}

Vec sosfilt(const std::vector<Sos>& sections, const VecRef& x) {
  Vec y = x;
  for (const Sos& s : sections) {
    double w1 = 0.0, w2 = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      const double in = y[i];
      const double out = s.b0 * in + w1;
      w1 = s.b1 * in - s.a1 * out + w2;
      w2 = s.b2 * in - s.a2 * out;
      y[i] = out;
    }
  }
  return y;
}

Vec filtfilt(const std::vector<Sos>& sections, const VecRef& x) {
  const Index n = x.size();
  require(n >= 2, ErrorCode::SignalTooShort, "filtfilt of <2 samples");
  const Index pad =
      std::min<Index>(n - 1, 3 * (2 * static_cast<Index>(sections.size()) + 1));

  Vec ext(n + 2 * pad);
  for (Index i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  ext.segment(pad, n) = x;
  for (Index i = 0; i < pad; ++i)
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

  Vec fwd = sosfilt(sections, ext);
  fwd.reverseInPlace();
  Vec bwd = sosfilt(sections, fwd);
  bwd.reverseInPlace();
  return bwd.segment(pad, n);
}

std::complex<double> sos_response(const std::vector<Sos>& sections, double f,
                                  double fs) {
  const Complex z = std::exp(Complex(0.0, -2.0 * kPi * f / fs));
  Complex h(1.0, 0.0);
  for (const Sos& s : sections)
    h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (1.0 + s.a1 * z + s.a2 * z * z);
  return h;
}

Vec median_filter(const VecRef& x, Index window) {
  require(x.size() > 0, ErrorCode::EmptySignal, "median filter of empty signal");
  require(window >= 1, ErrorCode::InvalidArgument, "window must be >= 1");
  return baseline_estimate(x, std::min(window, x.size()), Approach::Median);
}

}  // namespace mcsig
