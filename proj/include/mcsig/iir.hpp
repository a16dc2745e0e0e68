#ifndef MCSIG_IIR_HPP
#define MCSIG_IIR_HPP

#include <complex>
#include <vector>

#include "mcsig/types.hpp"

namespace mcsig {

// One biquad, denominator normalized to a0 = 1.
struct Sos {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Analog prototype as zeros / poles / gain (rad/s, low-pass at 1 rad/s).
struct ZpkAnalog {
  std::vector<std::complex<double>> zeros;
  std::vector<std::complex<double>> poles;
  double gain = 1.0;
};

// Elliptic (Cauer) low-pass prototype with the requested passband ripple and
// stopband attenuation, passband edge at 1 rad/s.
ZpkAnalog elliptic_lowpass_analog(int order, double pass_ripple_db,
                                  double stop_atten_db);

// Digital elliptic low-pass via bilinear transform with prewarped cutoff.
std::vector<Sos> elliptic_lowpass(int order, double pass_ripple_db,
                                  double stop_atten_db, double cutoff_hz,
                                  double fs);

// Direct-form II transposed cascade, zero initial state.
Vec sosfilt(const std::vector<Sos>& sections, const VecRef& x);

// Forward-backward application of the cascade with odd-reflection padding at
// both ends, cancelling the phase response.
Vec filtfilt(const std::vector<Sos>& sections, const VecRef& x);

// Complex frequency response of the cascade at frequency f (Hz).
std::complex<double> sos_response(const std::vector<Sos>& sections, double f,
                                  double fs);

// Running median with a centered window, truncated at the edges.
Vec median_filter(const VecRef& x, Index window);

}  // namespace mcsig

#endif
