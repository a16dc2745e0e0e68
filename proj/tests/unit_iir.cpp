#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcsig/iir.hpp"
#include "test_util.hpp"

using namespace mcsig;
using test::tone;

namespace {

double mag_db(const std::vector<Sos>& sections, double f, double fs) {
  return 20.0 * std::log10(std::abs(sos_response(sections, f, fs)));
}

}  // namespace

TEST_CASE("elliptic low-pass meets its ripple and attenuation specs") {
  const double fs = 1000.0;
  const auto sections = elliptic_lowpass(4, 0.1, 50.0, 30.0, fs);

  // Passband: deviation from 0 dB stays inside the 0.1 dB ripple.
  for (double f = 0.5; f <= 30.0; f += 0.25) {
    const double db = mag_db(sections, f, fs);
    CHECK(db <= 0.01);
    CHECK(db >= -0.11);
  }

  // Find where the response first reaches -50 dB; the transition must be
  // sharp and everything beyond must stay at or below the stopband floor.
  double edge = 0.0;
  for (double f = 30.0; f < fs / 2; f += 0.25) {
    if (mag_db(sections, f, fs) <= -50.0) {
      edge = f;
      break;
    }
  }
  // transition ratio for these specs at fourth order is about 2.4
  REQUIRE(edge > 30.0);
  CHECK(edge < 78.0);
  for (double f = edge; f < fs / 2; f += 1.0)
    CHECK(mag_db(sections, f, fs) <= -49.5);
}

TEST_CASE("elliptic design scales with the sampling rate") {
  for (double fs : {250.0, 500.0, 2048.0}) {
    const auto sections = elliptic_lowpass(4, 0.1, 50.0, 30.0, fs);
    // even order: DC sits at the ripple floor
    CHECK(mag_db(sections, 1.0, fs) <= 0.01);
    CHECK(mag_db(sections, 1.0, fs) >= -0.11);
    CHECK(mag_db(sections, 29.0, fs) > -0.11);
    CHECK(mag_db(sections, std::min(100.0, 0.45 * fs), fs) < -40.0);
  }
}

TEST_CASE("odd-order elliptic prototype still yields a valid low-pass") {
  const double fs = 500.0;
  const auto sections = elliptic_lowpass(5, 0.5, 40.0, 50.0, fs);
  // odd order: unit gain at DC
  CHECK(mag_db(sections, 0.1, fs) == doctest::Approx(0.0).epsilon(0.02));
  CHECK(mag_db(sections, 45.0, fs) > -0.6);
  CHECK(mag_db(sections, 150.0, fs) < -39.0);
}

TEST_CASE("filtfilt cancels the phase of an in-band tone") {
  const double fs = 500.0;
  const Index n = static_cast<Index>(8 * fs);
  const auto sections = elliptic_lowpass(4, 0.1, 50.0, 30.0, fs);
  const Vec x = tone(1.0, fs, n);
  const Vec y = filtfilt(sections, x);
  CHECK(std::abs(test::xcorr_peak_lag(x, y, 25)) <= 1);
  CHECK(test::rms_mid(y) == doctest::Approx(test::rms_mid(x)).epsilon(0.02));
}

TEST_CASE("filtfilt kills a stopband tone") {
  const double fs = 1000.0;
  const Index n = static_cast<Index>(4 * fs);
  const auto sections = elliptic_lowpass(4, 0.1, 50.0, 30.0, fs);
  const Vec x = tone(100.0, fs, n);
  CHECK(test::rms_mid(filtfilt(sections, x)) < 0.01 * test::rms_mid(x));
}

TEST_CASE("filtfilt of zero input is zero") {
  const auto sections = elliptic_lowpass(4, 0.1, 50.0, 30.0, 500.0);
  const Vec z = Vec::Zero(1000);
  CHECK(filtfilt(sections, z).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("median filter basics") {
  Vec x(7);
  x << 5, 1, 9, 3, 7, 2, 8;
  const Vec m = median_filter(x, 3);
  // centered windows, truncated at the edges
  const double expected[7] = {3, 5, 3, 7, 3, 7, 5};
  for (Index i = 0; i < 7; ++i) CHECK(m[i] == doctest::Approx(expected[i]));

  // a lone spike disappears
  Vec s = Vec::Zero(20);
  s[10] = 100.0;
  CHECK(median_filter(s, 5).lpNorm<Eigen::Infinity>() == 0.0);
}
