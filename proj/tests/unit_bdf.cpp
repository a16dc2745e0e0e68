#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "mcsig/bdf.hpp"
#include "mcsig/precondition.hpp"
#include "mcsig/synth.hpp"
#include "test_util.hpp"

using namespace mcsig;

namespace {

// Hand-built single-channel file: gain 1 and offset 0 via matching physical
// and digital ranges.
std::vector<std::uint8_t> tiny_file(std::uint8_t b0, std::uint8_t b1,
                                    std::uint8_t b2) {
  BdfHeader h = BdfHeader::make(1, 1.0, 1, 1);
  Mat zero = Mat::Zero(1, 1);
  std::vector<std::uint8_t> bytes = write_bdf(h, zero);
  const size_t payload = bytes.size() - 3;
  bytes[payload] = b0;
  bytes[payload + 1] = b1;
  bytes[payload + 2] = b2;
  return bytes;
}

}  // namespace

TEST_CASE("24-bit decoding of hand-built fixtures") {
  // 01 00 00 -> +1, FF FF FF -> -1 in two's complement
  CHECK(parse_bdf(tiny_file(0x01, 0x00, 0x00)).physical(0, 0) == 1.0);
  CHECK(parse_bdf(tiny_file(0xFF, 0xFF, 0xFF)).physical(0, 0) == -1.0);
  // sign boundary: 00 00 80 is the most negative sample
  CHECK(parse_bdf(tiny_file(0x00, 0x00, 0x80)).physical(0, 0) == -8388608.0);
  CHECK(parse_bdf(tiny_file(0xFF, 0xFF, 0x7F)).physical(0, 0) == 8388607.0);
}

TEST_CASE("magic validation") {
  auto bytes = tiny_file(0, 0, 0);
  bytes[0] = 0x00;
  CHECK_THROWS_WITH_AS(parse_bdf(bytes), doctest::Contains("BadMagic"), Error);
  auto bytes2 = tiny_file(0, 0, 0);
  bytes2[3] = 'X';
  CHECK_THROWS_WITH_AS(parse_bdf(bytes2), doctest::Contains("BadMagic"),
                       Error);
}

TEST_CASE("truncation is an error, never a crash") {
  const auto bytes = tiny_file(1, 2, 3);
  for (size_t keep : {0UL, 100UL, 255UL, 256UL, 511UL, 512UL, 513UL}) {
    if (keep >= bytes.size()) continue;
    std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + keep);
    CHECK_THROWS_WITH_AS(parse_bdf(cut), doctest::Contains("TruncatedPayload"),
                         Error);
  }
}

TEST_CASE("header invariant violations") {
  BdfHeader h = BdfHeader::make(1, 1.0, 1, 1);
  Mat zero = Mat::Zero(1, 1);

  SUBCASE("equal digital bounds") {
    h.channels[0].digital_min = h.channels[0].digital_max = 5;
    CHECK_THROWS_WITH_AS(write_bdf(h, zero),
                         doctest::Contains("InvalidScaling"), Error);
  }
  SUBCASE("unknown record count is rejected") {
    auto bytes = write_bdf(h, zero);
    // num_records lives at offset 236, 8 chars
    const char* minus_one = "-1      ";
    std::copy(minus_one, minus_one + 8, bytes.begin() + 236);
    CHECK_THROWS_WITH_AS(parse_bdf(bytes), doctest::Contains("InvalidHeader"),
                         Error);
  }
}

TEST_CASE("round trip: zeros, random integers, quantum bound") {
  SUBCASE("all-zero two-channel record") {
    BdfHeader h = BdfHeader::make(2, 128.0, 1, 128);
    Mat data = Mat::Zero(2, 128);
    const BdfRecording back = parse_bdf(write_bdf(h, data));
    CHECK(back.physical == data);
    CHECK(back.header.num_channels() == 2);
    CHECK(back.header.sampling_rate(0) == 128.0);
  }
  SUBCASE("random integers at gain 1 survive exactly") {
    BdfHeader h = BdfHeader::make(3, 256.0, 2, 64);
    Rng rng(404);
    Mat data(3, 128);
    for (Index r = 0; r < 3; ++r)
      for (Index c = 0; c < 128; ++c)
        data(r, c) = std::floor(rng.uniform(-8388608.0, 8388608.0));
    const BdfRecording back = parse_bdf(write_bdf(h, data));
    CHECK(back.physical == data);
  }
  SUBCASE("scaled channels survive within one quantum") {
    BdfHeader h = BdfHeader::make(1, 100.0, 1, 50);
    h.channels[0].physical_min = -200.0;  // microvolts over the 24-bit range
    h.channels[0].physical_max = 200.0;
    const double quantum = h.channels[0].gain();
    Rng rng(7);
    Mat data(1, 50);
    for (Index c = 0; c < 50; ++c) data(0, c) = rng.uniform(-199.0, 199.0);
    const BdfRecording back = parse_bdf(write_bdf(h, data));
    CHECK((back.physical - data).cwiseAbs().maxCoeff() <= quantum);
  }
  SUBCASE("out-of-range value is rejected") {
    BdfHeader h = BdfHeader::make(1, 1.0, 1, 1);
    Mat data(1, 1);
    data(0, 0) = 8388608.0;  // one past the signed 24-bit maximum
    CHECK_THROWS_WITH_AS(write_bdf(h, data),
                         doctest::Contains("ValueOutOfDigitalRange"), Error);
    data(0, 0) = -8388608.0;
    CHECK_NOTHROW(write_bdf(h, data));
  }
}

TEST_CASE("header text fields are trimmed on read and padded on write") {
  BdfHeader h = BdfHeader::make(1, 1.0, 1, 4);
  h.subject_info = "subject 42";
  h.channels[0].label = "C3";
  h.channels[0].physical_dim = "uV";
  const BdfRecording back = parse_bdf(write_bdf(h, Mat::Zero(1, 4)));
  CHECK(back.header.subject_info == "subject 42");
  CHECK(back.header.channels[0].label == "C3");
  CHECK(back.header.channels[0].physical_dim == "uV");
}

TEST_CASE("payload layout is channel-major per record") {
  BdfHeader h = BdfHeader::make(2, 2.0, 2, 2);
  Mat data(2, 4);
  data << 1, 2, 3, 4,
          5, 6, 7, 8;
  const auto bytes = write_bdf(h, data);
  const size_t payload = 256 * 3;
  auto sample = [&](size_t i) {
    return static_cast<int>(bytes[payload + 3 * i]);
  };
  // record 0: ch0 {1,2}, ch1 {5,6}; record 1: ch0 {3,4}, ch1 {7,8}
  CHECK(sample(0) == 1);
  CHECK(sample(1) == 2);
  CHECK(sample(2) == 5);
  CHECK(sample(3) == 6);
  CHECK(sample(4) == 3);
  CHECK(sample(5) == 4);
  CHECK(sample(6) == 7);
  CHECK(sample(7) == 8);
}

TEST_CASE("load_trial_set composes parsing, drift removal and onsets") {
  namespace fs = std::filesystem;
  const std::string dir = fs::temp_directory_path() / "mcsig_bdf_test";
  fs::create_directories(dir);

  // three trials with an EMG burst at a known sample
  SynthSpec spec;
  spec.n_trials = 3;
  spec.n_channels = 2;
  spec.fs = 256.0;
  spec.trial_length_s = 3.0;
  spec.onset_s = 1.5;
  spec.tones = {{10.0, 20.0}};
  EmgSpec emg;
  emg.burst_amplitude_uv = 40.0;
  emg.quiet_noise_uv = 0.5;
  spec.emg = emg;
  spec.seed = 99;
  const SynthResult synth = gen_trial_set(spec);

  std::vector<std::string> files;
  for (Index t = 0; t < 3; ++t) {
    BdfHeader h = BdfHeader::make(3, spec.fs, 1,
                                  synth.trials.trials[t].cols());
    h.channels[0].label = "eeg1";
    h.channels[1].label = "eeg2";
    h.channels[2].label = "EMG";
    const std::string path = dir + "/trial" + std::to_string(t) + ".bdf";
    write_bdf_file(path, h, synth.trials.trials[t]);
    files.push_back(path);
  }

  SUBCASE("pass-through: no drift, no onsets") {
    LoadOptions options;
    options.drift_reject = false;
    options.detect_onsets = false;
    const LoadResult loaded = load_trial_set(files, {0, 1}, 2, options);
    CHECK(loaded.eeg.n_trials() == 3);
    CHECK(loaded.eeg.n_channels() == 2);
    CHECK(loaded.emg.n_channels() == 1);
    CHECK(loaded.onset_samples.empty());
    CHECK_FALSE(loaded.eeg.onset_samples.has_value());
    // values survive the 24-bit round trip within a quantum (gain 1 here)
    CHECK((loaded.eeg.trials[1].row(0) -
           synth.trials.trials[1].row(0)).cwiseAbs().maxCoeff() <= 1.0);
  }

  SUBCASE("drift flag applies the two-stage filter per channel") {
    LoadOptions options;
    options.drift_reject = true;
    options.detect_onsets = false;
    const LoadResult raw = load_trial_set(
        files, {0, 1}, 2, {.drift_reject = false, .detect_onsets = false});
    const LoadResult conditioned = load_trial_set(files, {0, 1}, 2, options);
    const Index w = round_index(options.drift_window_s * spec.fs);
    for (Index t = 0; t < 3; ++t) {
      const Vec expect =
          drift_reject(raw.eeg.trials[t].row(1).transpose(), w);
      CHECK((conditioned.eeg.trials[t].row(1).transpose() - expect)
                .lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  SUBCASE("onset flag attaches detected onsets near the ground truth") {
    LoadOptions options;
    options.drift_reject = false;
    options.detect_onsets = true;
    options.onset_window_s = 0.1;
    options.onset_th_coeff = 5.0;
    const LoadResult loaded = load_trial_set(files, {0, 1}, 2, options);
    REQUIRE(loaded.onset_samples.size() == 3);
    REQUIRE(loaded.eeg.onset_samples.has_value());
    const Index w = round_index(0.1 * spec.fs);
    for (size_t t = 0; t < 3; ++t) {
      const Index truth = synth.truth.onset_samples[t];
      CHECK(std::abs(loaded.onset_samples[t] - truth) <= w);
    }
  }

  SUBCASE("bad channel index names the file") {
    CHECK_THROWS_WITH_AS(
        load_trial_set(files, {0, 7}, 2,
                       {.drift_reject = false, .detect_onsets = false}),
        doctest::Contains("ChannelIndexOutOfRange"), Error);
  }

  fs::remove_all(dir);
}
