#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcsig/erp.hpp"
#include "mcsig/synth.hpp"
#include "test_util.hpp"

using namespace mcsig;
using test::tone;

namespace {

TrialSet make_trials(const std::vector<Vec>& rows, double fs) {
  TrialSet ts;
  ts.fs = fs;
  for (const Vec& row : rows) ts.trials.push_back(row.transpose());
  return ts;
}

ERPCurve synthetic_curve(const Vec& values, double fs, double trigger_s) {
  ERPCurve erp;
  erp.values = values;
  erp.fs = fs;
  erp.trigger_time_sec = trigger_s;
  erp.time_vec =
      Vec::LinSpaced(values.size(), 0.0, static_cast<double>(values.size() - 1)) /
      fs;
  erp.n_trials = 1;
  return erp;
}

}  // namespace

TEST_CASE("trigger_synch: zero shift for identical onsets") {
  const double fs = 100.0;
  const Vec trial = test::gaussian_noise(3, 500);
  const TrialSet ts = make_trials({trial, trial}, fs);
  const SynchronizedTrials s = trigger_synch(ts, 0, {2.0, 2.0}, 2.0);
  CHECK(s.trigger_time_sec == 2.0);
  CHECK(s.trigger_sample == 200);
  CHECK(s.ensemble.rows() == 2);
  CHECK(s.ensemble.cols() == 400);
  CHECK(s.ensemble.row(0).transpose() == trial.head(400));
  CHECK(s.ensemble.row(1).transpose() == trial.head(400));
  CHECK(s.time_vec[1] - s.time_vec[0] == doctest::Approx(1.0 / fs));
}

TEST_CASE("trigger_synch: hand-computed shifts and truncation") {
  const double fs = 100.0;
  const Vec a = test::gaussian_noise(1, 500);
  const Vec b = test::gaussian_noise(2, 500);
  const TrialSet ts = make_trials({a, b}, fs);
  const SynchronizedTrials s = trigger_synch(ts, 0, {2.0, 2.5}, 2.0);
  CHECK(s.trigger_time_sec == 2.0);
  CHECK(s.ensemble.cols() == 400);
  // first trial keeps its head, the second drops 50 samples
  CHECK(s.ensemble.row(0).transpose() == a.head(400));
  CHECK(s.ensemble.row(1).transpose() == b.segment(50, 400));
}

TEST_CASE("trigger_synch: errors") {
  const double fs = 100.0;
  const Vec a = test::gaussian_noise(1, 300);  // 3 s
  const TrialSet ts = make_trials({a}, fs);
  CHECK_THROWS_WITH_AS(trigger_synch(ts, 0, {1.5}, 2.0),
                       doctest::Contains("TrialTooShort"), Error);
  const TrialSet empty;
  CHECK_THROWS_WITH_AS(trigger_synch(empty, 0, {}, 2.0),
                       doctest::Contains("EmptyTrialSet"), Error);
  CHECK_THROWS_WITH_AS(trigger_synch(ts, 3, {1.0}, 1.0),
                       doctest::Contains("ChannelIndexOutOfRange"), Error);
}

TEST_CASE("trigger_synch: alignment only shifts and truncates") {
  const double fs = 128.0;
  Rng rng(5);
  std::vector<Vec> rows;
  std::vector<double> onsets;
  for (int t = 0; t < 4; ++t) {
    rows.push_back(test::gaussian_noise(100 + t, 700));
    onsets.push_back(rng.uniform(1.5, 2.5));
  }
  const SynchronizedTrials s =
      synch_vectors(rows, fs, onsets, 2.0);
  const double trigger = *std::min_element(onsets.begin(), onsets.end());
  for (Index t = 0; t < 4; ++t) {
    const Index shift = round_index((onsets[t] - trigger) * fs);
    for (Index i = 0; i < s.ensemble.cols(); i += 37)
      CHECK(s.ensemble(t, i) == rows[t][shift + i]);
  }
}

TEST_CASE("trigger_avg_erp: zeros in, zeros out") {
  const TrialSet ts = make_trials({Vec::Zero(1024), Vec::Zero(1024)}, 256.0);
  const ERPCurve erp =
      trigger_avg_erp(ts, 0, {2.0, 2.0}, BandSpec::from_name("alpha"));
  CHECK(erp.values.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(erp.values.size() == erp.time_vec.size());
}

TEST_CASE("trigger_avg_erp: plateau of an in-band tone matches tone power") {
  const double fs = 256.0;
  const Index n = static_cast<Index>(4 * fs);
  std::vector<Vec> rows;
  std::vector<double> onsets;
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    rows.push_back(tone(10.0, fs, n, 1.0, rng.uniform(0.0, 6.28)) +
                   test::gaussian_noise(200 + t, n, 0.05));
    onsets.push_back(2.0);
  }
  TrialSet ts = make_trials(rows, fs);
  const ERPCurve erp =
      trigger_avg_erp(ts, 0, onsets, BandSpec::from_range(8.0, 12.0));
  // unit tone power is 0.5; check the plateau away from filter edges
  const Index lo = static_cast<Index>(1.0 * fs);
  const Index hi = erp.values.size() - static_cast<Index>(0.5 * fs);
  const double plateau = erp.values.segment(lo, hi - lo).mean();
  CHECK(plateau == doctest::Approx(0.5).epsilon(0.08));
  CHECK(erp.values.minCoeff() >= 0.0);
}

TEST_CASE("trigger_avg_erp: band power dip tracks the generated drop") {
  SynthSpec spec;
  spec.n_trials = 24;
  spec.n_channels = 1;
  spec.fs = 256.0;
  spec.trial_length_s = 4.0;
  spec.onset_s = 2.0;
  spec.tones = {{10.0, 2.0}};
  ErdSpec erd;
  erd.band = BandSpec::from_name("alpha");
  erd.drop_fraction = 0.5;
  erd.start_s = 0.25;
  erd.end_s = 1.25;
  spec.erd = erd;
  spec.seed = 31;
  const SynthResult synth = gen_trial_set(spec);

  const ERPCurve erp = trigger_avg_erp(synth.trials, 0,
                                       synth.truth.onset_times,
                                       BandSpec::from_name("alpha"));
  const double trigger = erp.trigger_time_sec;
  auto mean_between = [&](double a, double b) {
    double acc = 0.0;
    Index count = 0;
    for (Index i = 0; i < erp.values.size(); ++i)
      if (erp.time_vec[i] >= trigger + a && erp.time_vec[i] < trigger + b) {
        acc += erp.values[i];
        ++count;
      }
    return acc / static_cast<double>(count);
  };
  const double inside = mean_between(0.55, 0.95);   // deep inside the drop
  const double before = mean_between(-1.3, -0.3);
  CHECK(inside / before == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("trigger_avg_erp: values stay nonnegative on fuzzed inputs") {
  const double fs = 128.0;
  Rng rng(555);
  for (int round = 0; round < 10; ++round) {
    std::vector<Vec> rows;
    std::vector<double> onsets;
    const int n_trials = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int t = 0; t < n_trials; ++t) {
      rows.push_back(test::gaussian_noise(rng.next_u64(), 512,
                                          rng.uniform(0.1, 40.0)));
      onsets.push_back(rng.uniform(1.2, 1.6));
    }
    const TrialSet ts = make_trials(rows, fs);
    const ERPCurve erp = trigger_avg_erp(
        ts, 0, onsets, BandSpec::from_range(12.0, 32.0), {.duration_s = 1.5});
    CHECK(erp.values.minCoeff() >= 0.0);
  }
}

TEST_CASE("erp_quantification: flat curve has no segments") {
  const double fs = 100.0;
  const ERPCurve erp = synthetic_curve(Vec::Constant(500, 2.0), fs, 2.0);
  const ErdErsReport report = erp_quantification(erp);
  CHECK(report.reference_value == 2.0);
  CHECK(report.reference_std == 0.0);
  CHECK(report.segments.empty());
  CHECK((report.quant_erp.array() == 100.0).all());
}

TEST_CASE("erp_quantification: rectangular dip yields one segment with the "
          "analytic area") {
  const double fs = 1000.0;
  const Index n = 4500;
  Vec values = Vec::Constant(n, 1.0);
  // drop to 40% between 2.3006 s and 2.8006 s (off the sample grid)
  const double t0 = 2.3006, t1 = 2.8006;
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    if (t >= t0 && t < t1) values[i] = 0.4;
  }
  const ERPCurve erp = synthetic_curve(values, fs, 2.0);
  const ErdErsReport report = erp_quantification(erp);
  REQUIRE(report.segments.size() == 1);
  const ErdErsSegment& seg = report.segments[0];
  CHECK(seg.kind == ErdErsSegment::Kind::Erd);
  CHECK(seg.start_s == doctest::Approx(t0).epsilon(0.002));
  CHECK(seg.end_s == doctest::Approx(t1).epsilon(0.002));
  // analytic: rectangle 60 below the reference line, normalized by length
  CHECK(seg.area_pct == doctest::Approx(60.0).epsilon(0.02));
}

TEST_CASE("erp_quantification: excursions inside the confidence band are "
          "ignored") {
  const double fs = 100.0;
  const Index n = 500;
  Rng rng(3);
  Vec values(n);
  for (Index i = 0; i < n; ++i) values[i] = 10.0 + rng.uniform(-0.5, 0.5);
  // reference fluctuation makes the band wide; a shallow dip stays inside
  for (Index i = 320; i < 360; ++i) values[i] = 9.2;
  const ERPCurve erp = synthetic_curve(values, fs, 2.0);
  QuantOptions opt;
  opt.cof_intv = 3.0;
  const ErdErsReport report = erp_quantification(erp, opt);
  CHECK(report.segments.empty());
}

TEST_CASE("erp_quantification: rise above the band is an ERS segment") {
  const double fs = 200.0;
  const Index n = 1000;
  Vec values = Vec::Constant(n, 1.0);
  for (Index i = 500; i < 600; ++i) values[i] = 1.8;
  const ERPCurve erp = synthetic_curve(values, fs, 2.0);
  const ErdErsReport report = erp_quantification(erp);
  REQUIRE(report.segments.size() == 1);
  CHECK(report.segments[0].kind == ErdErsSegment::Kind::Ers);
  CHECK(report.segments[0].area_pct == doctest::Approx(80.0).epsilon(0.05));
}

TEST_CASE("erp_quantification: positive scaling leaves the report unchanged") {
  const double fs = 250.0;
  const Index n = 1500;
  Rng rng(17);
  Vec values(n);
  for (Index i = 0; i < n; ++i) values[i] = 5.0 + rng.uniform(-0.2, 0.2);
  for (Index i = 700; i < 850; ++i) values[i] = 1.0;
  const ERPCurve base_curve = synthetic_curve(values, fs, 2.0);
  ERPCurve scaled_curve = base_curve;
  scaled_curve.values *= 37.5;

  const ErdErsReport a = erp_quantification(base_curve);
  const ErdErsReport b = erp_quantification(scaled_curve);
  REQUIRE(a.segments.size() == b.segments.size());
  REQUIRE(!a.segments.empty());
  for (size_t i = 0; i < a.segments.size(); ++i) {
    CHECK(a.segments[i].start_s ==
          doctest::Approx(b.segments[i].start_s).epsilon(1e-9));
    CHECK(a.segments[i].end_s ==
          doctest::Approx(b.segments[i].end_s).epsilon(1e-9));
    CHECK(a.segments[i].area_pct ==
          doctest::Approx(b.segments[i].area_pct).epsilon(1e-9));
  }
  CHECK((a.quant_erp - b.quant_erp).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("erp_quantification: errors") {
  const double fs = 100.0;
  const ERPCurve erp = synthetic_curve(Vec::Constant(300, 1.0), fs, 0.5);
  CHECK_THROWS_WITH_AS(erp_quantification(erp),
                       doctest::Contains("ReferenceOutsideSignal"), Error);
  const ERPCurve zero = synthetic_curve(Vec::Zero(500), fs, 2.0);
  CHECK_THROWS_WITH_AS(erp_quantification(zero),
                       doctest::Contains("ZeroReference"), Error);
}

TEST_CASE("tf maps: zeros give zero maps for all methods") {
  const TrialSet ts = make_trials({Vec::Zero(1024), Vec::Zero(1024)}, 256.0);
  for (TfMethod m : {TfMethod::Stft, TfMethod::Cwt, TfMethod::Nbch}) {
    TfOptions opt;
    opt.method = m;
    const TFMap map = trigger_avg_tf_erp(ts, 0, {2.0, 2.0}, opt);
    CHECK(map.power.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(map.power.rows() == map.freq_vec.size());
    CHECK(map.power.cols() == map.time_vec.size());
  }
}

TEST_CASE("tf maps: STFT concentrates a pure tone in its bin") {
  const double fs = 256.0;
  const Index n = static_cast<Index>(4 * fs);
  std::vector<Vec> rows;
  std::vector<double> onsets;
  for (int t = 0; t < 4; ++t) {
    rows.push_back(tone(10.0, fs, n, 1.0, 0.3 * t));
    onsets.push_back(2.0);
  }
  const TrialSet ts = make_trials(rows, fs);
  TfOptions opt;
  opt.method = TfMethod::Stft;
  const TFMap map = trigger_avg_tf_erp(ts, 0, onsets, opt);

  Vec row_energy = map.power.rowwise().sum();
  Index peak = 0;
  row_energy.maxCoeff(&peak);
  CHECK(std::abs(map.freq_vec[peak] - 10.0) <=
        map.freq_vec[1] - map.freq_vec[0]);
  double near = 0.0;
  for (Index r = std::max<Index>(0, peak - 1);
       r <= std::min<Index>(row_energy.size() - 1, peak + 1); ++r)
    near += row_energy[r];
  CHECK(near >= 0.9 * row_energy.sum());
}

TEST_CASE("tf maps: scalogram puts the tone on the nearest scale row") {
  const double fs = 128.0;
  const Index n = static_cast<Index>(4 * fs);
  const TrialSet ts = make_trials({tone(10.0, fs, n)}, fs);
  TfOptions opt;
  opt.method = TfMethod::Cwt;
  const TFMap map = trigger_avg_tf_erp(ts, 0, {2.0}, opt);
  Vec row_energy = map.power.rowwise().sum();
  Index peak = 0;
  row_energy.maxCoeff(&peak);
  Index nearest = 0;
  (map.freq_vec.array() - 10.0).abs().minCoeff(&nearest);
  CHECK(std::abs(peak - nearest) <= 1);
}

TEST_CASE("tf maps: map energy is monotone in input energy") {
  const double fs = 128.0;
  const Index n = 512;
  const Vec base = test::gaussian_noise(9, n);
  for (TfMethod m : {TfMethod::Stft, TfMethod::Cwt}) {
    TfOptions opt;
    opt.method = m;
    const TrialSet small = make_trials({base}, fs);
    const TrialSet big = make_trials({2.0 * base}, fs);
    const double e_small =
        trigger_avg_tf_erp(small, 0, {2.0}, opt).power.sum();
    const double e_big = trigger_avg_tf_erp(big, 0, {2.0}, opt).power.sum();
    CHECK(e_big >= e_small);
  }
}

TEST_CASE("tf maps: narrow-band rows dip only inside the dropped band") {
  SynthSpec spec;
  spec.n_trials = 24;
  spec.n_channels = 1;
  spec.fs = 128.0;
  spec.trial_length_s = 4.0;
  spec.onset_s = 2.0;
  spec.tones = {{9.0, 2.0}, {21.0, 2.0}};
  ErdSpec erd;
  erd.band = BandSpec::from_name("alpha");
  erd.drop_fraction = 0.3;
  erd.start_s = 0.25;
  erd.end_s = 1.25;
  spec.erd = erd;
  spec.seed = 77;
  const SynthResult synth = gen_trial_set(spec);

  TfOptions opt;
  opt.method = TfMethod::Nbch;
  const TFMap map = trigger_avg_tf_erp(synth.trials, 0,
                                       synth.truth.onset_times, opt);
  const double trigger = map.trigger_time_sec;
  auto row_ratio = [&](Index row) {
    double inside = 0.0, before = 0.0;
    Index n_in = 0, n_before = 0;
    for (Index i = 0; i < map.time_vec.size(); ++i) {
      const double rel = map.time_vec[i] - trigger;
      if (rel >= 0.55 && rel < 0.95) {
        inside += map.power(row, i);
        ++n_in;
      } else if (rel >= -1.3 && rel < -0.3) {
        before += map.power(row, i);
        ++n_before;
      }
    }
    return (inside / n_in) / (before / n_before);
  };
  Index in_row = 0, out_row = 0;
  (map.freq_vec.array() - 9.0).abs().minCoeff(&in_row);
  (map.freq_vec.array() - 21.0).abs().minCoeff(&out_row);
  CHECK(row_ratio(out_row) / row_ratio(in_row) >= 2.0);
}

TEST_CASE("tf method parsing") {
  CHECK(parse_tf_method("stft") == TfMethod::Stft);
  CHECK(parse_tf_method("CWT") == TfMethod::Cwt);
  CHECK(parse_tf_method("Nbch") == TfMethod::Nbch);
  CHECK_THROWS_WITH_AS(parse_tf_method("wigner"),
                       doctest::Contains("UnknownMethod"), Error);
}
