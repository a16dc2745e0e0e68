#ifndef MCSIG_PRECONDITION_HPP
#define MCSIG_PRECONDITION_HPP

#include "mcsig/defaults.hpp"
#include "mcsig/types.hpp"

namespace mcsig {

enum class Approach { Mean, Median };

// Local baseline of a signal: central tendency over a window of length
// `window` centered at each sample, truncated where the window leaves the
// signal. Output length equals input length.
Vec baseline_estimate(const VecRef& x, Index window, Approach approach);

// Two-stage baseline-wander cancellation: the baseline of the baseline is
// subtracted from the raw signal, removing slow drifts of either sign.
Vec drift_reject(const VecRef& x, Index window1, Index window2,
                 Approach approach = Approach::Mean);
inline Vec drift_reject(const VecRef& x, Index window1) {
  return drift_reject(x, window1, window1, Approach::Mean);
}

// Default drift window in samples for a given sampling rate.
inline Index drift_window_samples(double fs) {
  return round_index(defaults::kDriftWindowS * fs);
}

struct TrendResult {
  Vec trend;                   // piecewise-linear interpolation, full length
  std::vector<Index> knots;    // strict local minima plus both endpoints
};

// Lower trend of a signal through its strict local minima.
TrendResult sig_trend(const VecRef& x);

// Zero-phase band-pass built from cascaded integrator-comb (moving-average)
// sections around a complex heterodyne at the band center. `order` sections
// total, half run forward and half backward, which cancels the group delay
// exactly; odd orders are rejected. Passband gain is unity at f0.
Vec cic_bandpass(const VecRef& x, double fs, const BandSpec& band,
                 int order = defaults::kCicOrder);

// Comb length used per section for a given rate / bandwidth; exposed for
// callers that need to reason about edge-transient extents.
Index cic_comb_length(double fs, double bw);

}  // namespace mcsig

#endif
