#include "mcsig/types.hpp"

#include "mcsig/defaults.hpp"

namespace mcsig {

BandSpec BandSpec::from_name(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  double lo = 0.0, hi = 0.0;
  if (lower == "delta") {
    lo = defaults::kDeltaLo; hi = defaults::kDeltaHi;
  } else if (lower == "theta") {
    lo = defaults::kThetaLo; hi = defaults::kThetaHi;
  } else if (lower == "alpha") {
    lo = defaults::kAlphaLo; hi = defaults::kAlphaHi;
  } else if (lower == "beta") {
    lo = defaults::kBetaLo; hi = defaults::kBetaHi;
  } else if (lower == "gamma") {
    lo = defaults::kGammaLo; hi = defaults::kGammaHi;
  } else {
    raise(ErrorCode::InvalidArgument, "unknown band name '" + name + "'");
  }
  BandSpec band = from_range(lo, hi);
  band.named_band = lower;
  return band;
}

}  // namespace mcsig
