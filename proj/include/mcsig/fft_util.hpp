#ifndef MCSIG_FFT_UTIL_HPP
#define MCSIG_FFT_UTIL_HPP

#include "mcsig/types.hpp"

namespace mcsig {

// Thin deterministic wrappers around the FFT backend. All transforms are
// unscaled forward / 1-over-n inverse.
CVec fft(const CVec& x);
CVec ifft(const CVec& x);
CVec fft_real(const VecRef& x);

// Analytic signal by the frequency-domain construction: negative-frequency
// bins zeroed, positive bins doubled, DC (and Nyquist for even n) kept.
CVec analytic_signal(const VecRef& x);

// Symmetric Hamming window of length n.
Vec hamming(Index n);

Index next_pow2(Index n);

}  // namespace mcsig

#endif
