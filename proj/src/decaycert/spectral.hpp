/**
 * Spectral sampling of the frequency symbol
 *
 *     E(xi) = i xi A + B^a + B^s,
 *
 * whose eigenvalue real parts are the per-mode decay rates of the system
 * (solutions of the mode ODE behave like exp(-E(xi) t)).
 *
 * The decay rate at a frequency is the smallest real part of the spectrum;
 * it shrinks polynomially at both ends of the frequency axis while the
 * eigenvalue magnitudes grow like |xi|, so for the fitting windows used by
 * the exponent-measurement routines the interesting real parts lie far below
 * what a double-precision eigensolver can resolve.  For small systems we
 * therefore compute the characteristic polynomial exactly (Gaussian-rational
 * coefficients, with xi converted bit-for-bit to a rational) and find its
 * roots at 320-bit precision; larger systems fall back to a dense complex
 * eigensolver.
 */
#pragma once

#include <complex>
#include <vector>

#include "decaycert/system.hpp"

namespace decaycert {

struct SpectralSample {
  double xi = 0.0;
  std::vector<std::complex<double>> eigenvalues;  // of E(xi), sorted by (re, im)
  double rate = 0.0;                              // min real part of the spectrum
};

/** Largest dimension still routed through the exact-polynomial root finder. */
inline constexpr int kExactSpectrumMaxDim = 12;

/**
 * Input:  validated system and a frequency xi != 0 (finite).
 * Action: assemble E(xi) = i xi A + B^a + B^s and compute its spectrum; for
 *         n <= kExactSpectrumMaxDim via the exact characteristic polynomial
 *         and a 320-bit Durand-Kerner iteration with Newton polishing, else
 *         via a dense complex eigensolver in double precision.
 * Output: SpectralSample with eigenvalues sorted by (re, im) and
 *         rate = min re.  When the Kalman condition holds, rate > 0.
 * Errors: InvalidInput when xi is 0 or non-finite, or n > 64.
 */
SpectralSample spectral_rate(const SystemSpec& sys, double xi);

}  // namespace decaycert
