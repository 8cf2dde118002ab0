/**
 * Numerical verification backend.
 *
 * The exact pipeline predicts integer decay exponents (alpha for high
 * frequencies, beta for low) and synthesizes Lyapunov functionals with
 * certified constants.  This module measures the same quantities from the
 * other side:
 *
 *  - smin_oracle        : smallest singular value of a polynomial matrix
 *                         evaluated at a real frequency;
 *  - fit_hf_exponent /
 *    fit_lf_exponent    : log-log slope fits of the spectral decay rate over
 *                         a dyadic frequency ladder, snapped to integers;
 *  - lyapunov_monitor   : checks a synthesized functional along a simulated
 *                         trajectory (monotonicity and a sustained
 *                         weighted-dissipation inequality);
 *  - frequency_sweep    : per-frequency summary rows (smin, spectral rate,
 *                         fitted rate, monitor margin) with a serial
 *                         reference implementation and an OpenMP-parallel
 *                         version that produces bitwise-identical output;
 *  - write_sweep_csv    : stable CSV serialization of sweep rows.
 */
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "decaycert/fitline.hpp"
#include "decaycert/functional.hpp"
#include "decaycert/integrate.hpp"
#include "decaycert/matrix.hpp"
#include "decaycert/system.hpp"

namespace decaycert {

// === Slope fits over dyadic frequency ladders ===================================

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // never dropped: reported alongside the slope
  double xi_lo = 0.0;         // frequency window actually used by the fit
  double xi_hi = 0.0;
};

struct ExponentFit {
  SlopeFit fit;
  int matched = 0;  // the integer exponent the slope was snapped to
};

/** Dyadic ladder used by the exponent fits: xi = 2^(\pm j), j in [8, 20]. */
inline constexpr int kFitLadderLoExp = 8;
inline constexpr int kFitLadderHiExp = 20;
/** Number of ladder points (the largest |log2 xi|) retained for the fit. */
inline constexpr int kFitWindowPoints = 8;
/** Maximum distance of the rescaled slope from an integer before rejection. */
inline constexpr double kFitSlopeTolerance = 0.15;

/**
 * Input:  validated system.
 * Action: sample the spectral decay rate at xi = 2^j for j in [8, 20], fit
 *         log2(rate) against log2(xi) over the last kFitWindowPoints points
 *         (deepest into the asymptotic regime), and snap -slope/2 to the
 *         nearest integer.
 * Output: ExponentFit; matched is the measured high-frequency exponent.
 * Errors: NonIntegerSlope when -slope/2 is farther than kFitSlopeTolerance
 *         from every integer.
 */
ExponentFit fit_hf_exponent(const SystemSpec& sys);

/** Mirror of fit_hf_exponent over xi = 2^(-j); matched snaps slope/2. */
ExponentFit fit_lf_exponent(const SystemSpec& sys);

// === Smallest singular value of a polynomial matrix =============================

/**
 * Input:  polynomial matrix with at most 64 rows and columns, real frequency.
 * Action: evaluate the matrix at xi in double precision (Horner) and compute
 *         the smallest singular value via the eigendecomposition of M^H M.
 * Output: sigma_min(M(xi)) >= 0.
 * Errors: InvalidInput on empty or oversized matrices or non-finite xi.
 */
double smin_oracle(const PolyMatrix& m, double xi);

// === Lyapunov-inequality monitoring ==============================================

struct MonitorResult {
  bool pass = false;
  double empirical_c = 0.0;   // inf over samples of -dL/dt / (w(xi) L); > 0 on pass
  double worst_margin = 0.0;  // max relative increase of L between consecutive samples
};

/**
 * Input:  synthesized functional, its system, a trajectory at a frequency in
 *         the functional's regime, and the predicted decay exponent (alpha for
 *         a high-frequency functional, beta for a low-frequency one).
 * Action: evaluate L along the trajectory and check (a) L is non-increasing
 *         up to roundoff and (b) dL/dt <= -c w(xi) L holds with a sustained
 *         c > 0, where w(xi) = |xi|^(-2 alpha) resp. |xi|^(2 beta).
 * Output: MonitorResult with the empirical constant and worst monotonicity
 *         margin.  A failed check is a result, not an error.
 * Errors: RegimeMismatch when the trajectory frequency is outside the
 *         functional's regime; InvalidInput on empty trajectories.
 */
MonitorResult lyapunov_monitor(const LyapunovFunctional& functional, const SystemSpec& sys,
                               const Trajectory& traj, double predicted_exponent);

// === Frequency sweep =============================================================

struct SweepRow {
  double xi = 0.0;
  double smin = 0.0;           // sigma_min of the Kalman stack at xi
  double spectral_rate = 0.0;  // min real part of the symbol spectrum
  double fitted_rate = 0.0;    // decay rate measured from a simulated trajectory
  double lyap_margin = 0.0;    // monitor worst margin; NaN when no functional given
};

enum class SweepPolicy { Serial, Parallel };

struct SweepOptions {
  Regime regime = Regime::HF;
  int j_min = 0;  // frequencies 2^(\pm j) for j in [j_min, j_max]
  int j_max = 6;
  const LyapunovFunctional* functional = nullptr;  // optional: enables lyap_margin
  int kalman_order = -1;                           // stack order; -1 = certified order
  unsigned seed = 42;                              // per-frequency monitor initial states
  double monitor_t = 2.0;                          // horizon of the monitor trajectory
  int trajectory_samples = 1024;                   // samples for the fitted-rate trajectory
};

/**
 * Input:  validated system, sweep options, execution policy.
 * Action: for each dyadic frequency in the requested regime compute the row
 *         quantities; rows are independent, so the parallel policy distributes
 *         them over OpenMP threads and writes results by index, making its
 *         output bitwise identical to the serial reference.
 * Output: rows sorted by ascending xi.  fitted_rate is NaN when the measured
 *         trajectory did not decay cleanly; lyap_margin is NaN when no
 *         functional was supplied.
 * Errors: InvalidInput on an empty or inverted exponent range; KalmanViolated
 *         when no stack order is supplied and the system certifies at none.
 */
std::vector<SweepRow> frequency_sweep(const SystemSpec& sys, const SweepOptions& options,
                                      SweepPolicy policy);

/** Serialize rows as CSV: header xi,smin,spectral_rate,fitted_rate,lyap_margin. */
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace decaycert
