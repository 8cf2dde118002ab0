/**
 * Time integration of single Fourier modes and decay-rate measurement.
 *
 * A mode at frequency xi obeys the linear ODE
 *
 *     d/dt U = -(i xi A + B^a + B^s) U = G(xi) U,
 *
 * integrated either by classical RK4 under an explicit stability step bound
 * (integrate_mode) or, for the long horizons needed when the decay rate is
 * tiny, by precomputing the matrix exponential of one sample interval and
 * repeatedly applying it (propagate_mode).  decay_fit turns a sufficiently
 * decayed trajectory into a measured exponential rate by least squares on
 * log |U(t)| over the final half of the samples, where the slowest mode
 * dominates and defective-transient effects have died out.
 */
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "decaycert/fitline.hpp"
#include "decaycert/system.hpp"

namespace decaycert {

struct Trajectory {
  double xi = 0.0;
  std::vector<double> times;             // sample instants, ascending, times[0] == 0
  std::vector<Eigen::VectorXcd> states;  // states[k] = U(times[k])
  std::string method;                    // "rk4" or "expm"
  double dt = 0.0;                       // integration step (rk4) / sample spacing (expm)
};

struct DecayFit {
  double rate = 0.0;  // measured exponential decay rate (positive = decaying)
  LineFit fit;        // underlying fit of ln |U| vs t; max_residual is preserved
};

/**
 * Input:  validated system and frequency.
 * Output: the largest RK4 step accepted by integrate_mode,
 *         0.01 / (1 + |xi| |A|_F + |B^a + B^s|_F).
 */
double stability_step_bound(const SystemSpec& sys, double xi);

/**
 * Input:  system, frequency, initial state of dimension n, horizon t_final > 0,
 *         requested step dt > 0.
 * Action: integrate the mode ODE with classical RK4 using N = ceil(t_final/dt)
 *         equal steps (the realized step t_final/N never exceeds dt); at most
 *         ~4096 evenly strided samples plus the final state are stored.
 * Output: Trajectory with method "rk4".
 * Errors: StepTooLarge when dt exceeds stability_step_bound(sys, xi);
 *         InvalidInput on dimension mismatch or non-positive t_final/dt.
 */
Trajectory integrate_mode(const SystemSpec& sys, double xi, const Eigen::VectorXcd& u0,
                          double t_final, double dt);

/**
 * Input:  system, frequency, initial state, horizon t_final > 0, and the number
 *         of equal sample intervals num_samples >= 1.
 * Action: compute exp(G(xi) t_final/num_samples) once and apply it repeatedly,
 *         storing every sample.  Exact for the linear mode ODE up to the
 *         accuracy of the matrix exponential, with no step-size restriction;
 *         this is what makes week-long RK4 horizons unnecessary when rates are
 *         of order 1e-6.
 * Output: Trajectory with num_samples + 1 states and method "expm".
 * Errors: InvalidInput on dimension mismatch or non-positive arguments.
 */
Trajectory propagate_mode(const SystemSpec& sys, double xi, const Eigen::VectorXcd& u0,
                          double t_final, int num_samples);

/**
 * Input:  trajectory with at least four samples whose total norm drop
 *         |U(T)| / |U(0)| is at most 1e-3.
 * Action: least-squares fit of ln |U(t)| against t over the final half of the
 *         samples.
 * Output: DecayFit with rate = -slope.
 * Errors: InsufficientDecay when the trajectory has not decayed enough for the
 *         tail to be meaningful; InvalidInput on degenerate input (too few
 *         samples, vanishing states).
 */
DecayFit decay_fit(const Trajectory& traj);

}  // namespace decaycert
