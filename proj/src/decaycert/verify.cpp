#include "decaycert/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "decaycert/errors.hpp"
#include "decaycert/kalman.hpp"
#include "decaycert/spectral.hpp"

namespace decaycert {

namespace {

constexpr double kMonotoneTolerance = 1e-10;  // relative increase of L treated as roundoff
constexpr double kValueFloor = 1e-280;        // below this, a sample is fully decayed

/** Rates are sampled along the ladder xi = 2^(sign * j), j in [lo, hi]. */
std::vector<double> ladder_rates(const SystemSpec& sys, int sign, int lo, int hi) {
  std::vector<double> rates;
  rates.reserve(static_cast<size_t>(hi - lo + 1));
  for (int j = lo; j <= hi; ++j) {
    const double xi = std::ldexp(1.0, sign * j);
    const double rate = spectral_rate(sys, xi).rate;
    if (!(rate > 0.0))
      throw CertError(ErrorCode::InvalidInput,
                      "exponent fit: nonpositive spectral rate at xi = 2^" +
                          std::to_string(sign * j) + "; the system does not decay there");
    rates.push_back(rate);
  }
  return rates;
}

/** Fit log2(rate) vs log2(xi) over the deepest kFitWindowPoints ladder points. */
SlopeFit ladder_fit(const std::vector<double>& rates, int sign, int lo, int hi) {
  const int first = hi - lo + 1 - kFitWindowPoints;  // index of the first retained point
  std::vector<double> xs, ys;
  xs.reserve(kFitWindowPoints);
  ys.reserve(kFitWindowPoints);
  for (int k = first; k <= hi - lo; ++k) {
    xs.push_back(static_cast<double>(sign * (lo + k)));
    ys.push_back(std::log2(rates[static_cast<size_t>(k)]));
  }
  const LineFit line = fit_line(xs, ys);
  SlopeFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.max_residual = line.max_residual;
  fit.xi_lo = std::ldexp(1.0, sign > 0 ? lo + first : -hi);
  fit.xi_hi = std::ldexp(1.0, sign > 0 ? hi : -(lo + first));
  return fit;
}

int snap_to_integer(double value, const char* which) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > kFitSlopeTolerance)
    throw CertError(ErrorCode::NonIntegerSlope,
                    std::string("fit_") + which + "_exponent: rescaled slope " +
                        std::to_string(value) + " is not within " +
                        std::to_string(kFitSlopeTolerance) + " of an integer");
  return static_cast<int>(rounded);
}

std::complex<double> poly_at(const Poly& p, double xi) {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
    acc = acc * xi + std::complex<double>(to_double(it->re), to_double(it->im));
  return acc;
}

Eigen::VectorXcd random_unit_state(std::mt19937& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd u(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u(i) = std::complex<double>(re, im);
  }
  u.normalize();
  return u;
}

}  // namespace

// === Slope fits ==================================================================

ExponentFit fit_hf_exponent(const SystemSpec& sys) {
  const std::vector<double> rates = ladder_rates(sys, +1, kFitLadderLoExp, kFitLadderHiExp);
  ExponentFit result;
  result.fit = ladder_fit(rates, +1, kFitLadderLoExp, kFitLadderHiExp);
  result.matched = snap_to_integer(-result.fit.slope / 2.0, "hf");
  return result;
}

ExponentFit fit_lf_exponent(const SystemSpec& sys) {
  const std::vector<double> rates = ladder_rates(sys, -1, kFitLadderLoExp, kFitLadderHiExp);
  ExponentFit result;
  result.fit = ladder_fit(rates, -1, kFitLadderLoExp, kFitLadderHiExp);
  result.matched = snap_to_integer(result.fit.slope / 2.0, "lf");
  return result;
}

// === Smallest singular value =====================================================

double smin_oracle(const PolyMatrix& m, double xi) {
  if (m.rows < 1 || m.cols < 1 || m.rows > 64 || m.cols > 64)
    throw CertError(ErrorCode::InvalidInput,
                    "smin_oracle: matrix dimensions must be in [1, 64]");
  if (!std::isfinite(xi))
    throw CertError(ErrorCode::InvalidInput, "smin_oracle: xi must be finite");

  Eigen::MatrixXcd value(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) value(i, j) = poly_at(m.at(i, j), xi);
  const Eigen::MatrixXcd gram = value.adjoint() * value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  const double lambda_min = solver.eigenvalues().minCoeff();
  return std::sqrt(std::max(lambda_min, 0.0));
}

// === Lyapunov-inequality monitoring ==============================================

MonitorResult lyapunov_monitor(const LyapunovFunctional& functional, const SystemSpec& sys,
                               const Trajectory& traj, double predicted_exponent) {
  if (traj.states.size() < 2 || traj.states.size() != traj.times.size())
    throw CertError(ErrorCode::InvalidInput,
                    "lyapunov_monitor: trajectory needs at least two samples");

  const double weight = (functional.regime == Regime::HF)
                            ? std::pow(std::abs(traj.xi), -2.0 * predicted_exponent)
                            : std::pow(std::abs(traj.xi), 2.0 * predicted_exponent);

  MonitorResult result;
  result.empirical_c = std::numeric_limits<double>::infinity();
  result.worst_margin = -std::numeric_limits<double>::infinity();
  double previous = -1.0;
  bool any = false;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const double value = evaluate(functional, traj.xi, traj.states[k]);
    if (k > 0) result.worst_margin = std::max(result.worst_margin, (value - previous) / previous);
    if (value <= kValueFloor) break;  // fully decayed; later ratios are pure roundoff
    const double slope = ddt_evaluate(functional, sys, traj.xi, traj.states[k]);
    result.empirical_c = std::min(result.empirical_c, -slope / (weight * value));
    previous = value;
    any = true;
  }
  if (!any)
    throw CertError(ErrorCode::InvalidInput, "lyapunov_monitor: trajectory starts at zero");
  result.pass = result.worst_margin <= kMonotoneTolerance && result.empirical_c > 0.0;
  return result;
}

// === Frequency sweep =============================================================

namespace {

SweepRow sweep_row(const SystemSpec& sys, const PolyMatrix& stack, const SweepOptions& options,
                   int j) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepRow row;
  row.xi = std::ldexp(1.0, options.regime == Regime::HF ? j : -j);
  row.smin = smin_oracle(stack, row.xi);
  row.spectral_rate = spectral_rate(sys, row.xi).rate;

  row.fitted_rate = nan;
  if (row.spectral_rate > 0.0) {
    try {
      const Eigen::VectorXcd u0 = Eigen::VectorXcd::Ones(sys.n).normalized();
      const Trajectory traj = propagate_mode(sys, row.xi, u0, 14.0 / row.spectral_rate,
                                             options.trajectory_samples);
      row.fitted_rate = decay_fit(traj).rate;
    } catch (const CertError&) {
      // The all-ones probe may miss the slowest mode; report the gap as NaN.
    }
  }

  row.lyap_margin = nan;
  if (options.functional != nullptr) {
    std::mt19937 rng(options.seed + static_cast<unsigned>(j));
    const Eigen::VectorXcd u0 = random_unit_state(rng, sys.n);
    const double dt = 0.5 * stability_step_bound(sys, row.xi);
    const Trajectory traj = integrate_mode(sys, row.xi, u0, options.monitor_t, dt);
    const MonitorResult monitor =
        lyapunov_monitor(*options.functional, sys, traj, options.functional->decay_exponent);
    row.lyap_margin = monitor.worst_margin;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> frequency_sweep(const SystemSpec& sys, const SweepOptions& options,
                                      SweepPolicy policy) {
  if (options.j_min < 0 || options.j_min > options.j_max)
    throw CertError(ErrorCode::InvalidInput,
                    "frequency_sweep: exponent range must satisfy 0 <= j_min <= j_max");
  int order = options.kalman_order;
  if (order < 0) {
    const KalmanCertificate cert = check_kalman(sys);
    if (!cert.holds)
      throw CertError(ErrorCode::KalmanViolated,
                      "frequency_sweep: no stack order given and the system has none");
    order = cert.K;
  }
  const PolyMatrix stack = build_kalman_stack(sys, order);

  const int count = options.j_max - options.j_min + 1;
  std::vector<SweepRow> rows(static_cast<size_t>(count));
  // Ascending xi: ascending j for high frequencies, descending j for low.
  auto exponent_of = [&](int idx) {
    return options.regime == Regime::HF ? options.j_min + idx : options.j_max - idx;
  };

  std::exception_ptr failure;
  if (policy == SweepPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < count; ++idx) {
      try {
        rows[static_cast<size_t>(idx)] = sweep_row(sys, stack, options, exponent_of(idx));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (int idx = 0; idx < count; ++idx) {
      try {
        rows[static_cast<size_t>(idx)] = sweep_row(sys, stack, options, exponent_of(idx));
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const auto emit = [&out](double v) {
    if (std::isnan(v)) return;  // empty field
    std::ostringstream s;
    s << std::setprecision(17) << v;
    out << s.str();
  };
  out << "xi,smin,spectral_rate,fitted_rate,lyap_margin\n";
  for (const SweepRow& row : rows) {
    emit(row.xi);
    out << ',';
    emit(row.smin);
    out << ',';
    emit(row.spectral_rate);
    out << ',';
    emit(row.fitted_rate);
    out << ',';
    emit(row.lyap_margin);
    out << '\n';
  }
}

}  // namespace decaycert
