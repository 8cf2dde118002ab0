#include "decaycert/integrate.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "decaycert/errors.hpp"
#include "decaycert/functional.hpp"  // drift_matrix

namespace decaycert {

namespace {

constexpr int kMaxStoredSamples = 4096;

double frobenius(const RealMatrix& m) {
  double s = 0.0;
  for (const Rational& x : m.e) {
    const double v = to_double(x);
    s += v * v;
  }
  return std::sqrt(s);
}

void check_state(const SystemSpec& sys, const Eigen::VectorXcd& u0, const char* who) {
  if (u0.size() != sys.n)
    throw CertError(ErrorCode::InvalidInput,
                    std::string(who) + ": initial state dimension does not match the system");
  if (!u0.allFinite())
    throw CertError(ErrorCode::InvalidInput, std::string(who) + ": initial state is not finite");
}

}  // namespace

double stability_step_bound(const SystemSpec& sys, double xi) {
  return 0.01 / (1.0 + std::abs(xi) * frobenius(sys.A) + frobenius(sys.Ba + sys.Bs));
}

Trajectory integrate_mode(const SystemSpec& sys, double xi, const Eigen::VectorXcd& u0,
                          double t_final, double dt) {
  check_state(sys, u0, "integrate_mode");
  if (!(t_final > 0.0) || !(dt > 0.0))
    throw CertError(ErrorCode::InvalidInput, "integrate_mode: horizon and step must be positive");
  const double bound = stability_step_bound(sys, xi);
  if (dt > bound)
    throw CertError(ErrorCode::StepTooLarge,
                    "integrate_mode: step " + std::to_string(dt) +
                        " exceeds the stability bound " + std::to_string(bound));

  const long n_steps = static_cast<long>(std::ceil(t_final / dt));
  const double h = t_final / static_cast<double>(n_steps);
  const long stride = std::max(1L, n_steps / kMaxStoredSamples);

  const Eigen::MatrixXcd g = drift_matrix(sys, xi);
  Trajectory traj;
  traj.xi = xi;
  traj.method = "rk4";
  traj.dt = h;
  traj.times.reserve(static_cast<size_t>(n_steps / stride) + 2);
  traj.states.reserve(static_cast<size_t>(n_steps / stride) + 2);
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  Eigen::VectorXcd u = u0;
  for (long k = 1; k <= n_steps; ++k) {
    const Eigen::VectorXcd k1 = g * u;
    const Eigen::VectorXcd k2 = g * (u + (h / 2.0) * k1);
    const Eigen::VectorXcd k3 = g * (u + (h / 2.0) * k2);
    const Eigen::VectorXcd k4 = g * (u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k % stride == 0 || k == n_steps) {
      traj.times.push_back(h * static_cast<double>(k));
      traj.states.push_back(u);
    }
  }
  return traj;
}

Trajectory propagate_mode(const SystemSpec& sys, double xi, const Eigen::VectorXcd& u0,
                          double t_final, int num_samples) {
  check_state(sys, u0, "propagate_mode");
  if (!(t_final > 0.0) || num_samples < 1)
    throw CertError(ErrorCode::InvalidInput,
                    "propagate_mode: horizon must be positive and num_samples >= 1");

  const double h = t_final / num_samples;
  const Eigen::MatrixXcd step = (drift_matrix(sys, xi) * h).exp();

  Trajectory traj;
  traj.xi = xi;
  traj.method = "expm";
  traj.dt = h;
  traj.times.reserve(static_cast<size_t>(num_samples) + 1);
  traj.states.reserve(static_cast<size_t>(num_samples) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  Eigen::VectorXcd u = u0;
  for (int k = 1; k <= num_samples; ++k) {
    u = step * u;
    traj.times.push_back(h * static_cast<double>(k));
    traj.states.push_back(u);
  }
  return traj;
}

DecayFit decay_fit(const Trajectory& traj) {
  if (traj.states.size() < 4 || traj.states.size() != traj.times.size())
    throw CertError(ErrorCode::InvalidInput, "decay_fit: trajectory needs at least four samples");
  const double head = traj.states.front().norm();
  const double tail = traj.states.back().norm();
  if (!(head > 0.0))
    throw CertError(ErrorCode::InvalidInput, "decay_fit: initial state is zero");
  if (!(tail / head <= 1e-3))
    throw CertError(ErrorCode::InsufficientDecay,
                    "decay_fit: norm only dropped by a factor " + std::to_string(tail / head) +
                        "; extend the horizon until the drop reaches 1e-3");

  const size_t begin = traj.states.size() / 2;
  std::vector<double> xs, ys;
  xs.reserve(traj.states.size() - begin);
  ys.reserve(traj.states.size() - begin);
  for (size_t k = begin; k < traj.states.size(); ++k) {
    const double norm = traj.states[k].norm();
    if (!(norm > 0.0))
      throw CertError(ErrorCode::InvalidInput, "decay_fit: state vanished inside the fit window");
    xs.push_back(traj.times[k]);
    ys.push_back(std::log(norm));
  }
  DecayFit result;
  result.fit = fit_line(xs, ys);
  result.rate = -result.fit.slope;
  return result;
}

}  // namespace decaycert
