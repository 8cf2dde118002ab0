/**
 * Tests for the numerical verification backend: spectral sampling of the
 * frequency symbol, exponent measurement by log-log slope fits, the smallest-
 * singular-value oracle, RK4 and matrix-exponential mode integration, decay-
 * rate measurement, Lyapunov-inequality monitoring, and the frequency sweep
 * with its serial/parallel policies and CSV serialization.
 *
 * Numeric expectations come from closed-form spectra (the damped wave factors
 * through a quadratic), explicit solutions (pure relaxation, norm-conserving
 * transport), and cross-checks between independent code paths (exact
 * polynomial roots vs a dense double eigensolver, RK4 vs the matrix
 * exponential, fitted decay rates vs eigenvalue real parts).  Where the
 * structural certificate is known to be lax (Timoshenko-type models at low
 * frequency), the measured exponent is asserted against the spectrum and the
 * discrepancy against the certificate is pinned explicitly.
 */
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "decaycert/errors.hpp"
#include "decaycert/fitline.hpp"
#include "decaycert/functional.hpp"
#include "decaycert/integrate.hpp"
#include "decaycert/kalman.hpp"
#include "decaycert/spectral.hpp"
#include "decaycert/tree.hpp"
#include "decaycert/verify.hpp"
#include "decaycert/zoo.hpp"
#include "doctest.h"

using namespace decaycert;

namespace {

using Cplx = std::complex<double>;

const std::vector<std::string> kAllModels = {
    "damped-wave", "toy2x2", "toy3x3", "sugimoto", "timoshenko", "timoshenko-memory"};

/** Closed-form damped-wave spectrum: roots of z^2 - z + xi^2. */
std::pair<Cplx, Cplx> dw_spectrum(double xi) {
  const Cplx disc = std::sqrt(Cplx(1.0 - 4.0 * xi * xi, 0.0));
  return {(1.0 - disc) / 2.0, (1.0 + disc) / 2.0};
}

/** Unvalidated system with B^s = 0: norm-conserving transport. */
SystemSpec transport_system() {
  SystemSpec sys;
  sys.n = 2;
  sys.A = RealMatrix(2, 2, {Rational(0), Rational(1), Rational(1), Rational(0)});
  sys.Ba = RealMatrix::zero(2, 2);
  sys.Bs = RealMatrix::zero(2, 2);
  sys.label = "transport";
  return sys;
}

/** Unvalidated diagonal relaxation B^s = diag(1, 2), A = B^a = 0. */
SystemSpec relaxation_system() {
  SystemSpec sys;
  sys.n = 2;
  sys.A = RealMatrix::zero(2, 2);
  sys.Ba = RealMatrix::zero(2, 2);
  sys.Bs = RealMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)});
  sys.label = "relaxation";
  return sys;
}

/** Kalman-violating system: A = I keeps the second state forever undamped. */
SystemSpec stuck_system() {
  return make_system("stuck", RealMatrix::identity(2), RealMatrix::zero(2, 2),
                     RealMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(0)}));
}

Eigen::VectorXcd random_unit(std::mt19937& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd u(n);
  for (int i = 0; i < n; ++i) u(i) = Cplx(gauss(rng), gauss(rng));
  u.normalize();
  return u;
}

/** Tree synthesis for a zoo system, with the shortest admissible sequence. */
LyapunovFunctional improved_for(const std::string& name,
                                const std::map<std::string, Rational>& overrides,
                                Regime regime) {
  const SystemSpec sys = zoo_system(name, overrides);
  const PathReport rep = run_tree(sys, regime);
  REQUIRE(rep.complete);
  int needed = 1;
  for (const Node& node : rep.nodes)
    needed = std::max(needed, node.level + node.eps_shift);
  return synthesize_improved_functional(rep, admissible_sequence(needed));
}

/** Slope of log2 smin vs log2 xi for the order-K stack over xi = 2^-j. */
LineFit stack_smin_fit(const SystemSpec& sys, int order, int j_lo, int j_hi) {
  const PolyMatrix stack = build_kalman_stack(sys, order);
  std::vector<double> xs, ys;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double s = smin_oracle(stack, std::ldexp(1.0, -j));
    REQUIRE(s > 0.0);
    xs.push_back(-j);
    ys.push_back(std::log2(s));
  }
  return fit_line(xs, ys);
}

}  // namespace

// === Spectral sampling ===========================================================

TEST_CASE("spectral sampling: damped-wave closed form across twelve octaves") {
  const SystemSpec dw = zoo_system("damped-wave");
  for (double xi : {0.25, 0.375, 4.0, -2.0, 1024.0, std::ldexp(1.0, 20),
                    -std::ldexp(1.0, 10)}) {
    const SpectralSample s = spectral_rate(dw, xi);
    REQUIRE(s.eigenvalues.size() == 2);
    const auto [lo, hi] = dw_spectrum(xi);
    const double want = std::min(lo.real(), hi.real());
    CHECK(s.xi == xi);
    CHECK(std::abs(s.rate - want) <= 1e-12 * std::abs(want));
    // Both roots are recovered, not just the slow one.
    const double d01 = std::abs(s.eigenvalues[0] - lo) + std::abs(s.eigenvalues[1] - hi);
    const double d10 = std::abs(s.eigenvalues[0] - hi) + std::abs(s.eigenvalues[1] - lo);
    CHECK(std::min(d01, d10) <= 1e-10 * (1.0 + std::abs(xi)));
  }

  SUBCASE("double root at the critical frequency") {
    const SpectralSample s = spectral_rate(dw, 0.5);
    CHECK(std::abs(s.eigenvalues[0] - Cplx(0.5, 0.0)) <= 1e-30);
    CHECK(std::abs(s.eigenvalues[1] - Cplx(0.5, 0.0)) <= 1e-30);
    CHECK(s.rate == 0.5);
  }

  SUBCASE("ordering invariants") {
    for (double xi : {3.0, -7.5, 0.125}) {
      const SpectralSample s = spectral_rate(dw, xi);
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end(),
                           [](const Cplx& a, const Cplx& b) {
                             if (a.real() != b.real()) return a.real() < b.real();
                             return a.imag() < b.imag();
                           }));
      CHECK(s.rate == s.eigenvalues.front().real());
      CHECK(s.rate <= s.eigenvalues.back().real());
    }
  }
}

TEST_CASE("spectral sampling: relaxation spectrum and positivity on the catalog") {
  // Positive definite B^s with A = B^a = 0: the spectrum is that of B^s.
  const SystemSpec relax = relaxation_system();
  for (double xi : {0.1, 5.0}) {
    const SpectralSample s = spectral_rate(relax, xi);
    CHECK(s.rate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.eigenvalues.back().real() == doctest::Approx(2.0).epsilon(1e-14));
  }

  // Every certified model decays at every sampled frequency.
  for (const std::string& name : kAllModels) {
    const SystemSpec sys = zoo_system(name);
    for (double xi : {1.0, -1.0, std::ldexp(1.0, 10), -std::ldexp(1.0, 10),
                      std::ldexp(1.0, -10), -std::ldexp(1.0, -10)}) {
      const SpectralSample s = spectral_rate(sys, xi);
      CHECK_MESSAGE(s.rate > 0.0, name, " at xi=", xi);
      CHECK(static_cast<int>(s.eigenvalues.size()) == sys.n);
    }
  }

  SUBCASE("input guards") {
    const SystemSpec dw = zoo_system("damped-wave");
    for (double bad : {0.0, std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::quiet_NaN()}) {
      try {
        spectral_rate(dw, bad);
        FAIL("expected InvalidInput for xi=" << bad);
      } catch (const CertError& e) {
        CHECK(e.code() == ErrorCode::InvalidInput);
      }
    }
    SystemSpec big;
    big.n = 65;
    big.A = RealMatrix::zero(65, 65);
    big.Ba = RealMatrix::zero(65, 65);
    big.Bs = RealMatrix::identity(65);
    try {
      spectral_rate(big, 1.0);
      FAIL("expected InvalidInput for n = 65");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}

TEST_CASE("spectral sampling: exact roots agree with a dense double eigensolver") {
  for (const std::string& name : kAllModels) {
    const SystemSpec sys = zoo_system(name);
    for (double xi : {1.5, -3.0, 0.4}) {
      const SpectralSample s = spectral_rate(sys, xi);
      Eigen::MatrixXcd e(sys.n, sys.n);
      for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j)
          e(i, j) = Cplx(to_double(sys.Ba.at(i, j) + sys.Bs.at(i, j)),
                         xi * to_double(sys.A.at(i, j)));
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(e, false);
      // Match as multisets: sorting by (re, im) may swap conjugate partners
      // whose real parts agree only to roundoff.
      std::vector<Cplx> dense(solver.eigenvalues().data(), solver.eigenvalues().data() + sys.n);
      double worst = 0.0;
      for (const Cplx& root : s.eigenvalues) {
        auto nearest = std::min_element(dense.begin(), dense.end(),
                                        [&](const Cplx& a, const Cplx& b) {
                                          return std::abs(a - root) < std::abs(b - root);
                                        });
        REQUIRE(nearest != dense.end());
        worst = std::max(worst, std::abs(*nearest - root));
        dense.erase(nearest);
      }
      CHECK_MESSAGE(worst <= 1e-9, name, " at xi=", xi);
    }
  }
}

// === Exponent fits ===============================================================

TEST_CASE("exponent fits: measured decay exponents across the catalog") {
  struct Expected {
    const char* name;
    int hf;
    int lf;
  };

  SUBCASE("default parameters") {
    for (const Expected& e : std::initializer_list<Expected>{{"damped-wave", 0, 1},
                                                             {"toy2x2", 1, 0},
                                                             {"toy3x3", 1, 2},
                                                             {"sugimoto", 1, 1},
                                                             {"timoshenko", 1, 1},
                                                             {"timoshenko-memory", 1, 2}}) {
      const SystemSpec sys = zoo_system(e.name);
      const ExponentFit hf = fit_hf_exponent(sys);
      CHECK_MESSAGE(hf.matched == e.hf, e.name);
      CHECK(std::abs(hf.fit.slope + 2.0 * e.hf) <= 0.01);
      CHECK(hf.fit.max_residual <= 1e-3);
      CHECK(hf.fit.xi_lo == std::ldexp(1.0, 13));
      CHECK(hf.fit.xi_hi == std::ldexp(1.0, 20));
      const ExponentFit lf = fit_lf_exponent(sys);
      CHECK_MESSAGE(lf.matched == e.lf, e.name);
      CHECK(std::abs(lf.fit.slope - 2.0 * e.lf) <= 0.01);
      CHECK(lf.fit.max_residual <= 1e-3);
      CHECK(lf.fit.xi_lo == std::ldexp(1.0, -20));
      CHECK(lf.fit.xi_hi == std::ldexp(1.0, -13));
    }
  }

  SUBCASE("cancellation parameter choices flatten the high-frequency rate") {
    CHECK(fit_hf_exponent(zoo_system("toy2x2", {{"a", 1}, {"b", 1}})).matched == 0);
    CHECK(fit_hf_exponent(zoo_system("timoshenko", {{"a", 1}})).matched == 0);
    CHECK(fit_hf_exponent(zoo_system("timoshenko-memory",
                                     {{"c1", Rational(3, 5)}, {"c2", Rational(4, 5)}}))
              .matched == 0);
    // The low-frequency exponent is insensitive to those choices.
    CHECK(fit_lf_exponent(zoo_system("timoshenko", {{"a", 1}})).matched == 1);
    CHECK(fit_lf_exponent(zoo_system("timoshenko-memory",
                                     {{"c1", Rational(3, 5)}, {"c2", Rational(4, 5)}}))
              .matched == 2);
  }

  SUBCASE("exponents do not depend on generic positive parameters") {
    const std::map<std::string, Rational> alt1 = {
        {"a", 2}, {"Omega", Rational(1, 2)}, {"omega", 3}, {"eps", 1}};
    const std::map<std::string, Rational> alt2 = {
        {"a", Rational(1, 3)}, {"Omega", 2}, {"omega", 1}, {"eps", 5}};
    for (const auto& over : {alt1, alt2}) {
      const SystemSpec sys = zoo_system("sugimoto", over);
      CHECK(fit_hf_exponent(sys).matched == 1);
      CHECK(fit_lf_exponent(sys).matched == 1);
    }
  }
}

TEST_CASE("exponent fits: spectrum vs structural certificate where the bound is lax") {
  // For the first four models the structural low-frequency exponent is sharp;
  // for the Timoshenko pair the structural bound overshoots the spectrum.
  struct Row {
    const char* name;
    int structural_beta;
    int measured_beta;
  };
  for (const Row& r : std::initializer_list<Row>{{"damped-wave", 1, 1},
                                                 {"toy2x2", 0, 0},
                                                 {"toy3x3", 2, 2},
                                                 {"sugimoto", 1, 1},
                                                 {"timoshenko", 3, 1},
                                                 {"timoshenko-memory", 4, 2}}) {
    const SystemSpec sys = zoo_system(r.name);
    const KalmanCertificate cert = full_kalman_certificate(sys);
    CHECK_MESSAGE(cert.beta == r.structural_beta, r.name);
    CHECK_MESSAGE(fit_lf_exponent(sys).matched == r.measured_beta, r.name);
    // The structural exponent is always an upper bound on the measured one.
    CHECK(cert.beta >= r.measured_beta);
    // At high frequency the two agree on every model.
    CHECK_MESSAGE(fit_hf_exponent(sys).matched == cert.alpha, r.name);
  }
}

// === Smallest singular value =====================================================

TEST_CASE("singular-value oracle: point values and input guards") {
  CHECK(smin_oracle(PolyMatrix::identity(3), 7.0) == doctest::Approx(1.0).epsilon(1e-14));

  PolyMatrix diag(2, 2);
  diag.at(0, 0) = Poly(GaussianRational(1));
  diag.at(1, 1) = Poly::monomial(GaussianRational(1), 1);
  const double tiny = std::ldexp(1.0, -10);
  CHECK(smin_oracle(diag, tiny) == doctest::Approx(tiny).epsilon(1e-12));
  CHECK(smin_oracle(diag, 3.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Quartic pinch of the order-2 stack near zero frequency: sigma_min^2 lies
  // strictly between xi^4 and 4 xi^4 for the default 3x3 model.
  const PolyMatrix stack = build_kalman_stack(zoo_system("toy3x3"), 2);
  for (int j : {4, 6, 8}) {
    const double xi = std::ldexp(1.0, -j);
    const double ratio = std::pow(smin_oracle(stack, xi), 2) / std::pow(xi, 4);
    CHECK(ratio > 1.0);
    CHECK(ratio < 4.0);
  }

  SUBCASE("guards") {
    try {
      smin_oracle(PolyMatrix::identity(65), 1.0);
      FAIL("expected InvalidInput for 65x65");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    try {
      smin_oracle(PolyMatrix::identity(2), std::numeric_limits<double>::quiet_NaN());
      FAIL("expected InvalidInput for NaN frequency");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}

TEST_CASE("singular-value oracle: stack slopes vs measured spectral exponents") {
  // sigma_min of the stack vanishes like xi^beta while the spectral rate
  // vanishes like xi^(2 beta); the 2:1 slope ratio ties the two measurements
  // together.  It holds for the models whose structural exponent is sharp.
  struct Sharp {
    const char* name;
    int order;
    int beta;
  };
  for (const Sharp& s : std::initializer_list<Sharp>{{"damped-wave", 1, 1},
                                                     {"toy2x2", 1, 0},
                                                     {"toy3x3", 2, 2},
                                                     {"sugimoto", 2, 1}}) {
    const LineFit fit = stack_smin_fit(zoo_system(s.name), s.order, 3, 10);
    CHECK_MESSAGE(std::abs(fit.slope - s.beta) <= 0.15, s.name, " slope=", fit.slope);
    CHECK(2 * s.beta == 2 * fit_lf_exponent(zoo_system(s.name)).matched);
  }

  // For the Timoshenko pair the stack pinches faster than the spectrum: the
  // singular-value slope tracks the structural exponent (3 resp. 4), not the
  // measured one (1 resp. 2).  The windows stop before sigma_min^2 reaches
  // the double-precision floor of the Gram eigensolver.
  const LineFit tim = stack_smin_fit(zoo_system("timoshenko"), 3, 3, 7);
  CHECK(std::abs(tim.slope - 3.0) <= 0.15);
  const LineFit mem = stack_smin_fit(zoo_system("timoshenko-memory"), 4, 2, 6);
  CHECK(std::abs(mem.slope - 4.0) <= 0.15);
  CHECK(fit_lf_exponent(zoo_system("timoshenko")).matched == 1);
  CHECK(fit_lf_exponent(zoo_system("timoshenko-memory")).matched == 2);
}

// === Mode integration ============================================================

TEST_CASE("mode integration: explicit solutions, conservation, and decay bounds") {
  Eigen::VectorXcd u0(2);
  u0 << Cplx(1.0, 0.5), Cplx(-0.25, 1.0);

  SUBCASE("pure relaxation follows e^{-t} exactly") {
    SystemSpec relax = relaxation_system();
    relax.Bs = RealMatrix::identity(2);
    const Trajectory traj = integrate_mode(relax, 1.0, u0, 8.0, 0.001);
    CHECK(traj.method == "rk4");
    CHECK(traj.xi == 1.0);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(8.0).epsilon(1e-12));
    for (size_t k = 0; k < traj.states.size(); ++k) {
      const double want = u0.norm() * std::exp(-traj.times[k]);
      CHECK(std::abs(traj.states[k].norm() - want) <= 1e-8 * want);
      CHECK(traj.states[k].allFinite());
    }
  }

  SUBCASE("vanishing dissipation conserves the norm") {
    const Trajectory traj = integrate_mode(transport_system(), 3.0, u0, 10.0, 0.0015);
    for (const Eigen::VectorXcd& state : traj.states)
      CHECK(std::abs(state.norm() - u0.norm()) <= 1e-8 * u0.norm());
  }

  SUBCASE("damped wave decays at half rate with margin") {
    Eigen::VectorXcd e1(2);
    e1 << 1.0, 0.0;
    const Trajectory traj = integrate_mode(zoo_system("damped-wave"), 4.0, e1, 20.0, 0.0005);
    CHECK(traj.states.back().norm() <= std::exp(-0.4 * 20.0));
    CHECK(traj.states.back().norm() > 0.0);
  }

  SUBCASE("sample storage is strided, endpoints exact") {
    const Trajectory traj = integrate_mode(zoo_system("damped-wave"), 2.0, u0, 50.0, 0.001);
    CHECK(traj.states.size() == traj.times.size());
    // 50000 steps at stride 12 -> storage stays near the 4096-sample target.
    CHECK(traj.states.size() == 4168);
    CHECK(traj.states.size() < 50000);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(std::is_sorted(traj.times.begin(), traj.times.end()));
  }

  SUBCASE("guards") {
    const SystemSpec dw = zoo_system("damped-wave");
    try {
      integrate_mode(dw, 4.0, u0, 1.0, 0.01);  // bound at xi=4 is ~1.3e-3
      FAIL("expected StepTooLarge");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::StepTooLarge);
    }
    Eigen::VectorXcd wrong(3);
    wrong << 1.0, 0.0, 0.0;
    try {
      integrate_mode(dw, 4.0, wrong, 1.0, 1e-4);
      FAIL("expected InvalidInput for dimension mismatch");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    try {
      integrate_mode(dw, 4.0, u0, -1.0, 1e-4);
      FAIL("expected InvalidInput for negative horizon");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}

TEST_CASE("mode integration: matrix-exponential propagation and RK4 convergence order") {
  const SystemSpec dw = zoo_system("damped-wave");
  Eigen::VectorXcd e1(2);
  e1 << 1.0, 0.0;

  SUBCASE("propagation matches RK4 where both apply") {
    const Trajectory fine = integrate_mode(dw, 3.0, e1, 2.0, 1e-4);
    const Trajectory prop = propagate_mode(dw, 3.0, e1, 2.0, 200);
    CHECK(prop.method == "expm");
    CHECK(prop.states.size() == 201);
    CHECK(prop.times.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((prop.states.back() - fine.states.back()).norm() <= 1e-9);
  }

  SUBCASE("halving the step cuts the RK4 error at least twelvefold") {
    // Reference: one matrix-exponential jump to T = 1 at xi = 16, where the
    // RK4 error is far above the double-precision floor.
    const Eigen::VectorXcd want = propagate_mode(dw, 16.0, e1, 1.0, 1).states.back();
    double previous = 0.0;
    for (double dt : {4e-4, 2e-4, 1e-4}) {
      const double err = (integrate_mode(dw, 16.0, e1, 1.0, dt).states.back() - want).norm();
      if (previous > 0.0) CHECK(previous / err >= 12.0);
      previous = err;
    }
  }

  SUBCASE("guards") {
    try {
      propagate_mode(dw, 3.0, e1, 2.0, 0);
      FAIL("expected InvalidInput for zero samples");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    try {
      propagate_mode(dw, 3.0, e1, 0.0, 4);
      FAIL("expected InvalidInput for zero horizon");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}

// === Decay measurement ===========================================================

TEST_CASE("decay measurement: fitted rates match the spectrum within five percent") {
  SUBCASE("pure relaxation is exact") {
    SystemSpec relax = relaxation_system();
    relax.Bs = RealMatrix::identity(2);
    Eigen::VectorXcd u0(2);
    u0 << Cplx(1.0, 0.5), Cplx(-0.25, 1.0);
    const DecayFit fit = decay_fit(integrate_mode(relax, 1.0, u0, 8.0, 0.001));
    CHECK(std::abs(fit.rate - 1.0) <= 1e-4);
    CHECK(fit.fit.max_residual <= 1e-6);
  }

  SUBCASE("damped wave at high frequency") {
    Eigen::VectorXcd e1(2);
    e1 << 1.0, 0.0;
    const DecayFit fit = decay_fit(integrate_mode(zoo_system("damped-wave"), 16.0, e1, 16.0, 1e-4));
    CHECK(std::abs(fit.rate - 0.5) <= 0.05 * 0.5);
  }

  SUBCASE("every model agrees with its spectrum at a moderate frequency") {
    struct Pick {
      const char* name;
      double xi;
    };
    std::mt19937 rng(11);
    for (const Pick& p : std::initializer_list<Pick>{{"damped-wave", 16.0},
                                                     {"toy2x2", 2.0},
                                                     {"toy3x3", 2.0},
                                                     {"sugimoto", 2.0},
                                                     {"timoshenko", 2.0},
                                                     {"timoshenko-memory", 2.0}}) {
      const SystemSpec sys = zoo_system(p.name);
      const double rate = spectral_rate(sys, p.xi).rate;
      const Eigen::VectorXcd u0 = random_unit(rng, sys.n);
      const double dt = 0.9 * stability_step_bound(sys, p.xi);
      const DecayFit fit = decay_fit(integrate_mode(sys, p.xi, u0, 14.0 / rate, dt));
      CHECK_MESSAGE(std::abs(fit.rate - rate) <= 0.05 * rate, p.name, " fitted=", fit.rate,
                    " spectral=", rate);
    }
  }

  SUBCASE("slow modes are reachable through matrix-exponential propagation") {
    const SystemSpec sys = zoo_system("sugimoto");
    const double xi = std::ldexp(1.0, 10);
    const double rate = spectral_rate(sys, xi).rate;
    const Eigen::VectorXcd u0 = Eigen::VectorXcd::Ones(3).normalized();
    const DecayFit fit = decay_fit(propagate_mode(sys, xi, u0, 14.0 / rate, 1024));
    CHECK(std::abs(fit.rate - rate) <= 0.05 * rate);
  }

  SUBCASE("insufficient decay is rejected, not fitted") {
    SystemSpec relax = relaxation_system();
    relax.Bs = RealMatrix::identity(2);
    Eigen::VectorXcd u0(2);
    u0 << Cplx(1.0, 0.0), Cplx(0.0, 1.0);
    try {
      decay_fit(integrate_mode(relax, 1.0, u0, 2.0, 0.001));
      FAIL("expected InsufficientDecay after only two time units");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InsufficientDecay);
    }
    try {
      decay_fit(propagate_mode(relax, 1.0, u0, 20.0, 2));  // three samples only
      FAIL("expected InvalidInput for a three-sample trajectory");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}

TEST_CASE("decay measurement: exact derivatives match finite differences on trajectories") {
  // d/dt of the functional along the flow, evaluated algebraically, must agree
  // with a centered difference of the functional itself along short RK4 hops.
  struct Probe {
    const char* name;
    Regime regime;
    double xi;
  };
  std::mt19937 rng(29);
  for (const Probe& p : std::initializer_list<Probe>{{"toy3x3", Regime::HF, 2.0},
                                                     {"damped-wave", Regime::LF, 0.5}}) {
    const SystemSpec sys = zoo_system(p.name);
    const KalmanCertificate cert = check_kalman(sys);
    const LyapunovFunctional fn = synthesize_kalman_functional(sys, cert.K, p.regime);
    const Trajectory traj =
        integrate_mode(sys, p.xi, random_unit(rng, sys.n), 3.0, 1e-4);
    const Eigen::MatrixXcd g = drift_matrix(sys, p.xi);
    const double h = 1e-4;
    auto hop = [&](const Eigen::VectorXcd& u, double dt) {
      const Eigen::VectorXcd k1 = g * u;
      const Eigen::VectorXcd k2 = g * (u + (dt / 2.0) * k1);
      const Eigen::VectorXcd k3 = g * (u + (dt / 2.0) * k2);
      const Eigen::VectorXcd k4 = g * (u + dt * k3);
      return (u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).eval();
    };
    for (size_t k = 0; k < traj.states.size(); k += traj.states.size() / 10) {
      const Eigen::VectorXcd& u = traj.states[k];
      const double fd =
          (evaluate(fn, p.xi, hop(u, h)) - evaluate(fn, p.xi, hop(u, -h))) / (2.0 * h);
      const double exact = ddt_evaluate(fn, sys, p.xi, u);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

// === Lyapunov monitoring =========================================================

TEST_CASE("lyapunov monitoring: energy on the damped wave never increases") {
  const SystemSpec dw = zoo_system("damped-wave");
  const LyapunovFunctional energy = energy_functional(Regime::HF, 2);
  std::mt19937 rng(2024);
  for (double xi : {1.0, 2.0, 8.0}) {
    const Trajectory traj = integrate_mode(dw, xi, random_unit(rng, 2), 5.0, 2e-4);
    const MonitorResult m = lyapunov_monitor(energy, dw, traj, 0.0);
    CHECK_MESSAGE(m.pass, "xi=", xi);
    CHECK(m.worst_margin <= 1e-10);
    CHECK(m.empirical_c > 0.0);
  }
}

TEST_CASE("lyapunov monitoring: certified functionals sustain their rate at scale") {
  std::mt19937 rng(7777);

  SUBCASE("cancellation functional keeps a uniform unweighted rate") {
    // With the cancellation parameter the high-frequency exponent drops to 0,
    // so the raw (unweighted) Lyapunov decay rate must stay bounded away from
    // zero across the whole frequency ladder.
    const SystemSpec sys = zoo_system("timoshenko", {{"a", 1}});
    const LyapunovFunctional fn = improved_for("timoshenko", {{"a", 1}}, Regime::HF);
    REQUIRE(fn.decay_exponent == 0);
    double c_min = std::numeric_limits<double>::infinity();
    double c_max = 0.0;
    for (int j = 8; j <= 14; j += 2) {
      const double xi = std::ldexp(1.0, j);
      const Trajectory traj = propagate_mode(sys, xi, random_unit(rng, 4), 100.0, 4096);
      const MonitorResult m = lyapunov_monitor(fn, sys, traj, 0.0);
      CHECK_MESSAGE(m.pass, "xi=2^", j);
      CHECK_MESSAGE(m.empirical_c >= 0.02, "xi=2^", j, " c=", m.empirical_c);
      c_min = std::min(c_min, m.empirical_c);
      c_max = std::max(c_max, m.empirical_c);
    }
    CHECK(c_max / c_min <= 10.0);
  }

  SUBCASE("generic functional decays like the inverse frequency square") {
    // Without cancellation the unweighted rate must shrink like xi^-2 — the
    // empirical signature of the predicted high-frequency exponent 1.
    const SystemSpec sys = zoo_system("timoshenko");
    const KalmanCertificate cert = check_kalman(sys);
    const LyapunovFunctional fn = synthesize_kalman_functional(sys, cert.K, Regime::HF);
    REQUIRE(fn.decay_exponent == 1);
    std::vector<double> weighted;
    for (int j = 8; j <= 14; j += 2) {
      const double xi = std::ldexp(1.0, j);
      const Trajectory traj = propagate_mode(sys, xi, random_unit(rng, 4), 150.0, 8192);
      const MonitorResult m = lyapunov_monitor(fn, sys, traj, 0.0);
      CHECK_MESSAGE(m.pass, "xi=2^", j);
      const double rate = spectral_rate(sys, xi).rate;
      CHECK(m.empirical_c / (2.0 * rate) >= 0.02);
      CHECK(m.empirical_c / (2.0 * rate) <= 1.5);
      weighted.push_back(m.empirical_c * xi * xi);
    }
    for (const double w : weighted) {
      CHECK(w >= 1e-3);
      CHECK(w <= 1.0);
    }
    // The raw constant itself collapses by orders of magnitude over the ladder.
    CHECK(weighted.front() / std::ldexp(1.0, 16) >=
          100.0 * weighted.back() / std::ldexp(1.0, 28));
  }

  SUBCASE("a functional foreign to the dynamics is flagged, not excused") {
    // A damped-wave functional along norm-conserving transport oscillates:
    // monitoring must report failure rather than smooth it over.
    const LyapunovFunctional fn = improved_for("damped-wave", {}, Regime::HF);
    const SystemSpec transport = transport_system();
    const Trajectory traj =
        integrate_mode(transport, 2.0, random_unit(rng, 2), 10.0, 1e-3);
    const MonitorResult m = lyapunov_monitor(fn, transport, traj, fn.decay_exponent);
    CHECK_FALSE(m.pass);
    CHECK(m.worst_margin > 1e-10);
  }

  SUBCASE("guards") {
    const LyapunovFunctional energy = energy_functional(Regime::HF, 2);
    const SystemSpec dw = zoo_system("damped-wave");
    Trajectory degenerate;
    degenerate.xi = 2.0;
    degenerate.times = {0.0};
    degenerate.states = {Eigen::VectorXcd::Ones(2)};
    try {
      lyapunov_monitor(energy, dw, degenerate, 0.0);
      FAIL("expected InvalidInput for a single-sample trajectory");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    Trajectory zero;
    zero.xi = 2.0;
    zero.times = {0.0, 1.0};
    zero.states = {Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(2)};
    try {
      lyapunov_monitor(energy, dw, zero, 0.0);
      FAIL("expected InvalidInput for a trajectory starting at zero");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    const Trajectory low = integrate_mode(dw, 0.25, random_unit(rng, 2), 1.0, 1e-3);
    try {
      lyapunov_monitor(energy, dw, low, 0.0);  // HF functional, |xi| < 1
      FAIL("expected RegimeMismatch");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::RegimeMismatch);
    }
  }
}

// === Frequency sweep =============================================================

TEST_CASE("frequency sweep: parallel rows are bitwise identical to the serial reference") {
  const SystemSpec dw = zoo_system("damped-wave");
  const LyapunovFunctional fn = synthesize_kalman_functional(dw, 1, Regime::HF);
  SweepOptions options;
  options.regime = Regime::HF;
  options.j_min = 0;
  options.j_max = 6;
  options.functional = &fn;

  const std::vector<SweepRow> serial = frequency_sweep(dw, options, SweepPolicy::Serial);
  const std::vector<SweepRow> parallel = frequency_sweep(dw, options, SweepPolicy::Parallel);
  REQUIRE(serial.size() == 7);
  REQUIRE(parallel.size() == 7);
  for (size_t k = 0; k < serial.size(); ++k) {
    CAPTURE(k);
    CHECK(serial[k].xi == parallel[k].xi);
    CHECK(serial[k].smin == parallel[k].smin);
    CHECK(serial[k].spectral_rate == parallel[k].spectral_rate);
    // NaN-tolerant bitwise comparison for the measured columns.
    CHECK(std::memcmp(&serial[k].fitted_rate, &parallel[k].fitted_rate, sizeof(double)) == 0);
    CHECK(std::memcmp(&serial[k].lyap_margin, &parallel[k].lyap_margin, sizeof(double)) == 0);
  }

  SUBCASE("row content on the damped wave") {
    for (size_t k = 0; k < serial.size(); ++k) {
      const SweepRow& row = serial[k];
      CHECK(row.xi == std::ldexp(1.0, static_cast<int>(k)));
      CHECK(row.smin == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(row.spectral_rate == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(std::abs(row.fitted_rate - 0.5) <= 0.05 * 0.5);
      CHECK(row.lyap_margin <= 1e-10);  // the certified functional decreases
    }
  }
}

TEST_CASE("frequency sweep: low-frequency rows, CSV shape, and failure paths") {
  const SystemSpec dw = zoo_system("damped-wave");
  SweepOptions options;
  options.regime = Regime::LF;
  options.j_min = 0;
  options.j_max = 6;
  const std::vector<SweepRow> rows = frequency_sweep(dw, options, SweepPolicy::Parallel);
  REQUIRE(rows.size() == 7);

  SUBCASE("rows ascend in frequency and match the low-frequency laws") {
    for (size_t k = 0; k < rows.size(); ++k) {
      const SweepRow& row = rows[k];
      CHECK(row.xi == std::ldexp(1.0, static_cast<int>(k) - 6));
      // Damped-wave stack pinches exactly linearly below frequency one.
      CHECK(row.smin == doctest::Approx(row.xi).epsilon(1e-12));
      CHECK(std::isnan(row.lyap_margin));  // no functional supplied
      if (row.xi != 0.5) {  // defective double eigenvalue: polynomial transient
        CHECK(std::abs(row.fitted_rate - row.spectral_rate) <= 0.05 * row.spectral_rate);
      } else {
        CHECK(std::abs(row.fitted_rate - row.spectral_rate) <= 0.15 * row.spectral_rate);
      }
    }
  }

  SUBCASE("CSV serialization") {
    std::ostringstream out;
    write_sweep_csv(out, rows);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "xi,smin,spectral_rate,fitted_rate,lyap_margin");
    size_t count = 0;
    while (std::getline(in, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == 4);
      CHECK(line.back() == ',');  // empty monitor column
      ++count;
    }
    CHECK(count == rows.size());
  }

  SUBCASE("undecayable probes surface as empty cells, not crashes") {
    SweepOptions bad;
    bad.regime = Regime::HF;
    bad.j_min = 0;
    bad.j_max = 2;
    bad.kalman_order = 0;
    const std::vector<SweepRow> stuck = frequency_sweep(stuck_system(), bad, SweepPolicy::Serial);
    for (const SweepRow& row : stuck) {
      CHECK(row.smin == 0.0);                       // rank-deficient stack
      CHECK(std::abs(row.spectral_rate) <= 1e-30);  // undamped mode
      CHECK(std::isnan(row.fitted_rate));
    }
  }

  SUBCASE("guards") {
    try {
      SweepOptions inverted;
      inverted.j_min = 4;
      inverted.j_max = 2;
      frequency_sweep(dw, inverted, SweepPolicy::Serial);
      FAIL("expected InvalidInput for an inverted range");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
    try {
      SweepOptions plain;
      frequency_sweep(stuck_system(), plain, SweepPolicy::Serial);
      FAIL("expected KalmanViolated without an explicit order");
    } catch (const CertError& e) {
      CHECK(e.code() == ErrorCode::KalmanViolated);
    }
  }
}
